#pragma once

#include <string>

#include "boltz/classical.hpp"
#include "boltz/fast.hpp"

namespace boltz {

// Binary kernel-mode cache. Little-endian header
//   magic "BOLTZKM\0", u32 version, u32 representation (0 classical, 1 carleman),
//   i32 d, i32 n_v, f64 gamma, f64 C, f64 R, f64 T_dom, i32 M1, i32 M2, u64 count
// followed by count complex<double> values (imaginary parts zero).
// Classical payload: F table then diag. Carleman payload: alpha tables,
// alpha' tables, diag.

void save_classical(const ClassicalModesTable& t, const std::string& path);
void save_fast(const FastKernelTables& t, const std::string& path);

// Throw std::runtime_error on a missing file, a malformed file, or a header
// that does not match the requested parameters.
ClassicalModesTable load_classical(const std::string& path, const VelocityGrid& grid, const VHSKernel& kernel,
                                   double R);
FastKernelTables load_fast(const std::string& path, const VelocityGrid& grid, const VHSKernel& kernel, double R,
                           int M1, int M2);

// Load from cache_dir when a matching file exists, otherwise compute and
// store. An empty cache_dir disables caching.
ClassicalModesTable cached_classical_modes(const std::string& cache_dir, const VelocityGrid& grid,
                                           const VHSKernel& kernel, double R);
FastKernelTables cached_fast_decomposition(const std::string& cache_dir, const VelocityGrid& grid,
                                           const VHSKernel& kernel, double R, int M1, int M2);

}  // namespace boltz
