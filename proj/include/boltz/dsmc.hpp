#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "boltz/kernel.hpp"
#include "boltz/reference.hpp"

namespace boltz {

struct ParticleEnsemble {
    int d = 3;
    double rho = 1.0;         // mass density carried by the ensemble
    std::vector<double> v;    // N_p x d, particle-major
    VHSKernel kernel;
    std::uint64_t seed = 0;
    int run = 0;
    std::mt19937_64 rng;

    std::size_t size() const { return v.size() / static_cast<std::size_t>(d); }
    double* particle(std::size_t i) { return v.data() + i * d; }
    const double* particle(std::size_t i) const { return v.data() + i * d; }
};

// Independent stream per (seed, run).
std::mt19937_64 make_stream(std::uint64_t seed, int run);

// i.i.d. velocities from a homogeneous initial condition; the ball indicator
// is sampled without mollification.
ParticleEnsemble sample_particles(const InitialCondition& ic, int d, std::size_t Np, const VHSKernel& kernel,
                                  std::uint64_t seed, int run = 0);

struct CollisionStats {
    std::size_t candidates = 0;
    std::size_t collisions = 0;
    double max_probability = 0.0;
    double momentum_defect = 0.0;  // max |sum v' - sum v| over colliding pairs, relative to pair speed scale
    double energy_defect = 0.0;    // max relative change of |v|^2 + |v*|^2 over colliding pairs
};

// One Nanbu-Babovsky step: random pairing, each pair a candidate with the
// majorant probability |S^{d-1}| C rho (2 v_max)^gamma dt, accepted with
// (|g| / 2 v_max)^gamma; post-collision relative velocity uniform on the
// sphere. Throws NumericalError when the majorant probability exceeds 1.
CollisionStats collide_step(ParticleEnsemble& ens, double dt);

struct EnsembleTotals {
    std::array<double, 3> momentum{0.0, 0.0, 0.0};
    double energy = 0.0;
};
EnsembleTotals ensemble_totals(const ParticleEnsemble& ens);

// Observables: T, T1..Td (P_ii / rho), P12, M4, M6, M8.
std::vector<std::string> dsmc_observables(int d);
std::vector<double> ensemble_observables(const ParticleEnsemble& ens);

struct EstimatedMoments {
    std::vector<std::string> names;
    std::vector<double> times;
    std::vector<std::vector<double>> mean;    // [time][observable]
    std::vector<std::vector<double>> stderr_;  // NaN when fewer than two runs
    int runs = 0;
    std::size_t Np = 0;
    bool has_stderr = false;
    int index(const std::string& name) const;
};

// samples[run][time][observable]
EstimatedMoments estimate_moments(const std::vector<std::vector<std::vector<double>>>& samples,
                                  const std::vector<double>& times, const std::vector<std::string>& names,
                                  std::size_t Np);

struct DsmcConfig {
    int d = 3;
    VHSKernel kernel = hard_spheres_3d();
    InitialCondition ic;
    std::size_t Np = 10000;
    int runs = 50;
    double dt = 0.01;
    double t_end = 3.0;
    int output_every = 10;
    std::uint64_t seed = 1;
    bool check_conservation = false;  // assert per-collision conservation every step
    std::string out_dir;
};

EstimatedMoments run_dsmc(const DsmcConfig& cfg);

}  // namespace boltz
