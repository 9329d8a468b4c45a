#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <vector>

#include "boltz/grid.hpp"

namespace boltz {

using cplx = std::complex<double>;

void* aligned_fft_alloc(std::size_t bytes);
void aligned_fft_free(void* p) noexcept;

// SIMD-aligned storage so plans made on scratch buffers apply to any array.
template <class T>
struct FftAllocator {
    using value_type = T;
    FftAllocator() noexcept = default;
    template <class U>
    FftAllocator(const FftAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) { return static_cast<T*>(aligned_fft_alloc(n * sizeof(T))); }
    void deallocate(T* p, std::size_t) noexcept { aligned_fft_free(p); }
    template <class U>
    bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

using cvec = std::vector<cplx, FftAllocator<cplx>>;

// Unnormalized d-dimensional DFT on n^d complex values in FFT order.
// forward: X_k = sum_j x_j e^{-2 pi i k.j/n}; backward uses e^{+...}.
// Buffers must come from FftAllocator. In-place calls are allowed.
class FftBackend {
public:
    virtual ~FftBackend() = default;
    virtual void forward(const cplx* in, cplx* out) const = 0;
    virtual void backward(const cplx* in, cplx* out) const = 0;
    virtual int dim() const = 0;
    virtual int points() const = 0;
    virtual const char* name() const = 0;
};

std::shared_ptr<const FftBackend> make_fftw_backend(int d, int n);

// Coefficients f^_k with f(v) = sum_k f^_k e^{i pi k.v / T}, FFT-ordered.
struct SpectralField {
    VelocityGrid grid;
    cvec c;
};

class SpectralTransform {
public:
    explicit SpectralTransform(const VelocityGrid& grid, std::shared_ptr<const FftBackend> backend = nullptr);

    SpectralField forward(const std::vector<double>& values) const;
    std::vector<double> inverse(const SpectralField& f) const;
    void inverse_complex(const SpectralField& f, cvec& out) const;

    const VelocityGrid& grid() const { return grid_; }
    const FftBackend& backend() const { return *backend_; }
    std::shared_ptr<const FftBackend> backend_ptr() const { return backend_; }
    // (-1)^{sum k}, the phase between node-origin and box-origin coefficients.
    double parity(std::size_t idx) const { return parity_[idx]; }

private:
    VelocityGrid grid_;
    std::shared_ptr<const FftBackend> backend_;
    std::vector<double> parity_;
};

}  // namespace boltz
