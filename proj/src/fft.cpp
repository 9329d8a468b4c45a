#include "boltz/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace boltz {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class FftwBackend final : public FftBackend {
public:
    FftwBackend(int d, int n) : d_(d), n_(n) {
        std::size_t total = 1;
        int dims[3] = {n, n, n};
        for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(n);
        cvec a(total), b(total);
        auto* pa = reinterpret_cast<fftw_complex*>(a.data());
        auto* pb = reinterpret_cast<fftw_complex*>(b.data());
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_out_ = fftw_plan_dft(d, dims, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_out_ = fftw_plan_dft(d, dims, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE);
        fwd_in_ = fftw_plan_dft(d, dims, pa, pa, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_in_ = fftw_plan_dft(d, dims, pa, pa, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_out_ || !bwd_out_ || !fwd_in_ || !bwd_in_) throw std::runtime_error("FFTW planning failed");
    }

    ~FftwBackend() override {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_out_);
        fftw_destroy_plan(bwd_out_);
        fftw_destroy_plan(fwd_in_);
        fftw_destroy_plan(bwd_in_);
    }

    void forward(const cplx* in, cplx* out) const override { run(in == out ? fwd_in_ : fwd_out_, in, out); }
    void backward(const cplx* in, cplx* out) const override { run(in == out ? bwd_in_ : bwd_out_, in, out); }
    int dim() const override { return d_; }
    int points() const override { return n_; }
    const char* name() const override { return "fftw3"; }

private:
    static void run(fftw_plan p, const cplx* in, cplx* out) {
        // new-array execute never writes to the input of an out-of-place c2c plan
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

    int d_;
    int n_;
    fftw_plan fwd_out_ = nullptr;
    fftw_plan bwd_out_ = nullptr;
    fftw_plan fwd_in_ = nullptr;
    fftw_plan bwd_in_ = nullptr;
};

}  // namespace

void* aligned_fft_alloc(std::size_t bytes) {
    void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
    if (!p) throw std::bad_alloc();
    return p;
}

void aligned_fft_free(void* p) noexcept { fftw_free(p); }

std::shared_ptr<const FftBackend> make_fftw_backend(int d, int n) {
    return std::make_shared<FftwBackend>(d, n);
}

SpectralTransform::SpectralTransform(const VelocityGrid& grid, std::shared_ptr<const FftBackend> backend)
    : grid_(grid), backend_(std::move(backend)) {
    if (!backend_) backend_ = make_fftw_backend(grid.d, grid.n);
    if (backend_->dim() != grid.d || backend_->points() != grid.n)
        throw std::invalid_argument("transform backend does not match grid");
    parity_.resize(grid.size());
    for (std::size_t i = 0; i < parity_.size(); ++i) {
        auto k = grid.wavenumber(i);
        int s = k[0] + k[1] + k[2];
        parity_[i] = (s % 2 == 0) ? 1.0 : -1.0;
    }
}

SpectralField SpectralTransform::forward(const std::vector<double>& values) const {
    if (values.size() != grid_.size()) throw std::invalid_argument("forward transform: value array does not match grid");
    SpectralField f{grid_, cvec(values.size())};
    for (std::size_t i = 0; i < values.size(); ++i) f.c[i] = values[i];
    backend_->forward(f.c.data(), f.c.data());
    const double inv = 1.0 / static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) f.c[i] *= parity_[i] * inv;
    return f;
}

void SpectralTransform::inverse_complex(const SpectralField& f, cvec& out) const {
    if (!(f.grid == grid_) || f.c.size() != grid_.size())
        throw std::invalid_argument("inverse transform: spectral field does not match grid");
    out.resize(f.c.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.c[i] * parity_[i];
    backend_->backward(out.data(), out.data());
}

std::vector<double> SpectralTransform::inverse(const SpectralField& f) const {
    cvec tmp;
    inverse_complex(f, tmp);
    std::vector<double> v(tmp.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = tmp[i].real();
    return v;
}

}  // namespace boltz
