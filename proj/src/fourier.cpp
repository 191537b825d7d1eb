#include "fkdv/fourier.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fkdv {

namespace {
std::mutex planner_mutex;
}

struct RealFft::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

RealFft::RealFft(int n) : n_(n), impl_(std::make_unique<Impl>()) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("RealFft: size must be even and >= 2");
    std::lock_guard<std::mutex> lock(planner_mutex);
    impl_->real = fftw_alloc_real(n);
    impl_->spec = fftw_alloc_complex(n / 2 + 1);
    // FFTW_ESTIMATE keeps planning deterministic (no timing-based choices).
    impl_->fwd = fftw_plan_dft_r2c_1d(n, impl_->real, impl_->spec, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_c2r_1d(n, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->real) fftw_free(impl_->real);
    if (impl_->spec) fftw_free(impl_->spec);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    if (static_cast<int>(in.size()) != n_ ||
        static_cast<int>(out.size()) != n_ / 2 + 1)
        throw std::invalid_argument("RealFft::forward: size mismatch");
    std::memcpy(impl_->real, in.data(), n_ * sizeof(double));
    fftw_execute(impl_->fwd);
    for (int k = 0; k <= n_ / 2; ++k)
        out[k] = {impl_->spec[k][0], impl_->spec[k][1]};
}

void RealFft::backward(std::span<const std::complex<double>> in, std::span<double> out) {
    if (static_cast<int>(in.size()) != n_ / 2 + 1 ||
        static_cast<int>(out.size()) != n_)
        throw std::invalid_argument("RealFft::backward: size mismatch");
    std::memcpy(impl_->spec, in.data(), (n_ / 2 + 1) * sizeof(fftw_complex));
    fftw_execute(impl_->bwd);
    std::memcpy(out.data(), impl_->real, n_ * sizeof(double));
}

RealFft& fft_for(int n) {
    thread_local std::map<int, std::unique_ptr<RealFft>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<RealFft>(n);
    return *slot;
}

}  // namespace fkdv
