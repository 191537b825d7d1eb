#pragma once

#include <complex>
#include <memory>
#include <span>

namespace fkdv {

// Real-to-half-complex FFT pair of fixed size n (even). Plans are created once
// per instance; creation is serialized internally because the FFTW planner is
// not thread-safe, while execution on distinct instances is.
// Transforms are unnormalized: backward(forward(x)) == n * x.
class RealFft {
public:
    explicit RealFft(int n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    int size() const { return n_; }

    // in: n reals; out: n/2 + 1 spectrum bins.
    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    // in: n/2 + 1 spectrum bins; out: n reals. Overwrites the input copy.
    void backward(std::span<const std::complex<double>> in, std::span<double> out);

private:
    struct Impl;
    int n_;
    std::unique_ptr<Impl> impl_;
};

// Per-thread plan cache: one RealFft per transform size.
RealFft& fft_for(int n);

}  // namespace fkdv
