#include "fkdv/operator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fkdv/fourier.hpp"
#include "fkdv/kernel.hpp"
#include "fkdv/symbol.hpp"

namespace fkdv::op {

GridFunction apply_lambda(double s, const GridFunction& f) {
    const int n = f.grid.n;
    const double P = f.grid.period;
    auto& fft = fft_for(n);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    fft.forward(f.values, spec);
    for (int k = 0; k <= n / 2; ++k)
        spec[k] *= multiplier(s, 2.0 * M_PI * k / P);
    std::vector<double> vals(n);
    fft.backward(spec, vals);
    const double inv_n = 1.0 / n;
    for (double& v : vals) v *= inv_n;
    return GridFunction(f.grid, std::move(vals), f.parity);
}

namespace {

// Trigonometric interpolant of grid data, evaluated at arbitrary points.
// Coefficients by direct DFT (quadratic cost; this is oracle code).
class TrigInterpolant {
public:
    explicit TrigInterpolant(const GridFunction& f)
        : n_(f.grid.n), period_(f.grid.period), dx_(f.grid.dx()) {
        const int nh = n_ / 2;
        re_.assign(nh + 1, 0.0);
        im_.assign(nh + 1, 0.0);
        for (int k = 0; k <= nh; ++k) {
            double cr = 0.0, ci = 0.0;
            for (int j = 0; j < n_; ++j) {
                const double ph = 2.0 * M_PI * k * j / n_;
                cr += f.values[j] * std::cos(ph);
                ci -= f.values[j] * std::sin(ph);
            }
            re_[k] = cr / n_;
            im_[k] = ci / n_;
        }
    }

    double operator()(double x) const {
        // Fractional grid index of x relative to the leftmost node -P/2.
        const double jf = (x + 0.5 * period_) / dx_;
        const int nh = n_ / 2;
        double acc = re_[0];
        for (int k = 1; k < nh; ++k) {
            const double ph = 2.0 * M_PI * k * jf / n_;
            acc += 2.0 * (re_[k] * std::cos(ph) - im_[k] * std::sin(ph));
        }
        acc += re_[nh] * std::cos(M_PI * jf);  // half-spectrum top mode
        return acc;
    }

private:
    int n_;
    double period_, dx_;
    std::vector<double> re_, im_;
};

}  // namespace

GridFunction convolve_direct(double s, const GridFunction& f,
                             QuadratureOptions opts) {
    const int n = f.grid.n;
    const double P = f.grid.period;
    if (n > 512)
        throw std::invalid_argument(
            "convolve_direct: reference path is limited to n <= 512");
    const double dx = f.grid.dx();
    TrigInterpolant interp(f);

    // Panel edges on (delta, P/2], dyadic toward the kernel singularity, each
    // level subdivided so no panel exceeds dx/2 (a quarter wavelength of the
    // top mode). The sliver [0, delta] is handled by the split model below.
    const double delta = 1e-4 * std::min(1.0, dx);
    std::vector<double> edges{delta};
    double hi = delta;
    while (hi < 0.5 * P) {
        hi = std::min(2.0 * hi, 0.5 * P);
        const double lo = edges.back();
        const int pieces =
            std::max(1, static_cast<int>(std::ceil((hi - lo) / (0.5 * dx))));
        for (int p = 1; p <= pieces; ++p)
            edges.push_back(lo + (hi - lo) * p / pieces);
    }

    // Fixed composite Gauss-Kronrod nodes, kernel values folded into the
    // weights once (the expensive part; shared across all output points).
    std::vector<double> nodes, weights;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double c = 0.5 * (edges[e] + edges[e + 1]);
        const double h = 0.5 * (edges[e + 1] - edges[e]);
        for (int i = 0; i < 15; ++i) {
            const int base = (i < 8) ? i : 14 - i;
            const double u = (i < 8) ? c - h * detail::gk_nodes[base]
                                     : c + h * detail::gk_nodes[base];
            nodes.push_back(u);
            weights.push_back(h * detail::gk_wk[base]);
        }
    }
    std::vector<double> wk(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q)
        wk[q] = weights[q] *
                kernel::eval_kernel_periodized(
                    s, P, nodes[q], kernel::PeriodizationMethod::translate_sum, opts)
                    .value;

    // Sliver [-delta, delta]: f~(x - u) ~ f~(x) there, and
    // \int_{-delta}^{delta} K = 2 (\int_0^delta S + \int_0^delta R), the first
    // exact, the second by midpoint (R is continuous at 0).
    const auto split = kernel::kernel_split(s, P);
    const double sliver =
        2.0 * (split.singular_integral(delta) +
               split.regular(0.5 * delta, opts) * delta);

    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        const double xi = f.grid.x(i);
        double acc = sliver * interp(xi);
        for (std::size_t q = 0; q < nodes.size(); ++q)
            acc += wk[q] * (interp(xi - nodes[q]) + interp(xi + nodes[q]));
        vals[i] = acc;
    }
    return GridFunction(f.grid, std::move(vals), f.parity);
}

std::vector<double> circulant_weights(double s, const Grid& g) {
    const int n = g.n;
    std::vector<std::complex<double>> spec(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k)
        spec[k] = multiplier(s, 2.0 * M_PI * k / g.period) / n;
    std::vector<double> b(n);
    fft_for(n).backward(spec, b);
    return b;
}

GridFunction spectral_refine(const GridFunction& f, int n_out) {
    const int n = f.grid.n;
    if (n_out < n || n_out % n != 0)
        throw std::invalid_argument(
            "spectral_refine: target resolution must be a multiple of the source");
    if (n_out == n) return f;

    std::vector<std::complex<double>> spec(n / 2 + 1);
    fft_for(n).forward(f.values, spec);
    std::vector<std::complex<double>> padded(n_out / 2 + 1, 0.0);
    for (int k = 0; k < n / 2; ++k) padded[k] = spec[k] / static_cast<double>(n);
    // The source Nyquist bin becomes an interior mode of the finer transform
    // (weight 2 instead of 1), so it is halved to keep the interpolant fixed.
    padded[n / 2] = 0.5 * spec[n / 2] / static_cast<double>(n);

    std::vector<double> vals(n_out);
    fft_for(n_out).backward(padded, vals);
    return GridFunction(Grid{f.grid.period, n_out}, std::move(vals), f.parity);
}

std::vector<double> circulant_apply(const std::vector<double>& b,
                                    const std::vector<double>& f,
                                    ExecPolicy policy) {
    const std::int64_t n = static_cast<std::int64_t>(b.size());
    if (f.size() != b.size())
        throw std::invalid_argument("circulant_apply: size mismatch");
    std::vector<double> out(n);
    parallel_for(n, policy, [&](std::int64_t i) {
        double acc = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            std::int64_t d = i - j;
            if (d < 0) d += n;
            acc += b[d] * f[j];
        }
        out[i] = acc;
    });
    return out;
}

}  // namespace fkdv::op
