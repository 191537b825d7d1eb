#pragma once

#include <span>
#include <vector>

#include "fkdv/parallel.hpp"
#include "fkdv/quadrature.hpp"

namespace fkdv::kernel {

struct KernelSample {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Convolution kernel K_s of the smoothing operator:
//   K_s(x) = (4 pi)^{-1/2} Gamma(s/2)^{-1} \int_0^inf e^{-t - x^2/(4t)} t^{(s-3)/2} dt.
// Even, positive, strictly decreasing in |x|, unit mass, ~ e^{-|x|} tails.
// K_s(0) is finite iff s > 1 (throws SingularEvaluation otherwise). The
// integral is split at t = 1 and both halves are evaluated in log variables
// (t = e^u above, t = x^2/(4 e^-w) below) so the peak near t ~ |x|/2 and the
// endpoint behavior are resolved by adaptive Gauss-Kronrod.
KernelSample eval_kernel(double s, double x, QuadratureOptions opts = {});

// Batch evaluation; parallel kernel with serial reference (identical output
// bit-for-bit, since each point is independent).
std::vector<double> eval_kernel_batch(double s, std::span<const double> xs,
                                      ExecPolicy policy = default_policy,
                                      QuadratureOptions opts = {});

// Quadrature of the full-line mass \int_R K_s (should be 1): log-variable
// adaptive quadrature on [xmin, 45] plus an analytic head model near 0 and an
// exponential tail bound; both enter the error estimate.
KernelSample kernel_mass(double s, QuadratureOptions opts = {});

enum class PeriodizationMethod { translate_sum, fourier_series };

// Periodized kernel K_{s,P}(x) = sum_n K_s(x + nP)
//                              = (1/P) sum_k m(2 pi k/P) e^{2 pi i k x / P}.
// translate_sum: direct translate summation, truncated via the e^{-|x|} tail.
// fourier_series: the spectral series, accelerated with three exact
// summation-by-parts steps so it converges for every s > 0 away from the
// singularity; at x == 0 (mod P) it switches to an Euler-Maclaurin tail
// (s > 1 only). Throws MethodUnavailable when the mode budget cannot reach
// the tolerance, SingularEvaluation at x == 0 with s <= 1.
KernelSample eval_kernel_periodized(double s, double period, double x,
                                    PeriodizationMethod method =
                                        PeriodizationMethod::translate_sum,
                                    QuadratureOptions opts = {});

// Split K_{s,P} = S + R near the origin with an explicit leading singular
// model S and a bounded remainder R:
//   s not an odd integer: S(x) = A_s |x|^{s-1},
//       A_s = Gamma((1-s)/2) / (2^{s-1} sqrt(4 pi) Gamma(s/2));
//   s odd: S(x) = B_s |x|^{s-1} log(1/|x|),
//       B_s = (-1)^{(s-1)/2} 2 / (2^{s-1} sqrt(4 pi) Gamma(s/2) Gamma((s+1)/2)).
// (A_2 = -1/2 reproduces the |x| kink of e^{-|x|}/2; B_1 = 1/pi.)
struct KernelSplit {
    double s = 0.0;
    double period = 0.0;
    double exponent = 0.0;   // s - 1
    bool log_factor = false; // true when s is an odd integer
    double coefficient = 0.0;

    double singular(double x) const;
    // \int_0^u S(y) dy for u in (0, 1]; exact antiderivative of the model.
    double singular_integral(double u) const;
    // R(x) = K_{s,P}(x) - S(x); bounded on a punctured neighborhood of 0.
    double regular(double x, QuadratureOptions opts = {}) const;
};

KernelSplit kernel_split(double s, double period);

// s = 1 diagnostics for the second derivative of the kernel's regular part.
// With G0(x) = \int_1^inf e^{-xt} / sqrt(t^2-1) dt (so that K_1 = G0 / pi):
//   check_regular_second_derivative_bound = (2/pi) \int_0^inf |G0''(x) - x^{-2}| dx,
// which the crest analysis bounds by 4/pi, and
//   regular_second_derivative_bracket = \int_1^inf (t/sqrt(t^2-1) - 1) dt + 1,
// whose exact value is 2.
KernelSample check_regular_second_derivative_bound(QuadratureOptions opts = {});
KernelSample regular_second_derivative_bracket(QuadratureOptions opts = {});

}  // namespace fkdv::kernel
