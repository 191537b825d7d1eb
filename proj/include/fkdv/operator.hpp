#pragma once

#include <vector>

#include "fkdv/grid.hpp"
#include "fkdv/parallel.hpp"
#include "fkdv/quadrature.hpp"

namespace fkdv::op {

// Apply the smoothing operator with symbol m(xi) = (1 + xi^2)^{-s/2} to a
// periodic grid function: FFT, multiply bin k by m(2 pi k / P), inverse FFT.
// Preserves declared parity exactly (re-symmetrized after the transform).
GridFunction apply_lambda(double s, const GridFunction& f);

// Quadrature reference for apply_lambda: evaluates
//   (K_{s,P} * f~)(x_i) = \int_{-P/2}^{P/2} K_{s,P}(u) f~(x_i - u) du
// where f~ is the trigonometric interpolant of the data (same Nyquist
// convention as the FFT path, cos(pi j^) at the top mode). The kernel is
// integrated on dyadically graded panels toward its singularity at u = 0,
// with the innermost sliver handled by the singular/regular split. Shares no
// machinery with apply_lambda: coefficients by direct DFT, kernel values by
// translate summation. Intended for small n (rejects n > 512).
GridFunction convolve_direct(double s, const GridFunction& f,
                             QuadratureOptions opts = {});

// Discrete convolution weights of the operator on the grid:
//   (L f)_i = sum_j b_{(i-j) mod n} f_j,
//   b_d = (1/n) [m_0 + (-1)^d m_{n/2} + 2 sum_{k=1}^{n/2-1} m_k cos(2 pi k d / n)],
// with m_k = m(2 pi k / P). Row sums equal m_0 = 1 exactly in exact
// arithmetic, which the mean identity of the steady solver relies on.
std::vector<double> circulant_weights(double s, const Grid& g);

// Dense circulant application of the weights (parallel with serial
// reference; identical output bit-for-bit, per-index writes only).
std::vector<double> circulant_apply(const std::vector<double>& b,
                                    const std::vector<double>& f,
                                    ExecPolicy policy = default_policy);

// Zero-padded spectral interpolation onto a finer grid with the same period.
// n_out must be an even multiple of f.grid.n; parity tag carries over. The
// trigonometric interpolant is evaluated exactly at the new nodes, so values
// at shared nodes are preserved to roundoff.
GridFunction spectral_refine(const GridFunction& f, int n_out);

}  // namespace fkdv::op
