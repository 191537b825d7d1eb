#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "fkdv/errors.hpp"

namespace fkdv {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;       // absolute floor; 0 means "relative only"
    int max_segments = 8000;    // subdivision budget
    bool throw_on_failure = true;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int segments = 0;
    bool converged = false;
};

namespace detail {

// Gauss(7)/Kronrod(15) nodes and weights on [-1,1]; the embedded Gauss rule
// uses the odd-index Kronrod nodes.
inline constexpr double gk_nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double gk_wk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
inline constexpr double gk_wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

template <typename F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * gk_nodes[i]);
        fv[14 - i] = f(c + h * gk_nodes[i]);
    }
    fv[7] = f(c);
    double resk = gk_wk[7] * fv[7];
    double resg = gk_wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += gk_wk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resg += gk_wg[i / 2] * (fv[i] + fv[14 - i]);
    }
    value = resk * h;
    // Conservative estimate: raw Kronrod-Gauss difference plus a roundoff
    // floor proportional to the integral of |f| over the segment.
    double resabs = gk_wk[7] * std::abs(fv[7]);
    for (int i = 0; i < 7; ++i)
        resabs += gk_wk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    resabs *= std::abs(h);
    err = std::abs(resk - resg) * std::abs(h) + 50.0 * 2.2e-16 * resabs;
}

struct Segment {
    double a, b, value, err;
};

}  // namespace detail

// Adaptive Gauss-Kronrod on [a,b]: repeatedly bisect the segment with the
// largest error estimate. Deterministic: ties broken by segment order.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, QuadratureOptions opts = {}) {
    QuadratureResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::vector<detail::Segment> segs;
    segs.reserve(64);
    {
        detail::Segment s{a, b, 0.0, 0.0};
        detail::gk15(f, a, b, s.value, s.err);
        segs.push_back(s);
    }
    auto tolerance = [&](double total) {
        return std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    };
    while (true) {
        double total = 0.0, err = 0.0;
        for (const auto& s : segs) {
            total += s.value;
            err += s.err;
        }
        if (err <= tolerance(total) || err <= 1e-305) {
            res.value = total;
            res.error_estimate = err;
            res.segments = static_cast<int>(segs.size());
            res.converged = true;
            return res;
        }
        if (static_cast<int>(segs.size()) >= opts.max_segments) {
            res.value = total;
            res.error_estimate = err;
            res.segments = static_cast<int>(segs.size());
            res.converged = false;
            if (opts.throw_on_failure)
                throw NonConvergedQuadrature("adaptive quadrature: budget of " +
                                             std::to_string(opts.max_segments) +
                                             " segments exhausted, error " +
                                             std::to_string(err));
            return res;
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err) worst = i;
        detail::Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        detail::Segment left{s.a, mid, 0.0, 0.0}, right{mid, s.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.err);
        detail::gk15(f, right.a, right.b, right.value, right.err);
        segs[worst] = left;
        segs.push_back(right);
    }
}

// Integrate over a chain of breakpoints (pre-split at known kinks/scales).
template <typename F>
QuadratureResult integrate_segments(F&& f, const std::vector<double>& edges,
                                    QuadratureOptions opts = {}) {
    QuadratureResult total;
    total.converged = true;
    if (edges.size() < 2) return total;
    QuadratureOptions per = opts;
    per.rel_tol = opts.rel_tol;
    per.abs_tol = opts.abs_tol / std::max<std::size_t>(1, edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto r = integrate(f, edges[i], edges[i + 1], per);
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.segments += r.segments;
        total.converged = total.converged && r.converged;
    }
    return total;
}

// Non-template convenience for call sites that prefer std::function.
QuadratureResult integrate_fn(const std::function<double(double)>& f, double a,
                              double b, QuadratureOptions opts);

}  // namespace fkdv
