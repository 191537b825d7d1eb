#include "fkdv/solitary.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "fkdv/errors.hpp"
#include "fkdv/fourier.hpp"
#include "fkdv/symbol.hpp"

namespace fkdv::solitary {

std::vector<double> default_schedule(double p0, double cap) {
    if (!(p0 > 0.0) || !(cap >= p0))
        throw std::invalid_argument("default_schedule: need 0 < p0 <= cap");
    std::vector<double> sched;
    for (double p = p0; p <= cap * (1.0 + 1e-12); p *= 2.0) sched.push_back(p);
    return sched;
}

namespace {

Grid grid_for(double period, const EscalationOptions& opts) {
    int n = 2 * static_cast<int>(std::llround(period / (2.0 * opts.dx_target)));
    n = std::clamp(n, 16, opts.max_points);
    return Grid(period, n);
}

// Evaluate grid data between nodes (warm starts across unaligned grids).
class TrigEval {
public:
    explicit TrigEval(const GridFunction& f) : grid_(f.grid), spec_(f.grid.n / 2 + 1) {
        fft_for(grid_.n).forward(f.values, spec_);
        for (auto& c : spec_) c /= grid_.n;
    }

    double operator()(double x) const {
        const int nh = grid_.n / 2;
        const double t = 2.0 * M_PI * (x - grid_.x(0)) / grid_.period;
        double acc = spec_[0].real();
        for (int k = 1; k < nh; ++k)
            acc += 2.0 * (spec_[k].real() * std::cos(k * t) -
                          spec_[k].imag() * std::sin(k * t));
        acc += spec_[nh].real() * std::cos(nh * t);
        return acc;
    }

private:
    Grid grid_;
    std::vector<std::complex<double>> spec_;
};

// Index offset of the old grid's first node within the new grid, when the
// two spacings coincide; -1 when they do not align.
int node_offset(const Grid& from, const Grid& to) {
    if (std::abs(to.dx() - from.dx()) > 1e-12 * from.dx()) return -1;
    const double off = (to.period - from.period) / (2.0 * to.dx());
    const double r = std::round(off);
    if (std::abs(off - r) > 1e-9) return -1;
    return static_cast<int>(r);
}

// Previous profile re-gridded onto g: exact node injection when aligned,
// interpolation otherwise; the new outskirts take the old trough value.
GridFunction regrid(const GridFunction& prev, const Grid& g) {
    const double trough = prev.values[0];
    std::vector<double> v(g.n, trough);
    const int off = node_offset(prev.grid, g);
    if (off >= 0) {
        for (int i = 0; i < prev.grid.n; ++i) v[i + off] = prev.values[i];
    } else {
        TrigEval f(prev);
        for (int j = 0; j < g.n; ++j)
            if (std::abs(g.x(j)) <= 0.5 * prev.grid.period) v[j] = f(g.x(j));
    }
    return GridFunction(g, std::move(v), Parity::even);
}

double window_diff(const GridFunction& prev, const GridFunction& cur, double window) {
    if (!(window > 0.0)) return 0.0;
    const int off = node_offset(prev.grid, cur.grid);
    std::optional<TrigEval> f;
    if (off < 0) f.emplace(prev);
    double d = 0.0;
    for (int j = 0; j < cur.grid.n; ++j) {
        const double x = cur.grid.x(j);
        if (std::abs(x) > window || std::abs(x) > 0.5 * prev.grid.period) continue;
        const double ref = (off >= 0) ? prev.at(j - off) : (*f)(x);
        d = std::max(d, std::abs(cur.values[j] - ref));
    }
    return d;
}

}  // namespace

EscalationResult escalate_period(double s, double lambda,
                                 std::span<const double> p_schedule,
                                 double window, const EscalationOptions& opts) {
    if (p_schedule.empty())
        throw std::invalid_argument("escalate_period: empty period schedule");
    for (std::size_t i = 0; i < p_schedule.size(); ++i) {
        if (!(p_schedule[i] > 0.0))
            throw std::invalid_argument("escalate_period: periods must be positive");
        if (i > 0 && !(p_schedule[i] > p_schedule[i - 1]))
            throw std::invalid_argument("escalate_period: schedule must be increasing");
    }
    if (window > 0.5 * p_schedule.front())
        throw std::invalid_argument(
            "escalate_period: window exceeds half the smallest period");

    EscalationResult res;
    res.levels.push_back(
        steady::solve_at_lambda(s, grid_for(p_schedule.front(), opts), lambda, opts.newton));
    for (std::size_t k = 1; k < p_schedule.size() && !res.settled; ++k) {
        const Grid g = grid_for(p_schedule[k], opts);
        const auto& prev = res.levels.back();
        auto cur = steady::solve_at_lambda(s, g, lambda, regrid(prev.phi, g),
                                           prev.mu, opts.newton);
        const double d = window_diff(prev.phi, cur.phi, window);
        res.history.push_back({g.period, d});
        res.levels.push_back(std::move(cur));
        if (d < opts.limit_tol) res.settled = true;
    }
    if (!res.settled) {
        for (std::size_t i = 1; i < res.history.size(); ++i)
            if (res.history[i].diff >= res.history[i - 1].diff)
                throw NoConvergenceInP(
                    "window difference stopped decreasing at period " +
                    std::to_string(res.history[i].period) + " (" +
                    std::to_string(res.history[i].diff) + " after " +
                    std::to_string(res.history[i - 1].diff) + ")");
    }
    return res;
}

SolitaryWave galilean_transform(const steady::WaveSolution& w, double tail_tolerance) {
    if (!w.converged)
        throw std::invalid_argument("galilean_transform: wave did not converge");
    const double plateau = w.mu - 1.0;
    const double tail = w.phi.trough_endpoint();
    if (std::abs(tail - plateau) > tail_tolerance * (1.0 + std::abs(plateau)))
        throw TailNotSettled("trough level " + std::to_string(tail) +
                             " has not reached " + std::to_string(plateau) +
                             " at period " + std::to_string(w.phi.grid.period));
    std::vector<double> v = w.phi.values;
    for (double& y : v) y += 1.0 - w.mu;
    SolitaryWave out;
    out.Phi = GridFunction(w.phi.grid, std::move(v), Parity::even);
    out.mu_lambda = 2.0 - w.mu;
    out.lambda = w.lambda;
    out.tail_level = tail;
    out.P_final = w.phi.grid.period;
    return out;
}

SolitaryWave construct_solitary(double s, double lambda,
                                std::span<const double> p_schedule, double window,
                                const EscalationOptions& opts, double tail_tolerance) {
    EscalationResult esc = escalate_period(s, lambda, p_schedule, window, opts);
    SolitaryWave w = galilean_transform(esc.levels.back(), tail_tolerance);
    w.escalation_history = std::move(esc.history);
    return w;
}

double compute_decay_rate(double s, double mu_lambda) {
    multiplier(s, 0.0);  // validates s
    if (!(mu_lambda > 1.0))
        throw InvalidSpeed("decay rate needs a supercritical speed, got " +
                           std::to_string(mu_lambda));
    return std::sqrt(1.0 - std::pow(mu_lambda, -2.0 / s));
}

namespace {

// Asymptotic tail integral int_Xi^inf xi^(-b) cos(x xi) dxi (or sin), by
// repeated integration by parts; caller guarantees x * Xi is large against
// b plus the series depth, so the terms decay geometrically.
double osc_tail(double b, double x, double xi0, bool want_cos) {
    const double sx = std::sin(x * xi0);
    const double cx = std::cos(x * xi0);
    double coeff = 1.0;
    bool cosine = want_cos;
    double acc = 0.0;
    double scale = 0.0;
    for (int k = 0; k < 48; ++k) {
        const double term =
            coeff * (cosine ? -sx : cx) / x * std::pow(xi0, -b);
        acc += term;
        scale = std::max(scale, std::abs(term));
        if (std::abs(term) < 1e-22 * scale && k > 0) break;
        coeff *= (cosine ? b : -b) / x;
        cosine = !cosine;
        b += 1.0;
    }
    return acc;
}

// (1/pi) int_Xi^inf m/(mu-m) cos(x xi) dxi via the geometric series in m/mu
// and the binomial expansion m^p = xi^(-ps) (1 + xi^(-2))^(-ps/2); each
// power integrates term by term with osc_tail. Needs m(Xi) small (<= 0.1).
double hmu_tail(double s, double mu, double x, double xi0) {
    double total = 0.0;
    for (int p = 1; p <= 12; ++p) {
        const double ps = p * s;
        double binom = 1.0;
        double sub = 0.0;
        for (int j = 0; j < 60; ++j) {
            if (j > 0) binom *= (-0.5 * ps - (j - 1)) / j;
            const double b = ps + 2.0 * j;
            if (x > 0.0) {
                sub += binom * osc_tail(b, x, xi0, true);
                if (std::abs(binom) * std::pow(xi0, -b) * 2.0 / x < 1e-18) break;
            } else {
                sub += binom * std::pow(xi0, 1.0 - b) / (b - 1.0);  // b > 1 here
                if (std::abs(binom) * std::pow(xi0, 1.0 - b) < 1e-18) break;
            }
        }
        total += sub / std::pow(mu, p);
    }
    return total / M_PI;
}

double hmu_point(double s, double mu, double x, QuadratureOptions opts) {
    const double xa = std::abs(x);
    // Frequency window: symbol below 0.1 (fast geometric tail series) and
    // x*Xi large enough for the integration-by-parts remainders.
    double xi0 = std::max(64.0, std::sqrt(std::pow(10.0, 2.0 / s) - 1.0));
    if (xa > 0.0) xi0 = std::max(xi0, 140.0 / xa);

    std::vector<double> edges{0.0};
    for (double e = 1.0; e < xi0; e *= 2.0) edges.push_back(e);
    if (xa > 0.0)
        for (double e = M_PI / xa; e < xi0; e += M_PI / xa) edges.push_back(e);
    edges.push_back(xi0);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [&](double a, double b) {
                                return std::abs(a - b) < 1e-9 * xi0;
                            }),
                edges.end());

    auto f = [&](double xi) {
        const double m = multiplier(s, xi);
        return m / (mu - m) * std::cos(xa * xi);
    };
    QuadratureOptions qo = opts;
    qo.rel_tol = std::min(opts.rel_tol, 1e-12);
    // Oscillatory panels cancel to near zero, so a relative target alone is
    // unreachable; grant an absolute budget above the GK roundoff floor,
    // scaled like the symbol's peak 1/(mu - 1).
    qo.abs_tol = std::max(opts.abs_tol, 1e-11 * (1.0 + 1.0 / (mu - 1.0)));
    const double head = integrate_segments(f, edges, qo).value / M_PI;
    return head + hmu_tail(s, mu, xa, xi0);
}

}  // namespace

std::vector<double> compute_Hmu_kernel(double s, double mu,
                                       std::span<const double> x_grid,
                                       ExecPolicy policy, QuadratureOptions opts) {
    multiplier(s, 0.0);  // validates s
    if (!(mu > 1.0))
        throw InvalidSpeed("symbol m/(mu - m) needs mu > 1, got " + std::to_string(mu));
    if (s <= 1.0)
        for (double x : x_grid)
            if (x == 0.0)
                throw SingularEvaluation(
                    "kernel diverges at x = 0 for order <= 1");
    std::vector<double> out(x_grid.size());
    parallel_for(static_cast<std::int64_t>(x_grid.size()), policy,
                 [&](std::int64_t i) { out[i] = hmu_point(s, mu, x_grid[i], opts); });
    return out;
}

}  // namespace fkdv::solitary
