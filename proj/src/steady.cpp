#include "fkdv/steady.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fkdv/errors.hpp"
#include "fkdv/operator.hpp"
#include "fkdv/symbol.hpp"

namespace fkdv::steady {

GridFunction residual(double s, const GridFunction& phi, double mu) {
    GridFunction lphi = op::apply_lambda(s, phi);
    std::vector<double> vals(phi.grid.n);
    for (int j = 0; j < phi.grid.n; ++j)
        vals[j] = -mu * phi.values[j] + phi.values[j] * phi.values[j] +
                  lphi.values[j];
    return GridFunction(phi.grid, std::move(vals), phi.parity);
}

GridFunction jacobian_apply(double s, const GridFunction& phi, double mu,
                            const GridFunction& v) {
    if (!(phi.grid == v.grid))
        throw std::invalid_argument("jacobian_apply: grids differ");
    GridFunction lv = op::apply_lambda(s, v);
    std::vector<double> vals(phi.grid.n);
    for (int j = 0; j < phi.grid.n; ++j)
        vals[j] = (2.0 * phi.values[j] - mu) * v.values[j] + lv.values[j];
    return GridFunction(phi.grid, std::move(vals), Parity::none);
}

double bifurcation_speed(double s, double period) {
    return multiplier(s, 2.0 * M_PI / period);
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Newton workspace on the even half grid x_0 = -P/2 .. x_{m-1} = 0 (m = n/2+1
// points), where the operator folds to a dense symmetric-pattern matrix.
class HalfGridSystem {
public:
    HalfGridSystem(double s, const Grid& g) : grid_(g), m_(g.n / 2 + 1) {
        const int n = g.n;
        const auto b = op::circulant_weights(s, g);
        A_.resize(m_, m_);
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < m_; ++j) {
                double a = b[((i - j) % n + n) % n];
                if (j >= 1 && j <= n / 2 - 1) a += b[(i + j) % n];
                A_(i, j) = a;
            }
        }
    }

    const Grid& grid() const { return grid_; }
    int m() const { return m_; }

    VectorXd residual(const VectorXd& h, double mu, double lambda) const {
        VectorXd f(m_ + 1);
        f.head(m_) = A_ * h;
        for (int i = 0; i < m_; ++i) f(i) += h(i) * (h(i) - mu);
        f(m_) = h(m_ - 1) - 0.5 * lambda * mu;
        return f;
    }

    // Bordered Jacobian: operator plus diagonal 2h - mu, speed column -h,
    // constraint row (crest slot 1, speed slot -lambda/2).
    MatrixXd jacobian(const VectorXd& h, double mu, double lambda) const {
        MatrixXd j = MatrixXd::Zero(m_ + 1, m_ + 1);
        j.topLeftCorner(m_, m_) = A_;
        for (int i = 0; i < m_; ++i) j(i, i) += 2.0 * h(i) - mu;
        j.col(m_).head(m_) = -h;
        j(m_, m_ - 1) = 1.0;
        j(m_, m_) = -0.5 * lambda;
        return j;
    }

private:
    Grid grid_;
    int m_;
    MatrixXd A_;
};

struct NewtonOutcome {
    VectorXd h;
    double mu = 0.0;
    int iterations = 0;
    double residual_sup = 0.0;
    double rcond = 0.0;
};

NewtonOutcome newton_solve(const HalfGridSystem& sys, VectorXd h, double mu,
                           double lambda, const NewtonOptions& opts) {
    const int m = sys.m();
    VectorXd f = sys.residual(h, mu, lambda);
    double fnorm = f.lpNorm<Eigen::Infinity>();
    double rcond = 0.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        if (fnorm <= opts.tol * (1.0 + h.lpNorm<Eigen::Infinity>())) {
            return {std::move(h), mu, it - 1, fnorm, rcond};
        }
        Eigen::PartialPivLU<MatrixXd> lu(sys.jacobian(h, mu, lambda));
        rcond = lu.rcond();
        VectorXd step = lu.solve(-f);
        if (!step.allFinite())
            throw NewtonDiverged("Newton step is not finite (singular Jacobian)");
        double alpha = 1.0;
        VectorXd h_try;
        double mu_try = 0.0, fnorm_try = 0.0;
        while (true) {
            h_try = h + alpha * step.head(m);
            mu_try = mu + alpha * step(m);
            VectorXd f_try = sys.residual(h_try, mu_try, lambda);
            fnorm_try = f_try.lpNorm<Eigen::Infinity>();
            if (std::isfinite(fnorm_try) && fnorm_try < fnorm) {
                f = std::move(f_try);
                break;
            }
            alpha *= 0.5;
            if (alpha < opts.min_damping) {
                // Accept the floor step if it is at least finite; a stall here
                // either converges on later iterations or runs out the budget.
                if (!std::isfinite(fnorm_try))
                    throw NewtonDiverged("Newton line search produced non-finite residual");
                f = std::move(f_try);
                break;
            }
        }
        h = std::move(h_try);
        mu = mu_try;
        fnorm = f.lpNorm<Eigen::Infinity>();
    }
    if (fnorm <= opts.tol * (1.0 + h.lpNorm<Eigen::Infinity>()))
        return {std::move(h), mu, opts.max_iterations, fnorm, rcond};
    throw NewtonDiverged("Newton did not reach tolerance in " +
                         std::to_string(opts.max_iterations) +
                         " iterations (residual " + std::to_string(fnorm) + ")");
}

NewtonOutcome cold_start_solve(const HalfGridSystem& sys, double s,
                               double lambda, const NewtonOptions& opts) {
    const Grid& g = sys.grid();
    const double mu0 = bifurcation_speed(s, g.period);
    const int m = sys.m();
    // Bifurcation-mode predictor with the height constraint already met:
    // phi = (lambda mu0 / 2) cos(2 pi x / P), mu = mu0.
    VectorXd h(m);
    const double amp = 0.5 * lambda * mu0;
    for (int i = 0; i < m; ++i)
        h(i) = amp * std::cos(2.0 * M_PI * g.x(i) / g.period);
    return newton_solve(sys, std::move(h), mu0, lambda, opts);
}

WaveSolution package(const HalfGridSystem& sys, double s,
                     const NewtonOutcome& out, double lambda) {
    const Grid& g = sys.grid();
    const int n = g.n;
    std::vector<double> full(n);
    for (int j = 0; j < n; ++j) full[j] = out.h(j <= n / 2 ? j : n - j);
    WaveSolution w;
    w.phi = GridFunction(g, std::move(full), Parity::even);
    w.s = s;
    w.lambda = lambda;
    w.mu = out.mu;
    w.converged = true;
    w.newton_iterations = out.iterations;
    w.residual_norm = out.residual_sup;
    w.condition_estimate = out.rcond;
    return w;
}

void validate_lambda(double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw ConstraintInfeasible("relative wave height must lie in (0, 1], got " +
                                   std::to_string(lambda));
}

// Shared ladder walker: advances from an accepted solve toward each target
// height, halving the step on Newton failures and recording every accepted
// solve. `on_target` receives the outcome at exactly each requested height.
template <typename OnAccept, typename OnTarget>
void walk_branch(const HalfGridSystem& sys, double s,
                 std::span<const double> targets, const NewtonOptions& opts,
                 OnAccept&& on_accept, OnTarget&& on_target) {
    constexpr double kFirstRung = 0.1;
    constexpr double kMaxStep = 0.1;
    constexpr double kMinStep = 1e-4;

    double lambda0 = std::min(kFirstRung, targets.front());
    NewtonOutcome cur = cold_start_solve(sys, s, lambda0, opts);
    double cur_lambda = lambda0;
    on_accept(cur, cur_lambda, 0.0);

    std::size_t t = 0;
    if (cur_lambda == targets[0]) {
        on_target(cur, 0);
        ++t;
    }
    double step = kMaxStep;
    while (t < targets.size()) {
        const double target = targets[t];
        // Snap onto the target when within 1.25 steps, so float drift in the
        // rung sequence cannot leave a microscopic final hop.
        const double next =
            (target - cur_lambda <= 1.25 * step) ? target : cur_lambda + step;
        try {
            NewtonOutcome trial = newton_solve(sys, cur.h, cur.mu, next, opts);
            on_accept(trial, next, cur_lambda);
            cur = std::move(trial);
            cur_lambda = next;
            step = std::min(kMaxStep, step * 1.5);
            if (cur_lambda == target) {
                on_target(cur, t);
                ++t;
            }
        } catch (const NewtonDiverged&) {
            step *= 0.5;
            if (step < kMinStep)
                throw BranchStalled(
                    "branch walk stalled near height " + std::to_string(cur_lambda) +
                    ": step fell below " + std::to_string(kMinStep));
        }
    }
}

}  // namespace

WaveSolution solve_at_lambda(double s, const Grid& g, double lambda,
                             NewtonOptions opts) {
    validate_lambda(lambda);
    HalfGridSystem sys(s, g);
    if (lambda <= 0.25) {
        try {
            return package(sys, s, cold_start_solve(sys, s, lambda, opts), lambda);
        } catch (const NewtonDiverged&) {
            // fall through to the ladder
        }
    }
    WaveSolution result;
    const double targets[] = {lambda};
    walk_branch(
        sys, s, targets, opts, [](const NewtonOutcome&, double, double) {},
        [&](const NewtonOutcome& out, std::size_t) {
            result = package(sys, s, out, lambda);
        });
    return result;
}

WaveSolution solve_at_lambda(double s, const Grid& g, double lambda,
                             const GridFunction& phi0, double mu0,
                             NewtonOptions opts) {
    validate_lambda(lambda);
    if (!(phi0.grid == g))
        throw std::invalid_argument("solve_at_lambda: starting profile is on a different grid");
    HalfGridSystem sys(s, g);
    VectorXd h(sys.m());
    for (int i = 0; i < sys.m(); ++i) h(i) = phi0.values[i];
    return package(sys, s, newton_solve(sys, std::move(h), mu0, lambda, opts),
                   lambda);
}

ContinuationResult continue_branch(double s, const Grid& g,
                                   std::span<const double> lambdas,
                                   NewtonOptions opts) {
    ContinuationResult result;
    if (lambdas.empty()) return result;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        validate_lambda(lambdas[i]);
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw std::invalid_argument(
                "continue_branch: heights must be strictly increasing");
    }
    HalfGridSystem sys(s, g);
    result.waves.resize(lambdas.size());
    walk_branch(
        sys, s, lambdas, opts,
        [&](const NewtonOutcome& out, double lambda, double from) {
            BranchPoint p;
            p.lambda = lambda;
            p.mu = out.mu;
            p.amplitude = out.h(sys.m() - 1) - out.h(0);
            p.from_lambda = from;
            result.trail.push_back(p);
        },
        [&](const NewtonOutcome& out, std::size_t idx) {
            result.waves[idx] = package(sys, s, out, lambdas[idx]);
        });
    return result;
}

}  // namespace fkdv::steady
