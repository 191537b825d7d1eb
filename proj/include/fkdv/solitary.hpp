#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fkdv/grid.hpp"
#include "fkdv/parallel.hpp"
#include "fkdv/quadrature.hpp"
#include "fkdv/steady.hpp"

namespace fkdv::solitary {

// One period-escalation comparison: the period solved at and the sup-norm
// difference against the previous level on the comparison window.
struct EscalationStep {
    double period = 0.0;
    double diff = 0.0;
};

struct EscalationOptions {
    double limit_tol = 1e-8;          // early-stop threshold for window diffs
    double dx_target = M_PI / 64.0;   // constant spacing across levels
    int max_points = 16384;           // dense even-mode solve cap (memory)
    steady::NewtonOptions newton{};
};

struct EscalationResult {
    std::vector<steady::WaveSolution> levels;  // one wave per period solved
    std::vector<EscalationStep> history;       // history[k]: levels[k+1] vs levels[k]
    bool settled = false;                      // a diff fell below limit_tol
};

// Doubling period schedule p0, 2 p0, 4 p0, ... up to cap (inclusive).
std::vector<double> default_schedule(double p0 = 8.0 * M_PI,
                                     double cap = 256.0 * M_PI);

// March the periodic solve through increasing periods at fixed relative
// height, warm-starting each level from the previous profile (exact node
// injection when the spacings align, interpolation otherwise) extended by
// its trough value. Stops early once consecutive profiles agree to
// limit_tol in sup norm over |x| <= window. Throws NoConvergenceInP when
// the schedule runs out and the window differences failed to keep
// decreasing. window <= min(schedule)/2 is required; window <= 0 compares
// nothing and settles at the first opportunity.
EscalationResult escalate_period(double s, double lambda,
                                 std::span<const double> p_schedule,
                                 double window,
                                 const EscalationOptions& opts = {});

// Decaying wave obtained from a trough-settled periodic wave by the shift
// Phi = phi + 1 - mu at speed mu_lambda = 2 - mu.
struct SolitaryWave {
    GridFunction Phi;           // nonnegative profile, crest at x = 0
    double mu_lambda = 0.0;     // shifted speed, in (1, 2) for genuine waves
    double lambda = 0.0;
    double tail_level = 0.0;    // phi(+-P/2) before the shift; limit mu - 1
    double P_final = 0.0;
    std::vector<EscalationStep> escalation_history;
};

// Apply the shift to a converged wave. The trough plateau must have
// settled: |phi(+-P/2) - (mu-1)| <= tail_tolerance * (1 + |mu-1|), else
// TailNotSettled (the period was too small). The shifted profile solves the
// steady equation at speed mu_lambda with the same residual up to roundoff.
SolitaryWave galilean_transform(const steady::WaveSolution& w,
                                double tail_tolerance = 1e-6);

// escalate_period + galilean_transform, escalation record attached.
SolitaryWave construct_solitary(double s, double lambda,
                                std::span<const double> p_schedule,
                                double window = 10.0,
                                const EscalationOptions& opts = {},
                                double tail_tolerance = 1e-6);

// Supremum tail decay rate: the delta in (0, 1) solving
// (1 - delta^2)^(-s/2) = mu, i.e. delta = sqrt(1 - mu^(-2/s)).
// Throws InvalidSpeed unless mu > 1.
double compute_decay_rate(double s, double mu_lambda);

// Pointwise values of the convolution kernel with symbol m/(mu - m),
// computed as a cosine transform: oscillation-limited panels on a finite
// frequency window, remainder by a power series in m/mu integrated by
// parts. Requires mu > 1 so the symbol stays bounded. Even in x; x = 0
// diverges for s <= 1 (SingularEvaluation).
std::vector<double> compute_Hmu_kernel(double s, double mu,
                                       std::span<const double> x_grid,
                                       ExecPolicy policy = default_policy,
                                       QuadratureOptions opts = {});

}  // namespace fkdv::solitary
