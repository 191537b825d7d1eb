#pragma once

#include <span>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv::steady {

// Residual of the steady equation at speed mu:
//   F(phi) = -mu phi + phi^2 + L phi,
// with L the smoothing operator (FFT path, full grid).
GridFunction residual(double s, const GridFunction& phi, double mu);

// Directional derivative of the residual in phi:
//   DF(phi)[v] = (2 phi - mu) v + L v.
// The residual is quadratic in phi, so central differences of `residual`
// reproduce this exactly up to rounding.
GridFunction jacobian_apply(double s, const GridFunction& phi, double mu,
                            const GridFunction& v);

// Speed at which the trivial state loses uniqueness on period P: the symbol
// evaluated at the fundamental mode, m(2 pi / P). Small waves detach from
// the zero state at this speed; it is exact for the discrete operator too,
// since the grid multiplier samples m at the same frequency.
double bifurcation_speed(double s, double period);

struct NewtonOptions {
    double tol = 1e-11;       // accept when ||F||_inf <= tol * (1 + ||phi||_inf)
    int max_iterations = 50;
    double min_damping = 1.0 / 1024.0;
};

struct WaveSolution {
    GridFunction phi;              // even profile, crest at x = 0
    double s = 0.0;                // operator order
    double lambda = 0.0;           // relative wave height, crest = lambda*mu/2
    double mu = 0.0;               // wave speed
    bool converged = false;
    int newton_iterations = 0;
    double residual_norm = 0.0;    // sup norm at acceptance
    double condition_estimate = 0.0;  // reciprocal condition of the last Jacobian
};

// Solve for the even periodic wave of relative height lambda in (0, 1]:
// unknowns are the half-grid profile plus the speed, closed by the height
// constraint phi(0) = lambda * mu / 2. Small heights start cold from the
// bifurcation mode; larger ones climb an internal ladder of intermediate
// heights with warm starts. Throws ConstraintInfeasible for lambda outside
// (0, 1], NewtonDiverged / BranchStalled when the ladder cannot advance.
WaveSolution solve_at_lambda(double s, const Grid& g, double lambda,
                             NewtonOptions opts = {});

// Same solve from a caller-provided starting point (warm start). The profile
// must live on grid g; the speed guess accompanies it.
WaveSolution solve_at_lambda(double s, const Grid& g, double lambda,
                             const GridFunction& phi0, double mu0,
                             NewtonOptions opts = {});

// One accepted Newton solve along the branch walk.
struct BranchPoint {
    double lambda = 0.0;
    double mu = 0.0;
    double amplitude = 0.0;   // crest minus trough
    double from_lambda = 0.0; // height of the warm-start predecessor (0 = cold)
};

struct ContinuationResult {
    std::vector<WaveSolution> waves;  // one per requested height, same order
    std::vector<BranchPoint> trail;   // every accepted solve, ladder included
};

// Walk the branch through strictly increasing requested heights, warm-starting
// each solve from the previous accepted one and refining the step adaptively.
// Empty input yields an empty branch.
ContinuationResult continue_branch(double s, const Grid& g,
                                   std::span<const double> lambdas,
                                   NewtonOptions opts = {});

}  // namespace fkdv::steady
