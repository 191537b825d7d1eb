#pragma once

#include <optional>

#include "fkdv/grid.hpp"
#include "fkdv/solitary.hpp"
#include "fkdv/steady.hpp"

namespace fkdv::diag {

// Least-squares fit of the crest deficit mu/2 - phi(x) near x = 0.
struct CrestFitReport {
    enum class Model { power, x_log };

    double sigma_fit = 0.0;      // exponent (1 for the x_log model)
    double prefactor_fit = 0.0;  // coefficient of |x|^sigma resp. x log(1/x)
    double x_lo = 0.0;           // fit window, both ends inclusive
    double x_hi = 0.0;
    Model model = Model::power;
    double r_squared = 0.0;      // < 0.99 marks the fit unreliable
};

struct DiagnosticsReport {
    double mean_identity_relerr = 0.0;
    double bound_violation = 0.0;
    double monotonicity_violation = 0.0;
    std::optional<CrestFitReport> crest;
    std::optional<double> decay_rate_fit;
    bool speed_window_ok = false;
};

// Relative defect of the integral identity (mu - 1) int phi = ||phi||^2
// satisfied by every periodic solution (discrete node sums, which the
// uniform grid makes spectrally accurate). Zero profile returns 0.
double check_mean_identity(const GridFunction& phi, double mu);
double check_mean_identity(const steady::WaveSolution& w);

// Violation of the pointwise bounds mu - 1 <= phi <= lambda mu / 2:
// max(0, (mu-1) - min phi, max phi - lambda mu / 2).
double check_bounds(const steady::WaveSolution& w);

// Largest descent of the profile on the rising half [-P/2, 0] (an even wave
// should increase monotonically from trough to crest); 0 when monotone.
double monotonicity_violation(const GridFunction& phi);

// Fit the crest deficit of a near-extreme wave (lambda >= 1 - 1e-3) over
// x in [4 dx, min(0.05 P, 0.5)]: log-log power fit for s != 1, the model
// c x log(1/x) for s = 1. Throws InsufficientResolution when fewer than 8
// grid points fall in the window.
CrestFitReport fit_crest(const steady::WaveSolution& w);

// Speed located in the admissible window: mu in (0, 1] for periodic waves,
// mu_lambda in (1, 2) and away from 1 by 1e-6 for solitary ones. The input
// must be converged and nontrivial (amplitude > 1e-6).
bool check_speed_windows(const steady::WaveSolution& w);
bool check_speed_windows(const solitary::SolitaryWave& sw);

// Least-squares decay rate of log Phi over the tail window |x| >= 5,
// 1e-10 < Phi < 1e-2 (positive number; compare against compute_decay_rate).
// Throws InsufficientResolution when the window has fewer than 16 points.
double fit_decay(const solitary::SolitaryWave& sw);

// Aggregate report for a periodic wave; the crest fit is attached only for
// near-extreme waves with enough resolution.
DiagnosticsReport report_periodic(const steady::WaveSolution& w);

// Aggregate report for a solitary wave (bounds 0 <= Phi <= mu_lambda - 1 +
// lambda (1 - mu_lambda/2); the same integral identity holds at speed
// mu_lambda). The decay fit is attached when the tail is resolved.
DiagnosticsReport report_solitary(const solitary::SolitaryWave& sw);

}  // namespace fkdv::diag
