#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "fkdv/errors.hpp"
#include "fkdv/solitary.hpp"
#include "fkdv/steady.hpp"

using namespace fkdv;

TEST_CASE("default schedule doubles up to the cap") {
    const std::vector<double> sched = solitary::default_schedule();
    REQUIRE(sched.size() == 6);
    CHECK(sched.front() == doctest::Approx(8.0 * M_PI));
    CHECK(sched.back() == doctest::Approx(256.0 * M_PI));
    for (std::size_t i = 1; i < sched.size(); ++i)
        CHECK(sched[i] == doctest::Approx(2.0 * sched[i - 1]));
}

TEST_CASE("window differences decrease along an escalation") {
    const std::vector<double> sched{2.0 * M_PI, 4.0 * M_PI, 8.0 * M_PI, 16.0 * M_PI};
    const solitary::EscalationResult res = solitary::escalate_period(1.0, 0.5, sched, 3.0);
    REQUIRE(res.history.size() >= 2);
    for (std::size_t i = 1; i < res.history.size(); ++i)
        CHECK(res.history[i].diff < res.history[i - 1].diff);
}

TEST_CASE("escalation settles early once profiles stop moving") {
    const std::vector<double> sched = solitary::default_schedule(8.0 * M_PI, 256.0 * M_PI);
    const solitary::EscalationResult res = solitary::escalate_period(2.0, 0.5, sched, 10.0);
    CHECK(res.settled);
    CHECK(res.history.back().diff < 1e-8);
    // early stop: nowhere near the 256 pi cap
    CHECK(res.levels.back().phi.grid.period <= 64.0 * M_PI);
    // every level keeps the requested relative height
    for (const steady::WaveSolution& w : res.levels)
        CHECK(w.phi.crest() == doctest::Approx(0.25 * w.mu).epsilon(1e-10));
}

TEST_CASE("zero window settles at the first comparison") {
    const std::vector<double> sched{8.0 * M_PI, 16.0 * M_PI, 32.0 * M_PI};
    const solitary::EscalationResult res = solitary::escalate_period(1.0, 0.3, sched, 0.0);
    CHECK(res.settled);
    CHECK(res.levels.size() == 2);
    CHECK(res.history.size() == 1);
    CHECK(res.history.front().diff == 0.0);
}

TEST_CASE("schedule and window validation") {
    const std::vector<double> empty;
    CHECK_THROWS_AS(solitary::escalate_period(1.0, 0.5, empty, 1.0), std::invalid_argument);
    const std::vector<double> nonmono{8.0 * M_PI, 8.0 * M_PI};
    CHECK_THROWS_AS(solitary::escalate_period(1.0, 0.5, nonmono, 1.0),
                    std::invalid_argument);
    const std::vector<double> ok{8.0 * M_PI, 16.0 * M_PI};
    CHECK_THROWS_AS(solitary::escalate_period(1.0, 0.5, ok, 5.0 * M_PI),
                    std::invalid_argument);  // window exceeds half the first period
}

TEST_CASE("shift to the supercritical frame") {
    const std::vector<double> sched = solitary::default_schedule();
    const solitary::EscalationResult res = solitary::escalate_period(2.0, 0.5, sched, 10.0);
    const steady::WaveSolution& w = res.levels.back();
    const solitary::SolitaryWave sw = solitary::galilean_transform(w);

    CHECK(sw.mu_lambda == 2.0 - w.mu);
    CHECK(sw.mu_lambda > 1.0);
    CHECK(sw.mu_lambda < 2.0);
    // pointwise shift by 1 - mu
    for (int j = 0; j < w.phi.grid.n; ++j)
        CHECK(sw.Phi.values[j] == doctest::Approx(w.phi.values[j] + 1.0 - w.mu));
    // nonnegative, decaying tail
    for (double y : sw.Phi.values) CHECK(y >= -1e-10);
    CHECK(std::abs(sw.Phi.trough_endpoint()) <= 1e-6);
    // the equation is invariant under the shift: same residual size
    const double r_orig = steady::residual(2.0, w.phi, w.mu).sup_norm();
    const double r_shift = steady::residual(2.0, sw.Phi, sw.mu_lambda).sup_norm();
    CHECK(r_shift <= 1e-9);
    CHECK(r_shift <= 4.0 * r_orig + 1e-14);
    // crest attains the theoretical cap exactly (it restates the height constraint)
    const double cap = sw.mu_lambda - 1.0 + sw.lambda * (1.0 - 0.5 * sw.mu_lambda);
    CHECK(sw.Phi.crest() == doctest::Approx(cap).epsilon(1e-12));
}

TEST_CASE("shift refuses an unsettled trough") {
    const steady::WaveSolution w = steady::solve_at_lambda(2.0, Grid(2.0 * M_PI, 256), 0.5);
    CHECK_THROWS_AS(solitary::galilean_transform(w), TailNotSettled);
}

TEST_CASE("zero wave at unit speed maps to itself and is excluded as non-solitary") {
    const Grid g(8.0 * M_PI, 512);
    steady::WaveSolution w;
    w.phi = GridFunction::sample(g, [](double) { return 0.0; }, Parity::even);
    w.s = 1.0;
    w.lambda = 0.0;
    w.mu = 1.0;
    w.converged = true;
    const solitary::SolitaryWave sw = solitary::galilean_transform(w);
    CHECK(sw.mu_lambda == 1.0);
    CHECK(sw.Phi.sup_norm() == 0.0);
}

TEST_CASE("small heights escalate to speeds just below one") {
    // Long-period cold starts can leave the subcritical branch, which is why
    // escalation warm-starts each level; the escalated speeds stay below 1.
    const std::vector<double> sched{8.0 * M_PI, 16.0 * M_PI, 32.0 * M_PI};
    const solitary::EscalationResult res = solitary::escalate_period(1.0, 0.05, sched, 10.0);
    for (const steady::WaveSolution& w : res.levels) {
        CHECK(w.mu < 1.0);
        CHECK(w.mu > 0.95);
    }
}

TEST_CASE("decay rate closed forms") {
    CHECK(solitary::compute_decay_rate(1.0, 1.25) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(solitary::compute_decay_rate(2.0, 2.0) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(solitary::compute_decay_rate(1.5, 1.0 + 1e-12) <= 1e-5);  // vanishes at mu -> 1
    CHECK_THROWS_AS(solitary::compute_decay_rate(1.0, 1.0), InvalidSpeed);
    CHECK_THROWS_AS(solitary::compute_decay_rate(1.0, 0.8), InvalidSpeed);
}

TEST_CASE("resolvent kernel closed form at s = 2") {
    const double mu = 1.25;
    const double delta = std::sqrt(1.0 - 1.0 / mu);
    const std::vector<double> xs{0.0, 0.5, 2.0, 8.0, 20.0};
    const std::vector<double> h = solitary::compute_Hmu_kernel(2.0, mu, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double gold = std::exp(-delta * std::abs(xs[i])) / (2.0 * mu * delta);
        CHECK(h[i] == doctest::Approx(gold).epsilon(1e-9));
    }
}

TEST_CASE("resolvent kernel is even, positive, and decays at the predicted rate") {
    const double mu = 2.0;
    const std::vector<double> xp{0.7, 3.0, 9.0, 15.0};
    const std::vector<double> xn{-0.7, -3.0, -9.0, -15.0};
    const std::vector<double> hp = solitary::compute_Hmu_kernel(2.0, mu, xp);
    const std::vector<double> hn = solitary::compute_Hmu_kernel(2.0, mu, xn);
    const double delta = solitary::compute_decay_rate(2.0, mu);
    for (std::size_t i = 0; i < xp.size(); ++i) {
        CHECK(hp[i] == hn[i]);
        CHECK(hp[i] > 0.0);
        // log H + delta x stays bounded above (exponential decay no slower than delta)
        CHECK(std::log(hp[i]) + delta * xp[i] <= 0.0);
    }
}

TEST_CASE("resolvent kernel near-origin blowup for s = 0.5") {
    const std::vector<double> xs{1e-4, 4e-4};
    const std::vector<double> h = solitary::compute_Hmu_kernel(0.5, 1.25, xs);
    CHECK(h[0] > 0.0);
    CHECK(h[1] > 0.0);
    // H ~ c |x|^{s-1} = c |x|^{-1/2}: quartering x doubles the value
    CHECK(h[0] / h[1] == doctest::Approx(2.0).epsilon(0.05));
    CHECK_THROWS_AS(solitary::compute_Hmu_kernel(0.5, 1.25, std::vector<double>{0.0}),
                    SingularEvaluation);
    CHECK_THROWS_AS(solitary::compute_Hmu_kernel(2.0, 0.9, xs), InvalidSpeed);
}

TEST_CASE("end-to-end construction attaches the escalation record") {
    const std::vector<double> sched = solitary::default_schedule();
    const solitary::SolitaryWave sw = solitary::construct_solitary(1.0, 0.5, sched, 10.0);
    CHECK(sw.P_final == sw.Phi.grid.period);
    CHECK(!sw.escalation_history.empty());
    CHECK(sw.escalation_history.back().diff < 1e-8);
    CHECK(sw.mu_lambda > 1.0);
    CHECK(sw.mu_lambda < 2.0);
}
