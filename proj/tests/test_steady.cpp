#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "fkdv/errors.hpp"
#include "fkdv/fourier.hpp"
#include "fkdv/operator.hpp"
#include "fkdv/steady.hpp"
#include "fkdv/symbol.hpp"

using namespace fkdv;

TEST_CASE("zero profile solves the equation at every speed") {
    const Grid g(2.0 * M_PI, 64);
    GridFunction zero = GridFunction::sample(g, [](double) { return 0.0; }, Parity::even);
    for (double mu : {0.3, 0.9, 1.7})
        CHECK(steady::residual(1.0, zero, mu).sup_norm() == 0.0);
}

TEST_CASE("linearization at zero acts by the shifted symbol") {
    const Grid g(2.0 * M_PI, 64);
    GridFunction zero = GridFunction::sample(g, [](double) { return 0.0; }, Parity::even);
    GridFunction v = GridFunction::sample(g, [](double x) { return std::cos(3.0 * x); },
                                          Parity::even);
    const double mu = 0.6;
    const GridFunction jv = steady::jacobian_apply(1.5, zero, mu, v);
    const double factor = multiplier(1.5, 3.0) - mu;
    for (int j = 0; j < g.n; ++j)
        CHECK(jv.values[j] == doctest::Approx(factor * v.values[j]).epsilon(1e-12));
}

TEST_CASE("bifurcation speed equals the symbol at the fundamental mode") {
    CHECK(steady::bifurcation_speed(2.0, 2.0 * M_PI) ==
          doctest::Approx(multiplier(2.0, 1.0)).epsilon(1e-15));
    CHECK(steady::bifurcation_speed(0.5, 10.0) ==
          doctest::Approx(multiplier(0.5, 2.0 * M_PI / 10.0)).epsilon(1e-15));
}

TEST_CASE("small-height solve: constraint, residual, speed window, sign") {
    const Grid g(2.0 * M_PI, 256);
    for (double s : {0.5, 1.0, 2.0}) {
        const steady::WaveSolution w = steady::solve_at_lambda(s, g, 0.25);
        REQUIRE(w.converged);
        CHECK(w.residual_norm <= 1e-10 * (1.0 + w.phi.sup_norm()));
        // height constraint phi(0) = lambda mu / 2
        CHECK(w.phi.crest() == doctest::Approx(0.25 * w.mu / 2.0).epsilon(1e-12));
        CHECK(w.mu > 0.0);
        CHECK(w.mu <= 1.0);
        // the wave has negative mean
        double mean = 0.0;
        for (double y : w.phi.values) mean += y;
        CHECK(mean / g.n < 0.0);
        // crest-to-trough monotone on the half period
        for (int j = 0; j < g.n / 2; ++j)
            CHECK(w.phi.values[j] <= w.phi.values[j + 1] + 1e-13);
    }
}

TEST_CASE("profiles converge under grid refinement") {
    const steady::WaveSolution c = steady::solve_at_lambda(1.0, Grid(2.0 * M_PI, 256), 0.5);
    const steady::WaveSolution f = steady::solve_at_lambda(1.0, Grid(2.0 * M_PI, 512), 0.5);
    REQUIRE(c.converged);
    REQUIRE(f.converged);
    CHECK(std::abs(c.mu - f.mu) <= 1e-8);
    for (int j = 0; j < 256; ++j)
        CHECK(std::abs(c.phi.values[j] - f.phi.values[2 * j]) <= 1e-7);
}

TEST_CASE("solution spectrum decays to roundoff at moderate height") {
    const Grid g(2.0 * M_PI, 256);
    const steady::WaveSolution w = steady::solve_at_lambda(2.0, g, 0.25);
    std::vector<std::complex<double>> spec(g.n / 2 + 1);
    fft_for(g.n).forward(w.phi.values, spec);
    double tail = 0.0;
    for (int k = 100; k <= g.n / 2; ++k) tail = std::max(tail, std::abs(spec[k]) / g.n);
    CHECK(tail <= 1e-13);
}

TEST_CASE("height validation") {
    const Grid g(2.0 * M_PI, 64);
    CHECK_THROWS_AS(steady::solve_at_lambda(1.0, g, 0.0), ConstraintInfeasible);
    CHECK_THROWS_AS(steady::solve_at_lambda(1.0, g, -0.2), ConstraintInfeasible);
    CHECK_THROWS_AS(steady::solve_at_lambda(1.0, g, 1.2), ConstraintInfeasible);
}

TEST_CASE("warm start accepts a nearby profile and rejects foreign grids") {
    const Grid g(2.0 * M_PI, 256);
    const steady::WaveSolution cold = steady::solve_at_lambda(1.5, g, 0.3);
    const steady::WaveSolution warm =
        steady::solve_at_lambda(1.5, g, 0.3, cold.phi, cold.mu);
    REQUIRE(warm.converged);
    CHECK(warm.newton_iterations <= 2);
    CHECK(warm.mu == doctest::Approx(cold.mu).epsilon(1e-12));

    const Grid other(2.0 * M_PI, 128);
    const GridFunction wrong =
        GridFunction::sample(other, [](double) { return 0.1; }, Parity::even);
    CHECK_THROWS_AS(steady::solve_at_lambda(1.5, g, 0.3, wrong, cold.mu),
                    std::invalid_argument);
}

TEST_CASE("branch walk hits every requested height in order") {
    const Grid g(2.0 * M_PI, 256);
    const std::vector<double> targets{0.2, 0.5, 0.7};
    const steady::ContinuationResult res = steady::continue_branch(1.0, g, targets);
    REQUIRE(res.waves.size() == targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        CHECK(res.waves[i].lambda == targets[i]);
        CHECK(res.waves[i].converged);
        CHECK(res.waves[i].mu > 0.0);
        CHECK(res.waves[i].mu <= 1.0);
    }
    // speed decreases with height along this stretch of the branch
    CHECK(res.waves[0].mu > res.waves[1].mu);
    CHECK(res.waves[1].mu > res.waves[2].mu);
    CHECK(res.trail.size() >= targets.size());
}

TEST_CASE("branch walk input validation") {
    const Grid g(2.0 * M_PI, 64);
    CHECK(steady::continue_branch(1.0, g, std::vector<double>{}).waves.empty());
    CHECK_THROWS_AS(steady::continue_branch(1.0, g, std::vector<double>{0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(steady::continue_branch(1.0, g, std::vector<double>{0.5, 0.2}),
                    std::invalid_argument);
}
