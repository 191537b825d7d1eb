#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fkdv {

// Uniform periodic grid x_j = -P/2 + j*dx, j = 0..n-1, dx = P/n. The crest
// point x = 0 sits at index n/2; the trough/endpoint x = -P/2 at index 0.
struct Grid {
    double period = 2.0 * M_PI;
    int n = 256;

    Grid() = default;
    Grid(double period_, int n_) : period(period_), n(n_) {
        if (!(period > 0.0)) throw std::invalid_argument("Grid: period must be positive");
        if (n < 16 || n % 2 != 0) throw std::invalid_argument("Grid: n must be even and >= 16");
    }

    double dx() const { return period / n; }
    double x(int j) const { return -0.5 * period + j * dx(); }
    int center() const { return n / 2; }
    bool operator==(const Grid& o) const { return period == o.period && n == o.n; }
};

enum class Parity { none, even, odd };

// Samples of a real periodic function on a Grid, with an optional parity tag.
// Construction with a parity tag symmetrizes exactly, so values[j] ==
// +/- values[n-j] holds bitwise afterwards.
struct GridFunction {
    Grid grid;
    std::vector<double> values;
    Parity parity = Parity::none;

    GridFunction() = default;
    GridFunction(Grid g, std::vector<double> v, Parity p = Parity::none)
        : grid(g), values(std::move(v)), parity(p) {
        if (static_cast<int>(values.size()) != grid.n)
            throw std::invalid_argument("GridFunction: value count != grid.n");
        symmetrize();
    }

    template <typename F>
    static GridFunction sample(Grid g, F&& f, Parity p = Parity::none) {
        std::vector<double> v(g.n);
        for (int j = 0; j < g.n; ++j) v[j] = f(g.x(j));
        return GridFunction(g, std::move(v), p);
    }

    double at(int j) const { return values[((j % grid.n) + grid.n) % grid.n]; }
    double crest() const { return values[grid.center()]; }
    double trough_endpoint() const { return values[0]; }

    double sup_norm() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    void symmetrize() {
        if (parity == Parity::none) return;
        const int n = grid.n;
        const double sign = (parity == Parity::even) ? 1.0 : -1.0;
        for (int j = 1; j < n / 2; ++j) {
            const double a = 0.5 * (values[j] + sign * values[n - j]);
            values[j] = a;
            values[n - j] = sign * a;
        }
        if (parity == Parity::odd) {
            values[0] = 0.0;
            values[n / 2] = 0.0;
        }
    }
};

}  // namespace fkdv
