// Timing comparison of the serial reference paths against their OpenMP
// counterparts for the three data-parallel hot spots: batch kernel
// quadrature, dense circulant application, and the decay-kernel transform.
// Also asserts the outputs agree bitwise, which the policy contract promises.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "fkdv/kernel.hpp"
#include "fkdv/operator.hpp"
#include "fkdv/solitary.hpp"

using namespace fkdv;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double time_best_of(int reps, F&& body) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        body();
        best = std::min(best,
                        std::chrono::duration<double>(clock_type::now() - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double openmp, bool identical) {
    std::printf("%-28s serial %8.3f ms   openmp %8.3f ms   speedup %5.2fx   %s\n",
                name, 1e3 * serial, 1e3 * openmp, serial / openmp,
                identical ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main() {
#if defined(FKDV_HAVE_OPENMP)
    std::printf("OpenMP enabled (default policy: openmp)\n");
#else
    std::printf("OpenMP not compiled in; both columns run the serial path\n");
#endif

    {
        std::vector<double> xs(2000);
        for (std::size_t i = 0; i < xs.size(); ++i)
            xs[i] = 0.01 + 20.0 * static_cast<double>(i) / xs.size();
        std::vector<double> a, b;
        const double serial = time_best_of(
            3, [&] { a = kernel::eval_kernel_batch(0.8, xs, ExecPolicy::serial); });
        const double openmp = time_best_of(
            3, [&] { b = kernel::eval_kernel_batch(0.8, xs, ExecPolicy::openmp); });
        report("kernel batch (2000 pts)", serial, openmp, a == b);
    }

    {
        const Grid g(2.0 * M_PI, 4096);
        const std::vector<double> w = op::circulant_weights(1.0, g);
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> f(g.n);
        for (double& v : f) v = u(rng);
        std::vector<double> a, b;
        const double serial =
            time_best_of(5, [&] { a = op::circulant_apply(w, f, ExecPolicy::serial); });
        const double openmp =
            time_best_of(5, [&] { b = op::circulant_apply(w, f, ExecPolicy::openmp); });
        report("circulant apply (n=4096)", serial, openmp, a == b);
    }

    {
        std::vector<double> xs(400);
        for (std::size_t i = 0; i < xs.size(); ++i)
            xs[i] = 0.05 + 25.0 * static_cast<double>(i) / xs.size();
        std::vector<double> a, b;
        const double serial = time_best_of(3, [&] {
            a = solitary::compute_Hmu_kernel(1.0, 1.25, xs, ExecPolicy::serial);
        });
        const double openmp = time_best_of(3, [&] {
            b = solitary::compute_Hmu_kernel(1.0, 1.25, xs, ExecPolicy::openmp);
        });
        report("decay kernel (400 pts)", serial, openmp, a == b);
    }

    return 0;
}
