#pragma once

#include <atomic>
#include <cstdint>
#include <exception>

namespace fkdv {

// Execution policy for the data-parallel kernels (batch kernel quadrature,
// direct convolution, matrix assembly, transform batches). Every parallel
// kernel keeps a serial reference path; the two must agree bitwise because
// each index writes its own slot and no reduction order changes.
enum class ExecPolicy { serial, openmp };

#if defined(FKDV_HAVE_OPENMP)
inline constexpr ExecPolicy default_policy = ExecPolicy::openmp;
#else
inline constexpr ExecPolicy default_policy = ExecPolicy::serial;
#endif

// An exception from fn must not escape an OpenMP region (that would
// terminate), so the first one is captured and rethrown after the join.
template <typename Fn>
void parallel_for(std::int64_t n, ExecPolicy policy, Fn&& fn) {
    if (policy == ExecPolicy::openmp) {
#if defined(FKDV_HAVE_OPENMP)
        std::atomic<bool> failed{false};
        std::exception_ptr err;
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
#endif
    }
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace fkdv
