#pragma once

#include <cstddef>
#include <exception>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace capreq {

/// Execution mode for batch kernels. Every parallel kernel in this library
/// has a serial twin reached through Exec::Serial; tests compare the two and
/// the bench tool times them. Parallel results must not depend on thread
/// count or scheduling, so kernels only combine per-item outputs through
/// order-independent reductions (max, count, per-slot writes).
enum class Exec { Serial, Parallel };

namespace par {

/// Runs body(i) for i in [0, n). Exceptions escaping a worker are caught and
/// rethrown on the calling thread after the loop (first one by item index).
template <class Body>
void for_index(std::size_t n, Exec mode, Body&& body)
{
#ifdef _OPENMP
    if (mode == Exec::Parallel) {
        std::exception_ptr err = nullptr;
        std::size_t err_index = n;
#pragma omp parallel for schedule(dynamic, 8)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(capreq_par_err)
                {
                    if (static_cast<std::size_t>(i) < err_index) {
                        err_index = static_cast<std::size_t>(i);
                        err = std::current_exception();
                    }
                }
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

/// Max-reduction over fn(i). Exact regardless of evaluation order.
template <class Fn>
double max_map(std::size_t n, Exec mode, double init, Fn&& fn)
{
    double best = init;
#ifdef _OPENMP
    if (mode == Exec::Parallel) {
        std::exception_ptr err = nullptr;
        std::size_t err_index = n;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : best)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                double v = fn(static_cast<std::size_t>(i));
                if (v > best) best = v;
            } catch (...) {
#pragma omp critical(capreq_par_err2)
                {
                    if (static_cast<std::size_t>(i) < err_index) {
                        err_index = static_cast<std::size_t>(i);
                        err = std::current_exception();
                    }
                }
            }
        }
        if (err) std::rethrow_exception(err);
        return best;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        double v = fn(i);
        if (v > best) best = v;
    }
    return best;
}

inline int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace par
} // namespace capreq
