#pragma once

#include <cstdint>

namespace fstar {

// Execution policy for the data-parallel kernels.  Serial is the reference
// path used by the equivalence tests and the benchmark baselines; OpenMP is
// the default.  All kernels are element-parallel maps (one writer per output
// element, min-style combines only), so both policies produce bit-identical
// results.
enum class Exec { Serial, OpenMP };

Exec default_exec();
void set_default_exec(Exec e);

// Number of threads the OpenMP policy will use (for reporting).
int exec_threads();

namespace detail {
void omp_for(std::int64_t n, void *ctx, void (*body)(void *, std::int64_t));
}

template <class Fn>
void par_for(std::int64_t n, Fn &&fn, Exec policy) {
    if (policy == Exec::Serial) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    detail::omp_for(n, &fn, [](void *ctx, std::int64_t i) { (*static_cast<Fn *>(ctx))(i); });
}

template <class Fn>
void par_for(std::int64_t n, Fn &&fn) {
    par_for(n, static_cast<Fn &&>(fn), default_exec());
}

} // namespace fstar
