#include "fstar/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fstar {

namespace {
Exec g_exec = Exec::OpenMP;
}

Exec default_exec() { return g_exec; }
void set_default_exec(Exec e) { g_exec = e; }

int exec_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace detail {

void omp_for(std::int64_t n, void *ctx, void (*body)(void *, std::int64_t)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(ctx, i);
#else
    for (std::int64_t i = 0; i < n; ++i) body(ctx, i);
#endif
}

} // namespace detail
} // namespace fstar
