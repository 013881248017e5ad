#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mcpipe {

// Execution policy for the data-parallel kernels. Every kernel produces
// bitwise identical results under both policies; `par` only changes who
// computes which index.
enum class Exec { serial, par };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <typename F>
void parallel_for(Exec exec, std::size_t n, F&& body) {
#ifdef _OPENMP
    if (exec == Exec::par && n > 1) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace mcpipe
