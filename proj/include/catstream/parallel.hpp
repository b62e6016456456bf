#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace catstream {

// Instance fan-out for the property checkers. Each instance is independent;
// results land in a vector indexed by instance, so the merged report is
// identical whichever path ran. The serial path is the reference the parallel
// one is tested against.
template <typename R>
std::vector<R> run_instances(std::size_t count, const std::function<R(std::size_t)>& body,
                             bool parallel) {
    std::vector<R> results(count);
    if (parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            results[static_cast<std::size_t>(i)] = body(static_cast<std::size_t>(i));
        return results;
#endif
    }
    for (std::size_t i = 0; i < count; ++i) results[i] = body(i);
    return results;
}

inline int hardware_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace catstream
