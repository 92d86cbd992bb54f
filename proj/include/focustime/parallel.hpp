#pragma once

#include <cstddef>
#include <functional>

namespace ft {

// Runs fn(0..n-1) across up to `jobs` threads in index chunks. Callers own
// determinism: write results into slot i, never append. The first exception
// is rethrown on the calling thread.
void parallel_for(int jobs, std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ft
