#pragma once

#include <cstddef>
#include <functional>

namespace poca {

// Runs fn(i) for i in [0, n) across up to `jobs` threads and blocks until
// every task finished. Rethrows the first captured exception after joining.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace poca
