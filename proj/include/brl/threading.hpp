#ifndef BRL_THREADING_HPP_
#define BRL_THREADING_HPP_

#include <cstddef>
#include <functional>

namespace brl {

/// Caps the worker count used by parallel_for. 1 disables threading.
void set_max_threads(int n);
int max_threads();

/// Runs fn(i) for i in [begin, end). Work is split into contiguous index
/// ranges, one per worker, so every element is computed by exactly one
/// thread and results are bit-identical for any thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace brl

#endif  // BRL_THREADING_HPP_
