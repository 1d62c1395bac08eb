#pragma once

#include <cstddef>
#include <functional>

namespace hjr {

/// 0 maps to the hardware concurrency (at least 1).
[[nodiscard]] std::size_t resolve_threads(std::size_t requested) noexcept;

/// Splits [0, n) into contiguous chunks and runs `body(begin, end)` on up to
/// `threads` workers. Chunk boundaries never affect what a body computes for a
/// given index, so results are independent of the thread count. The first
/// exception thrown by any chunk is rethrown on the calling thread.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace hjr
