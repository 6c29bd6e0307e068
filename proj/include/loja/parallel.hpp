#pragma once

#include <cstddef>
#include <functional>

namespace loja {

/// Hardware concurrency, at least 1.
unsigned default_workers();

/// Runs body(begin, end) over a static contiguous partition of [0, n).
/// Results must be written to per-index slots; any reduction happens in the
/// caller afterwards, so output does not depend on the worker count.
/// The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace loja
