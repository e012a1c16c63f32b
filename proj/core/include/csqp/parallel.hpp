// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstddef>
#include <functional>

namespace csqp {

/// Runs fn(index) for every index in [0, count) on up to `jobs` worker
/// threads (0 means one per hardware thread). Each index is processed exactly
/// once; callers keep determinism by writing results into per-index slots and
/// reducing in index order afterwards. The first exception thrown by a worker
/// is rethrown on the calling thread.
void parallel_for_index(std::size_t count, unsigned jobs,
                        const std::function<void(std::size_t)>& fn);

} // namespace csqp
