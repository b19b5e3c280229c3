#pragma once

#include <functional>

namespace imc::detail {

/// Worker cap from the IMC_THREADS environment variable; 0 or unset means
/// auto (hardware concurrency).
int worker_count();

/// Runs fn(i) for i in [0, n). Splits contiguous index ranges across
/// workers when n is large enough; fn must write only to slot i so the
/// result is identical to sequential evaluation.
void parallel_for(int n, const std::function<void(int)>& fn, int min_per_worker = 64);

}  // namespace imc::detail
