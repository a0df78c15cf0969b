#pragma once

namespace tanglekit {

/// Worker count used by the OpenMP kernels (defaults to the OpenMP runtime's).
int thread_count() noexcept;
/// Sets the worker count for subsequent kernels; values < 1 are ignored.
void set_thread_count(int threads) noexcept;

}  // namespace tanglekit
