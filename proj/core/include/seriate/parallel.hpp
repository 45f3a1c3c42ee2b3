#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

namespace seriate {

/// Name of the environment variable that overrides any `--threads` setting.
inline constexpr const char* kThreadsEnvVar = "SERIATE_TN_THREADS";

/// Resolves the worker count: the environment variable wins, then `requested`,
/// then 1. Always returns at least 1.
std::size_t resolve_threads(std::optional<std::size_t> requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write results to per-index slots so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// body is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

/// splitmix64 finalizer; stable across platforms.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Derives an independent child seed from a parent seed and a stream index.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept;

}  // namespace seriate
