#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

#include "itolab/brownian.hpp"

namespace itolab {

inline constexpr std::size_t kDefaultBatchPaths = 4096;

/// Worker threads used by map_path_batches (hardware concurrency by default,
/// overridable with the ITOLAB_THREADS environment variable).
std::size_t worker_threads();

/// Splits `paths` into consecutive batches, samples each batch's Brownian
/// slice and applies fn to it. Results come back in batch order regardless of
/// which thread produced them, so an ordered reduction is deterministic.
template <class Fn>
auto map_path_batches(const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                      std::size_t batch_paths, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, const BrownianEnsemble&>> {
  using Result = std::invoke_result_t<Fn&, const BrownianEnsemble&>;
  if (batch_paths == 0) batch_paths = kDefaultBatchPaths;
  const std::size_t batches = (paths + batch_paths - 1) / batch_paths;
  std::vector<std::optional<Result>> slots(batches);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t b = next++; b < batches; b = next++) {
      try {
        const std::size_t first = b * batch_paths;
        const std::size_t count = std::min(batch_paths, paths - first);
        const BrownianEnsemble w = sample_brownian(grid, count, seed, first);
        slots[b].emplace(fn(w));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::min(worker_threads(), batches);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<Result> results;
  results.reserve(batches);
  for (auto& r : slots) results.push_back(std::move(*r));
  return results;
}

}  // namespace itolab
