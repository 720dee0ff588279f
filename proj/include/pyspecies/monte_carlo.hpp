#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "pyspecies/errors.hpp"
#include "pyspecies/rng.hpp"

namespace pyspecies {

struct McOptions {
  std::int64_t replicates = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Runs `draw` once per replicate i with its own RngStream(seed, i) and
// histograms the returned values on {0, ..., support_max}. Threads own
// disjoint replicate ranges and only add integer counts, so the histogram
// does not depend on the thread count.
inline std::vector<std::int64_t> replicate_histogram(
    const McOptions& opt, std::int64_t support_max,
    const std::function<std::int64_t(RngStream&)>& draw) {
  if (opt.replicates < 1) throw DomainError("replicates must be >= 1");
  const int threads = std::max(1, opt.threads);
  const std::size_t bins = static_cast<std::size_t>(support_max + 1);
  std::vector<std::vector<std::int64_t>> partial(threads, std::vector<std::int64_t>(bins, 0));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int t) {
    try {
      const std::int64_t lo = opt.replicates * t / threads;
      const std::int64_t hi = opt.replicates * (t + 1) / threads;
      for (std::int64_t i = lo; i < hi; ++i) {
        RngStream rng(opt.seed, static_cast<std::uint64_t>(i));
        const std::int64_t v = draw(rng);
        if (v < 0 || v > support_max) throw NumericalError("replicate value outside support");
        ++partial[t][static_cast<std::size_t>(v)];
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<std::int64_t> counts(bins, 0);
  for (const auto& p : partial)
    for (std::size_t b = 0; b < bins; ++b) counts[b] += p[b];
  return counts;
}

}  // namespace pyspecies
