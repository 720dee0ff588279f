#pragma once

#include <cstdint>
#include <limits>

namespace pyspecies {

// xoshiro256** seeded through splitmix64 from (seed, stream). Equal
// (seed, stream) pairs give bit-identical sequences; Monte Carlo code gives
// every replicate its own stream so results do not depend on scheduling.
class RngStream {
public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p);

  double gamma(double shape);
  double log_gamma_variate(double shape);
  double beta(double a, double b);
  std::int64_t binomial(std::int64_t trials, double p);

private:
  std::uint64_t s_[4];
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace pyspecies
