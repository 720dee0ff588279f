#include "pyspecies/coverage.hpp"

#include <cmath>

#include "pyspecies/combinatorics.hpp"
#include "pyspecies/errors.hpp"
#include "pyspecies/special_functions.hpp"

namespace pyspecies::coverage {

double BetaPosterior::mean() const {
  if (point_mass_at_zero) return 0.0;
  return shape1 / (shape1 + shape2);
}

double good_turing(const SampleSummary& s, std::int64_t r) {
  if (r < 0) throw DomainError("good_turing: r must be >= 0");
  return static_cast<double>(r + 1) * static_cast<double>(s.m(r + 1)) / static_cast<double>(s.n());
}

BetaPosterior posterior(const PypParams& p, const SampleSummary& s, std::int64_t r) {
  p.validate();
  if (r < 0) throw DomainError("coverage posterior: r must be >= 0");
  const double n = static_cast<double>(s.n());
  if (r == 0) {
    const double ak = p.alpha * static_cast<double>(s.k());
    return {p.theta + ak, n - ak, false};
  }
  const std::int64_t mr = s.m(r);
  if (mr == 0) return {0.0, p.theta + n, true};
  const double a = (static_cast<double>(r) - p.alpha) * static_cast<double>(mr);
  return {a, p.theta + n - a, false};
}

double estimate(const PypParams& p, const SampleSummary& s, std::int64_t r) {
  p.validate();
  if (r < 0) throw DomainError("coverage estimate: r must be >= 0");
  const double denom = p.theta + static_cast<double>(s.n());
  if (r == 0) return (p.theta + static_cast<double>(s.k()) * p.alpha) / denom;
  return (static_cast<double>(r) - p.alpha) * static_cast<double>(s.m(r)) / denom;
}

std::pair<double, double> credible_interval(const BetaPosterior& post, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("credible level must lie in (0,1)");
  if (post.point_mass_at_zero) return {0.0, 0.0};
  const double tail = 0.5 * (1.0 - level);
  return {beta_quantile(post.shape1, post.shape2, tail),
          beta_quantile(post.shape1, post.shape2, 1.0 - tail)};
}

double smoothed_count(const PypParams& p, std::int64_t k, std::int64_t r) {
  p.validate();
  if (p.alpha == 0.0) throw DomainError("smoothed_count: alpha = 0 is not supported");
  if (r < 0 || k < 0) throw DomainError("smoothed_count: r and k must be >= 0");
  const double v = std::log(p.alpha) + log_rising_factorial(1.0 - p.alpha, r) +
                   std::log(static_cast<double>(k)) - log_gamma(static_cast<double>(r) + 2.0);
  return k == 0 ? 0.0 : std::exp(v);
}

SmoothedComparison compare_smoothed(const PypParams& p, const SampleSummary& s, std::int64_t r) {
  const double sgt = static_cast<double>(r + 1) * smoothed_count(p, s.k(), r) / static_cast<double>(s.n());
  const double bnp = estimate(p, s, r);
  const double gap = bnp > 0 ? std::fabs(bnp - sgt) / bnp : std::fabs(sgt);
  return {sgt, bnp, gap};
}

}  // namespace pyspecies::coverage
