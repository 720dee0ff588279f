#include "pyspecies/unseen.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pyspecies/combinatorics.hpp"
#include "pyspecies/errors.hpp"
#include "pyspecies/special_functions.hpp"

namespace pyspecies::unseen {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void require_m(std::int64_t m) {
  if (m < 1) throw DomainError("m must be >= 1");
}

}  // namespace

FrequentistEstimate good_toulmin(const SampleSummary& s, std::int64_t m) {
  require_m(m);
  FrequentistEstimate out;
  out.lambda = static_cast<double>(m) / static_cast<double>(s.n());
  out.lambda_ge_one = out.lambda >= 1.0;
  const double log_lambda = std::log(out.lambda);
  long double sum = 0.0L;
  for (const auto& [i, mi] : s.fingerprint()) {
    const long double term = std::exp(static_cast<long double>(i) * log_lambda) * mi;
    sum += (i % 2 == 1) ? term : -term;
  }
  out.value = static_cast<double>(sum);
  return out;
}

FrequentistEstimate good_toulmin_order_r(const SampleSummary& s, std::int64_t m, std::int64_t r) {
  require_m(m);
  if (r < 1) throw DomainError("good_toulmin_order_r: r must be >= 1");
  FrequentistEstimate out;
  out.lambda = static_cast<double>(m) / static_cast<double>(s.n());
  out.lambda_ge_one = out.lambda >= 1.0;
  const double log_lambda = std::log(out.lambda);
  long double sum = 0.0L;
  // j = i + r - 1 runs over observed frequencies >= r
  for (auto it = s.fingerprint().lower_bound(r); it != s.fingerprint().end(); ++it) {
    const std::int64_t j = it->first;
    const std::int64_t i = j - r + 1;
    const double log_binom = log_gamma(static_cast<double>(j) + 1.0) -
                             log_gamma(static_cast<double>(i)) - log_gamma(static_cast<double>(r) + 1.0);
    const long double term = std::exp(static_cast<long double>(j) * log_lambda + log_binom) * it->second;
    sum += (i % 2 == 1) ? term : -term;
  }
  out.value = static_cast<double>(sum);
  return out;
}

DiscretePosterior posterior_exact(const PypParams& p, const SampleSummary& s, std::int64_t m) {
  p.validate();
  require_m(m);
  if (m > exact_max_m)
    throw SizeGuardError("exact unseen-species posterior supports m <= " + std::to_string(exact_max_m) +
                         "; use the Monte Carlo method for m = " + std::to_string(m));
  const int mm = static_cast<int>(m);
  const double n = static_cast<double>(s.n());
  const double k = static_cast<double>(s.k());
  const double log_denom = log_rising_factorial(p.theta + n, m);
  std::vector<double> log_pmf(m + 1, neg_inf);
  if (p.is_dirichlet()) {
    // theta^x |s(m,x;n)| / (theta+n)_(m)
    const auto st = log_stirling_row(mm, n);
    const double lt = std::log(p.theta);
    for (int x = 0; x <= mm; ++x)
      if (st[x] != neg_inf) log_pmf[x] = x * lt + st[x] - log_denom;
  } else {
    // prod_{i<x} (theta + (k+i) alpha) * C(m,x;alpha,k alpha - n)/alpha^x / (theta+n)_(m)
    const auto row = generalized_factorial_row(mm, p.alpha, k * p.alpha - n, true);
    long double lead = 0.0L;
    for (int x = 0; x <= mm; ++x) {
      if (x > 0) lead += std::log(static_cast<long double>(p.theta) + (k + x - 1) * p.alpha);
      if (row[x].sign < 0) throw NumericalError("unseen posterior: negative coefficient");
      if (!row[x].is_zero()) log_pmf[x] = static_cast<double>(lead) + row[x].log_abs - log_denom;
    }
  }
  const double total = log_sum_exp(log_pmf);
  if (!(std::fabs(total) < 1e-8))
    throw NumericalError("unseen posterior does not normalize (log mass " + std::to_string(total) + ")");
  return DiscretePosterior::from_log_pmf(std::move(log_pmf), Provenance::exact, "closed-form");
}

double estimator(const PypParams& p, const SampleSummary& s, std::int64_t m) {
  p.validate();
  require_m(m);
  const double n = static_cast<double>(s.n());
  const double k = static_cast<double>(s.k());
  if (p.is_dirichlet()) {
    if (m <= 1000000) {
      long double sum = 0.0L;
      for (std::int64_t i = 1; i <= m; ++i) sum += p.theta / (p.theta + n + static_cast<long double>(i - 1));
      return static_cast<double>(sum);
    }
    return p.theta * (digamma(p.theta + n + static_cast<double>(m)) - digamma(p.theta + n));
  }
  return (k + p.theta / p.alpha) * std::expm1(log_rising_ratio(p.theta + n, p.alpha, m));
}

double estimator_order_r(const PypParams& p, const SampleSummary& s, std::int64_t m, std::int64_t r) {
  p.validate();
  require_m(m);
  const double n = static_cast<double>(s.n());
  const double success = p.is_dirichlet()
                             ? p.theta / (p.theta + n)
                             : (p.theta + static_cast<double>(s.k()) * p.alpha) / (p.theta + n);
  return success * expected_m_star(p, s.n(), m, r);
}

namespace {

// Success probability of one replicate: Beta draw or the DP constant.
double draw_success(const PypParams& p, const SampleSummary& s, RngStream& rng) {
  const double n = static_cast<double>(s.n());
  if (p.is_dirichlet()) return p.theta / (p.theta + n);
  const double k = static_cast<double>(s.k());
  return rng.beta(p.theta / p.alpha + k, n / p.alpha - k);
}

}  // namespace

DiscretePosterior posterior_mc(const PypParams& p, const SampleSummary& s, std::int64_t m,
                               const McOptions& opt) {
  p.validate();
  require_m(m);
  const auto counts = replicate_histogram(opt, m, [&](RngStream& rng) {
    const double q = draw_success(p, s, rng);
    const std::int64_t kstar = sample_k_star(p, s.n(), m, rng);
    return rng.binomial(kstar, q);
  });
  return DiscretePosterior::from_counts(counts, opt.replicates, Provenance::monte_carlo,
                                        "compound-binomial");
}

DiscretePosterior posterior_mc_order_r(const PypParams& p, const SampleSummary& s, std::int64_t m,
                                       std::int64_t r, const McOptions& opt) {
  p.validate();
  require_m(m);
  if (r < 1 || r > m) throw DomainError("posterior_mc_order_r: need 1 <= r <= m");
  const auto counts = replicate_histogram(opt, m / r, [&](RngStream& rng) {
    const double q = draw_success(p, s, rng);
    const std::int64_t mstar = sample_m_star(p, s.n(), m, r, rng);
    return rng.binomial(mstar, q);
  });
  return DiscretePosterior::from_counts(counts, opt.replicates, Provenance::monte_carlo,
                                        "compound-binomial");
}

}  // namespace pyspecies::unseen
