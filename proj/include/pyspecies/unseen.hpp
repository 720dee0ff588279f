#pragma once

#include <cstdint>

#include "pyspecies/data.hpp"
#include "pyspecies/discrete_posterior.hpp"
#include "pyspecies/monte_carlo.hpp"
#include "pyspecies/pyp.hpp"

namespace pyspecies::unseen {

// Largest m accepted by posterior_exact; the coefficient row costs O(m^2).
constexpr std::int64_t exact_max_m = 10000;

struct FrequentistEstimate {
  double value = 0.0;
  double lambda = 0.0;  // m / n
  bool lambda_ge_one = false;  // extrapolation beyond the sample size
};

// sum_i (-1)^{i+1} lambda^i m_i
FrequentistEstimate good_toulmin(const SampleSummary& s, std::int64_t m);

// sum_i (-1)^{i-1} lambda^{i+r-1} binom(r+i-1, i-1) m_{i+r-1}; summing over
// r >= 1 gives good_toulmin.
FrequentistEstimate good_toulmin_order_r(const SampleSummary& s, std::int64_t m, std::int64_t r);

// Law of the number of new species in m further draws, on {0..m}.
DiscretePosterior posterior_exact(const PypParams& p, const SampleSummary& s, std::int64_t m);

// Posterior mean of the same count.
double estimator(const PypParams& p, const SampleSummary& s, std::int64_t m);

// Posterior mean of the number of new species seen exactly r times.
double estimator_order_r(const PypParams& p, const SampleSummary& s, std::int64_t m, std::int64_t r);

// Binomial(K*_m, Beta(theta/alpha + k, n/alpha - k)), or
// Binomial(K*_m, theta/(theta+n)) when alpha = 0, with K*_m drawn under
// PYP(alpha, theta + n).
DiscretePosterior posterior_mc(const PypParams& p, const SampleSummary& s, std::int64_t m,
                               const McOptions& opt);

// Same construction with M*_{r,m} in place of K*_m; support {0..m/r}.
DiscretePosterior posterior_mc_order_r(const PypParams& p, const SampleSummary& s, std::int64_t m,
                                       std::int64_t r, const McOptions& opt);

}  // namespace pyspecies::unseen
