#pragma once

#include <cstdint>
#include <vector>

#include "pyspecies/combinatorics.hpp"
#include "pyspecies/data.hpp"
#include "pyspecies/discrete_posterior.hpp"
#include "pyspecies/monte_carlo.hpp"
#include "pyspecies/pyp.hpp"
#include "pyspecies/unseen.hpp"

namespace pyspecies::prevalence {

// Largest m_r accepted by the inclusion-exclusion pmf.
constexpr std::int64_t exact_max_mr = 64;

// Generalized factorial law on {1..u}:
//   Pr[U = x] = C(u,x;b,0) (c)_(x) / (bc)_(u).
// For b > 1 some weights are negative; is_probability() reports whether the
// weights form a genuine pmf.
class GenFactorialLaw {
public:
  GenFactorialLaw(double b, double c, std::int64_t u);

  double b() const { return b_; }
  double c() const { return c_; }
  std::int64_t u() const { return u_; }
  // Signed weights indexed by x = 0..u (entry 0 is zero).
  const std::vector<SignedLog>& weights() const { return weights_; }
  bool is_probability() const { return is_probability_; }
  // Inverse-cdf draw; requires is_probability().
  std::int64_t sample(RngStream& rng) const;

private:
  double b_, c_;
  std::int64_t u_;
  bool is_probability_ = false;
  std::vector<SignedLog> weights_;
  std::vector<double> cdf_;
};

// Pr[H = x] = binom(a,x) binom(v,u-x) / binom(a+v,u) on {0..u}, a > u - 1,
// with real-argument binomials through log-Gamma.
class GeneralHypergeometricLaw {
public:
  GeneralHypergeometricLaw(double a, std::int64_t u, std::int64_t v);

  double log_pmf(std::int64_t x) const;
  const std::vector<double>& pmf() const { return pmf_; }
  std::int64_t sample(RngStream& rng) const;

private:
  double a_;
  std::int64_t u_, v_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

// sum_i (-1)^{i+1} lambda^i binom(r+i, i) m_{r+i}
unseen::FrequentistEstimate thisted_efron(const SampleSummary& s, std::int64_t m, std::int64_t r);

// m_r (1 - (theta + n - r + alpha)_(m) / (theta + n)_(m)).
double estimator(const PypParams& p, const SampleSummary& s, std::int64_t m, std::int64_t r);

// Exact law of the number of frequency-r species seen again in m further
// draws, on {0..m_r}, by inclusion-exclusion in quad precision.
DiscretePosterior posterior_exact(const PypParams& p, const SampleSummary& s, std::int64_t m,
                                  std::int64_t r);

enum class McPath { automatic, compound, forward_urn };

// Compound hypergeometric draw m_r - H(c-1, m_r, U) when its U-law is a
// genuine pmf (path "compound"), otherwise a forward simulation of the
// predictive urn that tracks only the m_r marked species (path "forward-urn").
DiscretePosterior posterior_mc(const PypParams& p, const SampleSummary& s, std::int64_t m,
                               std::int64_t r, const McOptions& opt, McPath path = McPath::automatic);

// Binomial(m_r, 1 - (n/(n+m))^{r-alpha}).
DiscretePosterior posterior_binomial_approx(const PypParams& p, const SampleSummary& s, std::int64_t m,
                                            std::int64_t r);

}  // namespace pyspecies::prevalence
