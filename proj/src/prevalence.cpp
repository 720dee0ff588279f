#include "pyspecies/prevalence.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pyspecies/errors.hpp"
#include "pyspecies/special_functions.hpp"

namespace pyspecies::prevalence {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Signed weights above this size are only computed when the recurrence is
// cancellation-free; the quad alternating sum is O(u^2) and slow.
constexpr std::int64_t signed_weight_max_u = 200;

// Path A precomputes one hypergeometric table per value of U.
constexpr std::int64_t compound_max_cells = 20000000;

std::int64_t inverse_cdf(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
  return std::min<std::int64_t>(it - cdf.begin(), static_cast<std::int64_t>(cdf.size()) - 1);
}

void require_mr(const SampleSummary& s, std::int64_t r) {
  if (r < 1) throw DomainError("prevalence: r must be >= 1");
  if (s.m(r) < 1)
    throw DomainError("prevalence: the sample has no species with frequency r = " + std::to_string(r));
}

double log_gen_binom(double y, double x) {
  return log_gamma(y + 1.0) - log_gamma(x + 1.0) - log_gamma(y - x + 1.0);
}

}  // namespace

GenFactorialLaw::GenFactorialLaw(double b, double c, std::int64_t u) : b_(b), c_(c), u_(u) {
  if (!(b > 0) || !(c > 0) || u < 1) throw DomainError("GenFactorialLaw: need b, c > 0 and u >= 1");
  const int uu = static_cast<int>(u);
  weights_.assign(u + 1, SignedLog{});
  if (!generalized_factorial_recurrence_is_positive(uu, b, 0.0) && u > signed_weight_max_u) {
    is_probability_ = false;
    return;
  }
  const auto row = generalized_factorial_row(uu, b, 0.0, false);
  const double log_denom = log_rising_factorial(b * c, u);
  bool nonneg = true;
  long double total = 0.0L;
  for (int x = 1; x <= uu; ++x) {
    SignedLog w = row[x];
    if (!w.is_zero()) w.log_abs += log_rising_factorial(c, x) - log_denom;
    weights_[x] = w;
    nonneg &= w.sign >= 0;
    total += w.value();
  }
  is_probability_ = nonneg && std::fabs(static_cast<double>(total) - 1.0) <= 1e-10;
  if (is_probability_) {
    cdf_.assign(u + 1, 0.0);
    long double acc = 0.0L;
    for (int x = 1; x <= uu; ++x) {
      acc += weights_[x].value();
      cdf_[x] = static_cast<double>(acc);
    }
  }
}

std::int64_t GenFactorialLaw::sample(RngStream& rng) const {
  if (!is_probability_) throw DomainError("GenFactorialLaw: weights are not a probability mass function");
  return inverse_cdf(cdf_, rng.uniform());
}

GeneralHypergeometricLaw::GeneralHypergeometricLaw(double a, std::int64_t u, std::int64_t v)
    : a_(a), u_(u), v_(v) {
  if (u < 0 || v < 0) throw DomainError("GeneralHypergeometricLaw: u, v must be >= 0");
  if (!(a > static_cast<double>(u) - 1.0))
    throw DomainError("GeneralHypergeometricLaw: need a > u - 1");
  pmf_.assign(u + 1, 0.0);
  cdf_.assign(u + 1, 0.0);
  long double acc = 0.0L;
  for (std::int64_t x = 0; x <= u; ++x) {
    const double lp = log_pmf(x);
    pmf_[x] = lp == neg_inf ? 0.0 : std::exp(lp);
    acc += pmf_[x];
    cdf_[x] = static_cast<double>(acc);
  }
}

double GeneralHypergeometricLaw::log_pmf(std::int64_t x) const {
  if (x < 0 || x > u_ || u_ - x > v_) return neg_inf;
  const double dv = static_cast<double>(v_);
  const double du = static_cast<double>(u_);
  const double dx = static_cast<double>(x);
  return log_gen_binom(a_, dx) + log_gen_binom(dv, du - dx) - log_gen_binom(a_ + dv, du);
}

std::int64_t GeneralHypergeometricLaw::sample(RngStream& rng) const {
  return inverse_cdf(cdf_, rng.uniform());
}

unseen::FrequentistEstimate thisted_efron(const SampleSummary& s, std::int64_t m, std::int64_t r) {
  if (m < 1) throw DomainError("m must be >= 1");
  if (r < 1) throw DomainError("thisted_efron: r must be >= 1");
  unseen::FrequentistEstimate out;
  out.lambda = static_cast<double>(m) / static_cast<double>(s.n());
  out.lambda_ge_one = out.lambda >= 1.0;
  const double log_lambda = std::log(out.lambda);
  long double sum = 0.0L;
  for (auto it = s.fingerprint().upper_bound(r); it != s.fingerprint().end(); ++it) {
    const std::int64_t i = it->first - r;
    const double log_binom = log_gen_binom(static_cast<double>(it->first), static_cast<double>(i));
    const long double term = std::exp(static_cast<long double>(i) * log_lambda + log_binom) * it->second;
    sum += (i % 2 == 1) ? term : -term;
  }
  out.value = static_cast<double>(sum);
  return out;
}

double estimator(const PypParams& p, const SampleSummary& s, std::int64_t m, std::int64_t r) {
  p.validate();
  if (m < 1) throw DomainError("m must be >= 1");
  if (r < 1) throw DomainError("prevalence estimator: r must be >= 1");
  const std::int64_t mr = s.m(r);
  if (mr == 0) return 0.0;
  const double shift = static_cast<double>(r) - p.alpha;
  return -static_cast<double>(mr) *
         std::expm1(log_rising_ratio(p.theta + static_cast<double>(s.n()), -shift, m));
}

DiscretePosterior posterior_exact(const PypParams& p, const SampleSummary& s, std::int64_t m,
                                  std::int64_t r) {
  p.validate();
  if (m < 1) throw DomainError("m must be >= 1");
  require_mr(s, r);
  const std::int64_t mr = s.m(r);
  if (mr > exact_max_mr)
    throw SizeGuardError("exact prevalence posterior supports m_r <= " + std::to_string(exact_max_mr) +
                         " (got " + std::to_string(mr) + "); use the Monte Carlo method");
  const int M = static_cast<int>(mr);
  const __float128 base = static_cast<__float128>(p.theta) + static_cast<__float128>(s.n());
  const __float128 shift = static_cast<__float128>(r) - static_cast<__float128>(p.alpha);
  const __float128 fm = static_cast<__float128>(m);
  // q_x = (base - x shift)_(m) / (base)_(m): no x chosen species appear again
  std::vector<__float128> q(M + 1);
  for (int x = 0; x <= M; ++x) {
    const __float128 a = base - x * shift;
    q[x] = expq(lgammaq(a + fm) - lgammaq(a) - lgammaq(base + fm) + lgammaq(base));
  }
  std::vector<__float128> binom_row(M + 1);
  auto binomq = [](int n, int k) {
    return expq(lgammaq(static_cast<__float128>(n) + 1) - lgammaq(static_cast<__float128>(k) + 1) -
                lgammaq(static_cast<__float128>(n - k) + 1));
  };
  // Relative accuracy of each q_x coming out of lgammaq differences.
  const __float128 q_rel_err = 1e-26;
  std::vector<double> atom(M + 1, 0.0);  // indexed by f = m_r - d
  for (int d = 0; d <= M; ++d) {
    const int rest = M - d;
    __float128 sum = 0, comp = 0, magnitude = 0;
    for (int j = 0; j <= rest; ++j) {
      const __float128 t = binomq(rest, j) * q[d + j];
      const __float128 x = (j % 2 == 0) ? t : -t;
      magnitude += t;
      const __float128 s2 = sum + x;
      if (fabsq(sum) >= fabsq(x))
        comp += (sum - s2) + x;
      else
        comp += (x - s2) + sum;
      sum = s2;
    }
    sum += comp;
    const __float128 scale = binomq(M, d);
    if (scale * magnitude * q_rel_err > 1e-12)
      throw NumericalError("prevalence posterior: inclusion-exclusion lost accuracy; use the Monte Carlo method");
    atom[M - d] = static_cast<double>(scale * sum);
  }
  for (int f = 0; f <= M; ++f) {
    if (f > m) {
      atom[f] = 0.0;  // at most m species can be seen again
      continue;
    }
    if (atom[f] < -1e-9)
      throw NumericalError("prevalence posterior: negative atom " + std::to_string(atom[f]));
    if (atom[f] < 0.0) atom[f] = 0.0;
  }
  long double total = 0.0L;
  for (double a : atom) total += a;
  std::vector<double> log_pmf(M + 1, neg_inf);
  for (int f = 0; f <= M; ++f)
    if (atom[f] > 0.0) log_pmf[f] = std::log(atom[f]) - std::log(static_cast<double>(total));
  return DiscretePosterior::from_log_pmf(std::move(log_pmf), Provenance::exact, "inclusion-exclusion");
}

DiscretePosterior posterior_mc(const PypParams& p, const SampleSummary& s, std::int64_t m, std::int64_t r,
                               const McOptions& opt, McPath path) {
  p.validate();
  if (m < 1) throw DomainError("m must be >= 1");
  require_mr(s, r);
  const std::int64_t mr = s.m(r);
  const double n = static_cast<double>(s.n());
  const double shift = static_cast<double>(r) - p.alpha;

  if (path != McPath::forward_urn && static_cast<double>(m) * static_cast<double>(mr + 1) <= compound_max_cells) {
    const double c = (p.theta + n) / shift;
    GenFactorialLaw ulaw(shift, c, m);
    if (ulaw.is_probability()) {
      std::vector<GeneralHypergeometricLaw> hyper;
      hyper.reserve(static_cast<std::size_t>(m));
      for (std::int64_t v = 1; v <= m; ++v) hyper.emplace_back(c - 1.0, mr, v);
      const auto counts = replicate_histogram(opt, mr, [&](RngStream& rng) {
        const std::int64_t u = ulaw.sample(rng);
        return mr - hyper[static_cast<std::size_t>(u - 1)].sample(rng);
      });
      return DiscretePosterior::from_counts(counts, opt.replicates, Provenance::monte_carlo, "compound");
    }
    if (path == McPath::compound)
      throw DomainError("compound path unavailable: generalized factorial weights are not a pmf");
  } else if (path == McPath::compound) {
    throw SizeGuardError("compound path unavailable at this size");
  }

  // Forward urn: untouched marked species keep weight r - alpha each;
  // everything else only matters through the new-species weight.
  const std::int64_t k0 = s.k();
  const auto counts = replicate_histogram(opt, mr, [&](RngStream& rng) {
    std::int64_t k = k0;
    std::int64_t untouched = mr;
    for (std::int64_t t = 0; t < m; ++t) {
      const double total = p.theta + n + static_cast<double>(t);
      const double u = rng.uniform() * total;
      const double new_w = p.theta + p.alpha * static_cast<double>(k);
      if (u < new_w) {
        ++k;
      } else if (u < new_w + shift * static_cast<double>(untouched)) {
        --untouched;
      }
    }
    return mr - untouched;
  });
  return DiscretePosterior::from_counts(counts, opt.replicates, Provenance::monte_carlo, "forward-urn");
}

DiscretePosterior posterior_binomial_approx(const PypParams& p, const SampleSummary& s, std::int64_t m,
                                            std::int64_t r) {
  p.validate();
  if (m < 1) throw DomainError("m must be >= 1");
  require_mr(s, r);
  const std::int64_t mr = s.m(r);
  const double n = static_cast<double>(s.n());
  const double shift = static_cast<double>(r) - p.alpha;
  // 1 - (n/(n+m))^{r-alpha}
  const double q = -std::expm1(-shift * std::log1p(static_cast<double>(m) / n));
  std::vector<double> log_pmf(mr + 1, neg_inf);
  if (q <= 0.0) {
    log_pmf[0] = 0.0;
  } else {
    const double lq = std::log(q);
    const double l1q = std::log1p(-q);
    for (std::int64_t x = 0; x <= mr; ++x)
      log_pmf[x] = log_gen_binom(static_cast<double>(mr), static_cast<double>(x)) + x * lq +
                   static_cast<double>(mr - x) * l1q;
  }
  return DiscretePosterior::from_log_pmf(std::move(log_pmf), Provenance::approximation, "binomial");
}

}  // namespace pyspecies::prevalence
