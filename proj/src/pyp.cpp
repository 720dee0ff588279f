#include "pyspecies/pyp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pyspecies/combinatorics.hpp"
#include "pyspecies/errors.hpp"
#include "pyspecies/special_functions.hpp"

namespace pyspecies {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// sum_{i=1}^{k-1} log(theta + i alpha)
double log_new_block_weights(const PypParams& p, std::int64_t k) {
  if (k <= 1) return 0.0;
  if (p.is_dirichlet()) return static_cast<double>(k - 1) * std::log(p.theta);
  return static_cast<double>(k - 1) * std::log(p.alpha) +
         log_rising_factorial(p.theta / p.alpha + 1.0, k - 1);
}

double eppf_log_from_fingerprint(const PypParams& p, const Fingerprint& fp, std::int64_t n,
                                 std::int64_t k) {
  double s = log_new_block_weights(p, k) - log_rising_factorial(p.theta + 1.0, n - 1);
  for (const auto& [size, count] : fp)
    if (size > 1 && count > 0)
      s += static_cast<double>(count) * log_rising_factorial(1.0 - p.alpha, size - 1);
  return s;
}

}  // namespace

void PypParams::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in [0, 1), got " + std::to_string(alpha));
  if (!(theta > -alpha) || !std::isfinite(theta))
    throw DomainError("theta must exceed -alpha, got theta = " + std::to_string(theta));
}

Fingerprint PartitionState::fingerprint() const {
  Fingerprint fp;
  for (auto s : block_sizes) ++fp[s];
  return fp;
}

double eppf_log(const PypParams& p, std::span<const std::int64_t> block_sizes) {
  p.validate();
  if (block_sizes.empty()) throw DomainError("eppf_log: empty partition");
  Fingerprint fp;
  std::int64_t n = 0;
  for (auto s : block_sizes) {
    if (s < 1) throw DomainError("eppf_log: block sizes must be positive");
    ++fp[s];
    n += s;
  }
  return eppf_log_from_fingerprint(p, fp, n, static_cast<std::int64_t>(block_sizes.size()));
}

double epsf_log(const PypParams& p, const Fingerprint& fingerprint, std::int64_t n) {
  p.validate();
  std::int64_t total = 0;
  std::int64_t k = 0;
  double multiplicity = log_gamma(static_cast<double>(n) + 1.0);
  for (const auto& [r, m] : fingerprint) {
    if (r < 1 || m < 0) throw DomainError("epsf_log: invalid fingerprint entry");
    if (m == 0) continue;
    total += r * m;
    k += m;
    multiplicity -= static_cast<double>(m) * log_gamma(static_cast<double>(r) + 1.0) +
                    log_gamma(static_cast<double>(m) + 1.0);
  }
  if (total != n || n < 1)
    throw DomainError("epsf_log: sum of r * m_r is " + std::to_string(total) + ", expected n = " +
                      std::to_string(n));
  return multiplicity + eppf_log_from_fingerprint(p, fingerprint, n, k);
}

double predictive_new_prob(const PypParams& p, std::int64_t n, std::int64_t k) {
  p.validate();
  if (n == 0) return 1.0;
  return (p.theta + static_cast<double>(k) * p.alpha) / (p.theta + static_cast<double>(n));
}

double predictive_new_prob(const PypParams& p, const PartitionState& s) {
  return predictive_new_prob(p, s.n, s.k());
}

double predictive_block_prob(const PypParams& p, const PartitionState& s, std::size_t block) {
  p.validate();
  if (block >= s.block_sizes.size()) throw DomainError("predictive_block_prob: no such block");
  return (static_cast<double>(s.block_sizes[block]) - p.alpha) /
         (p.theta + static_cast<double>(s.n));
}

namespace {

PartitionState draw_partition(const PypParams& p, std::int64_t n, RngStream& rng,
                              std::vector<std::uint32_t>& owner) {
  p.validate();
  if (n < 1) throw DomainError("sample_partition: n must be >= 1");
  PartitionState st;
  st.block_sizes.reserve(64);
  // owner[j] is the block of observation j; picking a uniform past
  // observation selects block b with probability n_b / i, and accepting with
  // probability (n_b - alpha)/n_b leaves weights proportional to n_b - alpha.
  owner.clear();
  owner.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(st.block_sizes.size());
    if (i == 0 || rng.bernoulli((p.theta + k * p.alpha) / (p.theta + static_cast<double>(i)))) {
      owner.push_back(static_cast<std::uint32_t>(st.block_sizes.size()));
      st.block_sizes.push_back(1);
    } else {
      for (;;) {
        const auto b = owner[rng.below(static_cast<std::uint64_t>(i))];
        const double size = static_cast<double>(st.block_sizes[b]);
        if (p.alpha == 0.0 || rng.uniform() * size < size - p.alpha) {
          owner.push_back(b);
          ++st.block_sizes[b];
          break;
        }
      }
    }
  }
  st.n = n;
  return st;
}

}  // namespace

PartitionState sample_partition(const PypParams& p, std::int64_t n, RngStream& rng) {
  std::vector<std::uint32_t> owner;
  return draw_partition(p, n, rng, owner);
}

std::vector<std::uint32_t> sample_sequence(const PypParams& p, std::int64_t n, RngStream& rng) {
  std::vector<std::uint32_t> owner;
  draw_partition(p, n, rng, owner);
  return owner;
}

std::int64_t sample_k_star(const PypParams& p, std::int64_t n_offset, std::int64_t m, RngStream& rng) {
  p.validate();
  if (m < 1) throw DomainError("sample_k_star: m must be >= 1");
  const double th = p.theta + static_cast<double>(n_offset);
  std::int64_t k = 1;
  for (std::int64_t i = 1; i < m; ++i)
    if (rng.bernoulli((th + p.alpha * static_cast<double>(k)) / (th + static_cast<double>(i)))) ++k;
  return k;
}

std::int64_t sample_m_star(const PypParams& p, std::int64_t n_offset, std::int64_t m, std::int64_t r,
                           RngStream& rng) {
  p.validate();
  if (r < 1 || r > m) throw DomainError("sample_m_star: need 1 <= r <= m");
  const double th = p.theta + static_cast<double>(n_offset);
  std::map<std::int64_t, std::int64_t> counts{{1, 1}};
  std::int64_t k = 1;
  for (std::int64_t i = 1; i < m; ++i) {
    const double di = static_cast<double>(i);
    const double new_w = th + p.alpha * static_cast<double>(k);
    double u = rng.uniform() * (th + di);
    if (u < new_w) {
      ++counts[1];
      ++k;
      continue;
    }
    u -= new_w;
    auto it = counts.begin();
    for (;;) {
      const double w = static_cast<double>(it->second) * (static_cast<double>(it->first) - p.alpha);
      auto next = std::next(it);
      if (u < w || next == counts.end()) break;
      u -= w;
      it = next;
    }
    const std::int64_t size = it->first;
    if (--it->second == 0) counts.erase(it);
    ++counts[size + 1];
  }
  auto f = counts.find(r);
  return f == counts.end() ? 0 : f->second;
}

std::vector<double> k_n_log_pmf_row(const PypParams& p, std::int64_t n) {
  p.validate();
  if (n < 1) throw DomainError("k_n_log_pmf: n must be >= 1");
  if (n > 100000) throw SizeGuardError("k_n_log_pmf: n above 1e5 is not supported");
  const int nn = static_cast<int>(n);
  std::vector<double> out(n + 1, neg_inf);
  const double denom = log_rising_factorial(p.theta + 1.0, n - 1);
  if (p.is_dirichlet()) {
    const auto st = log_stirling_row(nn, 0.0);
    for (int x = 1; x <= nn; ++x) out[x] = log_new_block_weights(p, x) + st[x] - denom;
  } else {
    const auto row = generalized_factorial_row(nn, p.alpha, 0.0, true);
    for (int x = 1; x <= nn; ++x)
      if (!row[x].is_zero()) out[x] = log_new_block_weights(p, x) + row[x].log_abs - denom;
  }
  return out;
}

double k_n_log_pmf(const PypParams& p, std::int64_t n, std::int64_t x) {
  if (x < 1 || x > n) throw DomainError("k_n_log_pmf: need 1 <= x <= n");
  return k_n_log_pmf_row(p, n)[x];
}

double expected_k_star(const PypParams& p, std::int64_t n_offset, std::int64_t m) {
  p.validate();
  if (m < 1) return 0.0;
  const double th = p.theta + static_cast<double>(n_offset);
  if (p.is_dirichlet()) {
    long double s = 0;
    for (std::int64_t i = 0; i < m; ++i) s += th / (th + static_cast<long double>(i));
    return static_cast<double>(s);
  }
  if (th > 0) return (th / p.alpha) * std::expm1(log_rising_ratio(th, p.alpha, m));
  // theta' in (-alpha, 0]: E[K_{i+1}] = E[K_i] + (theta' + alpha E[K_i])/(theta' + i)
  long double e = 1.0L;
  for (std::int64_t i = 1; i < m; ++i) e += (th + p.alpha * e) / (th + static_cast<long double>(i));
  return static_cast<double>(e);
}

double expected_m_star(const PypParams& p, std::int64_t n_offset, std::int64_t m, std::int64_t r) {
  p.validate();
  if (r < 1) throw DomainError("expected_m_star: r must be >= 1");
  if (r > m) return 0.0;
  const double th = p.theta + static_cast<double>(n_offset);
  const double dm = static_cast<double>(m);
  const double dr = static_cast<double>(r);
  const double log_falling = log_gamma(dm + 1.0) - log_gamma(dm - dr + 1.0);
  const double v = log_falling + log_rising_factorial(1.0 - p.alpha, r - 1) - log_gamma(dr + 1.0) +
                   log_rising_factorial(th + p.alpha, m - r) - log_rising_factorial(th + 1.0, m - 1);
  return std::exp(v);
}

}  // namespace pyspecies
