#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pyspecies/rng.hpp"

namespace pyspecies {

// Pitman-Yor parameters: discount alpha in [0,1), scale theta > -alpha.
// alpha == 0 is the Dirichlet process and is handled by separate branches.
struct PypParams {
  double alpha = 0.0;
  double theta = 1.0;

  void validate() const;
  bool is_dirichlet() const { return alpha == 0.0; }
};

using Fingerprint = std::map<std::int64_t, std::int64_t>;

struct PartitionState {
  std::int64_t n = 0;
  std::vector<std::int64_t> block_sizes;

  std::int64_t k() const { return static_cast<std::int64_t>(block_sizes.size()); }
  Fingerprint fingerprint() const;
};

double eppf_log(const PypParams& p, std::span<const std::int64_t> block_sizes);
double epsf_log(const PypParams& p, const Fingerprint& fingerprint, std::int64_t n);

// Probability that draw n+1 opens a new block: (theta + k alpha)/(theta + n).
double predictive_new_prob(const PypParams& p, std::int64_t n, std::int64_t k);
double predictive_new_prob(const PypParams& p, const PartitionState& s);
// Probability that draw n+1 joins block i: (n_i - alpha)/(theta + n).
double predictive_block_prob(const PypParams& p, const PartitionState& s, std::size_t block);

// Sequential urn draw of a partition of {1..n}.
PartitionState sample_partition(const PypParams& p, std::int64_t n, RngStream& rng);
// Same draw, returned as the species index of each observation in order.
std::vector<std::uint32_t> sample_sequence(const PypParams& p, std::int64_t n, RngStream& rng);

// Number of distinct species among m draws from PYP(alpha, theta + n_offset).
std::int64_t sample_k_star(const PypParams& p, std::int64_t n_offset, std::int64_t m, RngStream& rng);

// Number of species with frequency exactly r among m draws from
// PYP(alpha, theta + n_offset).
std::int64_t sample_m_star(const PypParams& p, std::int64_t n_offset, std::int64_t m, std::int64_t r,
                           RngStream& rng);

// log Pr[K_n = x].
double k_n_log_pmf(const PypParams& p, std::int64_t n, std::int64_t x);
// log Pr[K_n = x] for x = 0..n (entry 0 is -inf for n >= 1).
std::vector<double> k_n_log_pmf_row(const PypParams& p, std::int64_t n);

// E[K*_m] and E[M*_{r,m}] under PYP(alpha, theta + n_offset).
double expected_k_star(const PypParams& p, std::int64_t n_offset, std::int64_t m);
double expected_m_star(const PypParams& p, std::int64_t n_offset, std::int64_t m, std::int64_t r);

}  // namespace pyspecies
