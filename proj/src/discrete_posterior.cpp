#include "pyspecies/discrete_posterior.hpp"

#include <cmath>
#include <limits>

#include "pyspecies/errors.hpp"

namespace pyspecies {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::monte_carlo: return "monte-carlo";
    case Provenance::approximation: return "approximation";
  }
  return "unknown";
}

std::vector<double> DiscretePosterior::pmf() const {
  std::vector<double> out(log_pmf.size());
  for (std::size_t i = 0; i < log_pmf.size(); ++i) out[i] = std::exp(log_pmf[i]);
  return out;
}

DiscretePosterior DiscretePosterior::from_log_pmf(std::vector<double> log_pmf, Provenance prov,
                                                  std::string method) {
  if (log_pmf.empty()) throw DomainError("empty posterior support");
  DiscretePosterior d;
  long double mean = 0.0L;
  for (std::size_t x = 0; x < log_pmf.size(); ++x)
    mean += static_cast<long double>(x) * std::exp(static_cast<long double>(log_pmf[x]));
  d.log_pmf = std::move(log_pmf);
  d.mean = static_cast<double>(mean);
  d.provenance = prov;
  d.method = std::move(method);
  return d;
}

DiscretePosterior DiscretePosterior::from_counts(const std::vector<std::int64_t>& counts,
                                                 std::int64_t replicates, Provenance prov,
                                                 std::string method) {
  if (replicates < 1 || counts.empty()) throw DomainError("from_counts: no replicates");
  DiscretePosterior d;
  d.log_pmf.resize(counts.size());
  const double lr = std::log(static_cast<double>(replicates));
  long double total = 0.0L;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    d.log_pmf[x] = counts[x] > 0 ? std::log(static_cast<double>(counts[x])) - lr
                                 : -std::numeric_limits<double>::infinity();
    total += static_cast<long double>(x) * counts[x];
  }
  d.mean = static_cast<double>(total / replicates);
  d.provenance = prov;
  d.method = std::move(method);
  return d;
}

std::pair<std::int64_t, std::int64_t> DiscretePosterior::credible_interval(double level) const {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("credible level must lie in (0,1)");
  const auto p = pmf();
  const std::size_t n = p.size();
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + p[i];
  const long double target = static_cast<long double>(level) * prefix[n] - 1e-12L;
  std::size_t best_l = 0, best_r = n - 1;
  std::size_t r = 0;
  for (std::size_t l = 0; l < n; ++l) {
    if (r < l) r = l;
    while (r < n && prefix[r + 1] - prefix[l] < target) ++r;
    if (r == n) break;
    if (r - l < best_r - best_l) {
      best_l = l;
      best_r = r;
    }
  }
  return {static_cast<std::int64_t>(best_l), static_cast<std::int64_t>(best_r)};
}

}  // namespace pyspecies
