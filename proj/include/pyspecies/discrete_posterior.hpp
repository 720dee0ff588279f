#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pyspecies {

enum class Provenance { exact, monte_carlo, approximation };

const char* to_string(Provenance p);

// Law of a counting functional on {0, ..., support_max}.
struct DiscretePosterior {
  std::vector<double> log_pmf;
  double mean = 0.0;
  Provenance provenance = Provenance::exact;
  // Which construction produced the law (e.g. "forward-urn").
  std::string method;

  std::int64_t support_max() const { return static_cast<std::int64_t>(log_pmf.size()) - 1; }
  std::vector<double> pmf() const;

  // Normalizes nothing; the mean is computed from the given atoms.
  static DiscretePosterior from_log_pmf(std::vector<double> log_pmf, Provenance prov, std::string method);
  // Empirical law of replicate draws: counts[x] of `replicates` landed on x.
  static DiscretePosterior from_counts(const std::vector<std::int64_t>& counts, std::int64_t replicates,
                                       Provenance prov, std::string method);

  // Shortest contiguous window with mass >= level; ties go to the lowest
  // left endpoint.
  std::pair<std::int64_t, std::int64_t> credible_interval(double level) const;
};

}  // namespace pyspecies
