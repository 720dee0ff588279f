#pragma once

#include <cstdint>
#include <utility>

#include "pyspecies/data.hpp"
#include "pyspecies/pyp.hpp"

namespace pyspecies::coverage {

// Beta(shape1, shape2). When the sample has no species of frequency r >= 1
// the posterior of that coverage is a point mass at zero; this is flagged
// instead of storing a zero shape.
struct BetaPosterior {
  double shape1 = 1.0;
  double shape2 = 1.0;
  bool point_mass_at_zero = false;

  double mean() const;
};

// (r+1) m_{r+1} / n. Zero whenever m_{r+1} = 0.
double good_turing(const SampleSummary& s, std::int64_t r);

BetaPosterior posterior(const PypParams& p, const SampleSummary& s, std::int64_t r);

// Posterior mean: (theta + k alpha)/(theta + n) for r = 0 and
// (r - alpha) m_r / (theta + n) for r >= 1.
double estimate(const PypParams& p, const SampleSummary& s, std::int64_t r);

// Equal-tailed interval from Beta quantiles.
std::pair<double, double> credible_interval(const BetaPosterior& post, double level);

// m'_{r+1} = alpha (1-alpha)_(r) k / (r+1)!, alpha in (0,1).
double smoothed_count(const PypParams& p, std::int64_t k, std::int64_t r);

struct SmoothedComparison {
  double smoothed_good_turing;  // (r+1) m'_{r+1} / n
  double bnp_estimate;
  double relative_gap;
};

SmoothedComparison compare_smoothed(const PypParams& p, const SampleSummary& s, std::int64_t r);

}  // namespace pyspecies::coverage
