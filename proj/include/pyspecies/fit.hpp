#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pyspecies/data.hpp"

namespace pyspecies::fit {

// alpha-profile log-likelihood at theta = 0,
//   l(alpha) = (K-1) log alpha + sum_{i=1}^{n-1} c_i log(i - alpha),
// c_i = number of species seen more than i times. c_i is constant between
// consecutive observed frequencies, so every evaluation costs
// O(#distinct frequencies).
class ProfileLikelihood {
public:
  explicit ProfileLikelihood(const SampleSummary& s);

  double log_lik(double alpha) const;
  double score(double alpha) const;
  // -d^2/dalpha^2 of log_lik; always positive.
  double observed_info(double alpha) const;

  std::int64_t n() const { return n_; }
  std::int64_t k() const { return k_; }

private:
  struct Segment {
    std::int64_t lo;  // i runs over [lo, hi)
    std::int64_t hi;
    double weight;    // c_i on the segment
  };
  std::int64_t n_, k_;
  std::vector<Segment> segments_;
};

double log_lik_profile(const SampleSummary& s, double alpha);
double observed_info(const SampleSummary& s, double alpha);

// Unique maximizer of the profile; requires 1 < K < n.
double mle_alpha(const SampleSummary& s);

// Root of psi(theta+1) - psi(theta/alpha+1)/alpha + log(K)/alpha - log(n)
// on (-alpha, inf).
double aux_theta(const SampleSummary& s, double alpha);
double aux_theta_score(const SampleSummary& s, double alpha, double theta);

// Exact log-probability of the observed partition under PYP(alpha, theta).
double log_lik_joint(const SampleSummary& s, double alpha, double theta);
double joint_theta_score(const SampleSummary& s, double alpha, double theta);
// argmax over theta of log_lik_joint at fixed alpha.
double theta_mle_given_alpha(const SampleSummary& s, double alpha);

struct TailFunctionals {
  double L_hat;       // K / (Gamma(1-alpha) n^alpha)
  double theta_star;  // solves L = exp{psi(theta/alpha+1) - alpha psi(theta+1)} / Gamma(1-alpha)
};

TailFunctionals tail_functionals(const SampleSummary& s, double alpha_hat);
double theta_star_from_L(double L, double alpha);
double L_from_theta_star(double theta, double alpha);

// Unnormalized log density of the limiting law of gamma = theta + alpha:
//   (z/alpha) log[L Gamma(1-alpha)] + log Gamma(1-alpha+z) - log Gamma(z/alpha).
double hstar_log_weight(double z, double L, double alpha_star);

struct Prior {
  enum class Kind { uniform, beta, exponential, gamma, flat };
  Kind kind = Kind::uniform;
  double a = 1.0;  // beta a | exponential rate | gamma shape
  double b = 1.0;  // beta b | gamma rate

  double log_density(double x) const;
  std::string describe() const;
};

// "uniform" | "beta:a,b"
Prior parse_alpha_prior(std::string_view spec);
// "exp:rate" | "gamma:shape,rate" | "flat"
Prior parse_gamma_prior(std::string_view spec);

struct GridOptions {
  int alpha_points = 400;
  int gamma_points = 400;
  double gamma_max = 20.0;
  // Restrict the alpha grid to alpha_hat0 +- alpha_window_sd / sqrt(V).
  // Non-positive means the whole of (0,1).
  double alpha_window_sd = 12.0;
  int threads = 1;
};

struct MarginalSummary {
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q500 = 0.0;
  double q975 = 0.0;
};

struct GridPosterior {
  std::vector<double> alpha_grid;
  std::vector<double> gamma_grid;
  std::vector<double> log_post;  // row-major, alpha index major
  Prior prior_alpha;
  Prior prior_gamma;

  double at(std::size_t i, std::size_t j) const { return log_post[i * gamma_grid.size() + j]; }
  std::vector<double> alpha_marginal() const;
  std::vector<double> gamma_marginal() const;
  MarginalSummary alpha_summary() const;
  MarginalSummary gamma_summary() const;
  MarginalSummary theta_summary() const;
};

GridPosterior hierarchical_posterior(const SampleSummary& s, const Prior& prior_alpha,
                                     const Prior& prior_gamma, const GridOptions& opt = {});

// H_* normalized on a gamma grid against a gamma prior.
std::vector<double> hstar_on_grid(const std::vector<double>& gamma_grid, double L, double alpha_star,
                                  const Prior& prior_gamma);

struct FitReport {
  std::string method;  // "profile-mle" | "joint-mle" | "hierarchical"
  double alpha_hat = 0.0;
  double theta_hat = 0.0;
  double log_lik_at_max = 0.0;
  double observed_info = 0.0;  // at the profile maximizer
  double alpha_profile = 0.0;  // profile maximizer
  double theta_aux = 0.0;      // auxiliary theta at alpha_profile
  double L_hat = 0.0;
  double theta_star = 0.0;
  double gamma_hat = 0.0;      // theta_hat + alpha_hat
  double alpha_gap = 0.0;      // |alpha_hat - alpha_profile|
  std::optional<GridPosterior> grid;
};

FitReport fit_profile(const SampleSummary& s);
FitReport mle_joint(const SampleSummary& s);
FitReport fit_hierarchical(const SampleSummary& s, const Prior& prior_alpha, const Prior& prior_gamma,
                           const GridOptions& opt = {});

}  // namespace pyspecies::fit
