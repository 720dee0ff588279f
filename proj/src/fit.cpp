#include "pyspecies/fit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include "pyspecies/combinatorics.hpp"
#include "pyspecies/errors.hpp"
#include "pyspecies/special_functions.hpp"

namespace pyspecies::fit {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr int iteration_cap = 200;

// Segments shorter than this are summed term by term; longer ones use
// log-Gamma / polygamma differences.
constexpr std::int64_t direct_span = 32;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1), got " + std::to_string(alpha));
}

void require_theta(double alpha, double theta) {
  if (!(theta > -alpha) || !std::isfinite(theta))
    throw DomainError("theta must exceed -alpha, got " + std::to_string(theta));
}

void require_interior(const SampleSummary& s) {
  if (s.k() == s.n())
    throw PathologyError("K_n = n (every observation is a distinct species): the alpha likelihood "
                         "is increasing and has no interior maximizer");
  if (s.k() == 1)
    throw PathologyError("K_n = 1 (a single species): the alpha likelihood is decreasing and has no "
                         "interior maximizer");
}

// sum_{i=0}^{u-1} 1/(a+i)
double sum_inv(double a, std::int64_t u) {
  if (u <= 0) return 0.0;
  if (u <= 64) {
    double s = 0.0;
    for (std::int64_t i = 0; i < u; ++i) s += 1.0 / (a + static_cast<double>(i));
    return s;
  }
  return digamma(a + static_cast<double>(u)) - digamma(a);
}

// sum_{i=lo}^{hi-1} f(i - alpha) for f = log, 1/x, 1/x^2
double seg_log(std::int64_t lo, std::int64_t hi, double alpha) {
  if (hi - lo <= direct_span) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += std::log(static_cast<double>(i) - alpha);
    return s;
  }
  return log_gamma(static_cast<double>(hi) - alpha) - log_gamma(static_cast<double>(lo) - alpha);
}

double seg_inv(std::int64_t lo, std::int64_t hi, double alpha) {
  if (hi - lo <= direct_span) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += 1.0 / (static_cast<double>(i) - alpha);
    return s;
  }
  return digamma(static_cast<double>(hi) - alpha) - digamma(static_cast<double>(lo) - alpha);
}

double seg_inv2(std::int64_t lo, std::int64_t hi, double alpha) {
  if (hi - lo <= direct_span) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const double x = static_cast<double>(i) - alpha;
      s += 1.0 / (x * x);
    }
    return s;
  }
  return trigamma(static_cast<double>(lo) - alpha) - trigamma(static_cast<double>(hi) - alpha);
}

// Bisection on a decreasing function over (lo, hi) with f(lo) > 0 > f(hi).
template <class F>
double bisect_decreasing(F f, double lo, double hi, double score_tol) {
  for (int it = 0; it < iteration_cap; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (std::fabs(v) <= score_tol) return mid;
    if (v > 0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(mid))) return 0.5 * (lo + hi);
  }
  throw NumericalError("bisection did not converge within the iteration cap");
}

template <class F>
double golden_max(F f, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iteration_cap && hi - lo > tol; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

bool parse_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<double> split_numbers(std::string_view body, std::size_t want, std::string_view spec) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= body.size()) {
    const auto pos = body.find(',', start);
    const auto piece = body.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    double x = 0;
    if (!parse_double(piece, x) || !std::isfinite(x) || x <= 0)
      throw ParseError("invalid prior parameter in '" + std::string(spec) + "'", 0);
    v.push_back(x);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (v.size() != want) throw ParseError("wrong number of prior parameters in '" + std::string(spec) + "'", 0);
  return v;
}

MarginalSummary summarize(const std::vector<double>& grid, const std::vector<double>& w) {
  MarginalSummary m;
  long double s1 = 0, s2 = 0, tot = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    tot += w[i];
    s1 += w[i] * grid[i];
    s2 += w[i] * grid[i] * grid[i];
  }
  m.mean = static_cast<double>(s1 / tot);
  m.sd = static_cast<double>(std::sqrt(std::max(0.0L, s2 / tot - (s1 / tot) * (s1 / tot))));
  auto quant = [&](double p) {
    long double acc = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      acc += w[i] / tot;
      if (acc >= p) return grid[i];
    }
    return grid.back();
  };
  m.q025 = quant(0.025);
  m.q500 = quant(0.5);
  m.q975 = quant(0.975);
  return m;
}

}  // namespace

ProfileLikelihood::ProfileLikelihood(const SampleSummary& s) : n_(s.n()), k_(s.k()) {
  // c_i on [f_{j-1}, f_j) equals the number of species with frequency >= f_j
  std::int64_t tail = s.k();
  std::int64_t prev = 1;
  for (const auto& [f, m] : s.fingerprint()) {
    if (f > prev) segments_.push_back({prev, f, static_cast<double>(tail)});
    tail -= m;
    prev = f;
  }
}

double ProfileLikelihood::log_lik(double alpha) const {
  require_alpha(alpha);
  double s = static_cast<double>(k_ - 1) * std::log(alpha);
  for (const auto& g : segments_) s += g.weight * seg_log(g.lo, g.hi, alpha);
  return s;
}

double ProfileLikelihood::score(double alpha) const {
  require_alpha(alpha);
  double s = static_cast<double>(k_ - 1) / alpha;
  for (const auto& g : segments_) s -= g.weight * seg_inv(g.lo, g.hi, alpha);
  return s;
}

double ProfileLikelihood::observed_info(double alpha) const {
  require_alpha(alpha);
  double s = static_cast<double>(k_ - 1) / (alpha * alpha);
  for (const auto& g : segments_) s += g.weight * seg_inv2(g.lo, g.hi, alpha);
  return s;
}

double log_lik_profile(const SampleSummary& s, double alpha) { return ProfileLikelihood(s).log_lik(alpha); }

double observed_info(const SampleSummary& s, double alpha) {
  return ProfileLikelihood(s).observed_info(alpha);
}

double mle_alpha(const SampleSummary& s) {
  require_interior(s);
  const ProfileLikelihood pl(s);
  double lo = 1e-12, hi = 1.0 - 1e-12;
  for (int it = 0; it < iteration_cap && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pl.score(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double sc = pl.score(a);
    if (std::fabs(sc) <= 1e-9) break;
    double next = a + sc / pl.observed_info(a);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (sc > 0)
      lo = a;
    else
      hi = a;
    if (next == a) break;
    a = next;
  }
  return a;
}

double aux_theta_score(const SampleSummary& s, double alpha, double theta) {
  require_alpha(alpha);
  require_theta(alpha, theta);
  const double k = static_cast<double>(s.k());
  const double n = static_cast<double>(s.n());
  return digamma(theta + 1.0) - digamma(theta / alpha + 1.0) / alpha + std::log(k) / alpha - std::log(n);
}

double aux_theta(const SampleSummary& s, double alpha) {
  require_alpha(alpha);
  auto g = [&](double t) { return aux_theta_score(s, alpha, t); };
  const double lo = -alpha * (1.0 - 1e-12);
  double hi = 1.0;
  for (int it = 0; g(hi) > 0; ++it) {
    if (it > 60) throw NumericalError("aux_theta: no sign change of the score");
    hi *= 2.0;
  }
  return bisect_decreasing(g, lo, hi, 1e-12);
}

double log_lik_joint(const SampleSummary& s, double alpha, double theta) {
  require_alpha(alpha);
  require_theta(alpha, theta);
  return ProfileLikelihood(s).log_lik(alpha) + log_rising_factorial(theta / alpha + 1.0, s.k() - 1) -
         log_rising_factorial(theta + 1.0, s.n() - 1);
}

double joint_theta_score(const SampleSummary& s, double alpha, double theta) {
  require_alpha(alpha);
  require_theta(alpha, theta);
  return sum_inv(theta / alpha + 1.0, s.k() - 1) / alpha - sum_inv(theta + 1.0, s.n() - 1);
}

double theta_mle_given_alpha(const SampleSummary& s, double alpha) {
  require_alpha(alpha);
  auto score = [&](double t) { return joint_theta_score(s, alpha, t); };
  const double lo = -alpha * (1.0 - 1e-12);
  double hi = 1.0;
  int it = 0;
  while (score(hi) > 0 && it < 60) {
    hi *= 2.0;
    ++it;
  }
  if (score(hi) > 0) {
    // no sign change: fall back to golden section on log(theta + alpha)
    auto f = [&](double u) { return log_lik_joint(s, alpha, std::exp(u) - alpha); };
    const double u = golden_max(f, std::log(alpha * 1e-12), std::log(hi + alpha), 1e-10);
    return std::exp(u) - alpha;
  }
  return bisect_decreasing(score, lo, hi, 1e-12);
}

double L_from_theta_star(double theta, double alpha) {
  require_alpha(alpha);
  require_theta(alpha, theta);
  return std::exp(digamma(theta / alpha + 1.0) - alpha * digamma(theta + 1.0) - log_gamma(1.0 - alpha));
}

double theta_star_from_L(double L, double alpha) {
  require_alpha(alpha);
  if (!(L > 0) || !std::isfinite(L)) throw DomainError("L must be positive");
  const double target = std::log(L) + log_gamma(1.0 - alpha);
  // h(theta) = psi(theta/alpha+1) - alpha psi(theta+1) increases from -inf
  auto f = [&](double t) { return target - (digamma(t / alpha + 1.0) - alpha * digamma(t + 1.0)); };
  const double lo = -alpha * (1.0 - 1e-15);
  if (f(lo) < 0) return lo;
  double hi = 1.0;
  for (int it = 0; f(hi) > 0; ++it) {
    if (it > 1000) throw NumericalError("theta_star: no sign change");
    hi *= 2.0;
  }
  return bisect_decreasing(f, lo, hi, 1e-13);
}

TailFunctionals tail_functionals(const SampleSummary& s, double alpha_hat) {
  require_alpha(alpha_hat);
  const double k = static_cast<double>(s.k());
  const double n = static_cast<double>(s.n());
  const double L = std::exp(std::log(k) - log_gamma(1.0 - alpha_hat) - alpha_hat * std::log(n));
  return {L, theta_star_from_L(L, alpha_hat)};
}

double hstar_log_weight(double z, double L, double alpha_star) {
  require_alpha(alpha_star);
  if (!(z > 0) || !(L > 0)) throw DomainError("hstar_log_weight: need z > 0 and L > 0");
  return (z / alpha_star) * (std::log(L) + log_gamma(1.0 - alpha_star)) + log_gamma(1.0 - alpha_star + z) -
         log_gamma(z / alpha_star);
}

double Prior::log_density(double x) const {
  switch (kind) {
    case Kind::uniform: return (x > 0 && x < 1) ? 0.0 : neg_inf;
    case Kind::beta:
      if (!(x > 0 && x < 1)) return neg_inf;
      return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b);
    case Kind::exponential: return x > 0 ? std::log(a) - a * x : neg_inf;
    case Kind::gamma:
      if (!(x > 0)) return neg_inf;
      return a * std::log(b) - log_gamma(a) + (a - 1.0) * std::log(x) - b * x;
    case Kind::flat: return x > 0 ? 0.0 : neg_inf;
  }
  return neg_inf;
}

std::string Prior::describe() const {
  std::ostringstream o;
  o.precision(12);
  switch (kind) {
    case Kind::uniform: return "uniform";
    case Kind::beta: o << "beta:" << a << "," << b; break;
    case Kind::exponential: o << "exp:" << a; break;
    case Kind::gamma: o << "gamma:" << a << "," << b; break;
    case Kind::flat: return "flat";
  }
  return o.str();
}

Prior parse_alpha_prior(std::string_view spec) {
  if (spec == "uniform") return {Prior::Kind::uniform, 1.0, 1.0};
  if (spec.starts_with("beta:")) {
    const auto v = split_numbers(spec.substr(5), 2, spec);
    return {Prior::Kind::beta, v[0], v[1]};
  }
  throw ParseError("unknown alpha prior '" + std::string(spec) + "' (expected uniform | beta:a,b)", 0);
}

Prior parse_gamma_prior(std::string_view spec) {
  if (spec == "flat") return {Prior::Kind::flat, 1.0, 1.0};
  if (spec.starts_with("exp:")) {
    const auto v = split_numbers(spec.substr(4), 1, spec);
    return {Prior::Kind::exponential, v[0], 1.0};
  }
  if (spec.starts_with("gamma:")) {
    const auto v = split_numbers(spec.substr(6), 2, spec);
    return {Prior::Kind::gamma, v[0], v[1]};
  }
  throw ParseError("unknown gamma prior '" + std::string(spec) + "' (expected exp:rate | gamma:shape,rate | flat)", 0);
}

std::vector<double> GridPosterior::alpha_marginal() const {
  const std::size_t ng = gamma_grid.size();
  std::vector<double> out(alpha_grid.size(), 0.0);
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    long double s = 0;
    for (std::size_t j = 0; j < ng; ++j) s += std::exp(static_cast<long double>(log_post[i * ng + j]));
    out[i] = static_cast<double>(s);
  }
  return out;
}

std::vector<double> GridPosterior::gamma_marginal() const {
  const std::size_t ng = gamma_grid.size();
  std::vector<long double> acc(ng, 0.0L);
  for (std::size_t i = 0; i < alpha_grid.size(); ++i)
    for (std::size_t j = 0; j < ng; ++j) acc[j] += std::exp(static_cast<long double>(log_post[i * ng + j]));
  return {acc.begin(), acc.end()};
}

MarginalSummary GridPosterior::alpha_summary() const { return summarize(alpha_grid, alpha_marginal()); }

MarginalSummary GridPosterior::gamma_summary() const { return summarize(gamma_grid, gamma_marginal()); }

MarginalSummary GridPosterior::theta_summary() const {
  // theta = gamma - alpha; mean and sd from the joint grid
  const std::size_t ng = gamma_grid.size();
  std::vector<std::pair<double, double>> pts;
  pts.reserve(log_post.size());
  for (std::size_t i = 0; i < alpha_grid.size(); ++i)
    for (std::size_t j = 0; j < ng; ++j)
      pts.emplace_back(gamma_grid[j] - alpha_grid[i], std::exp(log_post[i * ng + j]));
  std::sort(pts.begin(), pts.end());
  std::vector<double> g, w;
  g.reserve(pts.size());
  w.reserve(pts.size());
  for (const auto& [x, p] : pts) {
    g.push_back(x);
    w.push_back(p);
  }
  return summarize(g, w);
}

GridPosterior hierarchical_posterior(const SampleSummary& s, const Prior& prior_alpha, const Prior& prior_gamma,
                                     const GridOptions& opt) {
  if (opt.alpha_points < 2 || opt.gamma_points < 2) throw DomainError("grid sizes must be >= 2");
  if (!(opt.gamma_max > 0)) throw DomainError("gamma_max must be positive");
  GridPosterior gp;
  gp.prior_alpha = prior_alpha;
  gp.prior_gamma = prior_gamma;

  double a_lo = 0.0, a_hi = 1.0;
  if (opt.alpha_window_sd > 0 && s.k() > 1 && s.k() < s.n()) {
    const double a0 = mle_alpha(s);
    const double half = opt.alpha_window_sd / std::sqrt(observed_info(s, a0));
    a_lo = std::max(0.0, a0 - half);
    a_hi = std::min(1.0, a0 + half);
  }
  const int na = opt.alpha_points, ng = opt.gamma_points;
  for (int i = 0; i < na; ++i) gp.alpha_grid.push_back(a_lo + (a_hi - a_lo) * (i + 0.5) / na);
  for (int j = 0; j < ng; ++j) gp.gamma_grid.push_back(opt.gamma_max * (j + 0.5) / ng);
  gp.log_post.assign(static_cast<std::size_t>(na) * ng, neg_inf);

  const ProfileLikelihood pl(s);
  const double k = static_cast<double>(s.k());
  const double n = static_cast<double>(s.n());
  auto row = [&](int i) {
    const double a = gp.alpha_grid[i];
    const double base = pl.log_lik(a) + prior_alpha.log_density(a);
    for (int j = 0; j < ng; ++j) {
      const double g = gp.gamma_grid[j];
      const double t = g - a;
      const double ll = base + log_gamma(t / a + k) - log_gamma(t / a + 1.0) + log_gamma(t + 1.0) -
                        log_gamma(t + n);
      gp.log_post[static_cast<std::size_t>(i) * ng + j] = ll + prior_gamma.log_density(g);
    }
  };
  const int threads = std::max(1, opt.threads);
  if (threads == 1) {
    for (int i = 0; i < na; ++i) row(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < na; i += threads) row(i);
      });
    for (auto& th : pool) th.join();
  }
  const double z = log_sum_exp(gp.log_post);
  if (!std::isfinite(z)) throw NumericalError("hierarchical posterior: every grid cell has zero mass");
  for (auto& v : gp.log_post) v -= z;
  return gp;
}

std::vector<double> hstar_on_grid(const std::vector<double>& gamma_grid, double L, double alpha_star,
                                  const Prior& prior_gamma) {
  std::vector<double> lw(gamma_grid.size());
  for (std::size_t j = 0; j < gamma_grid.size(); ++j)
    lw[j] = hstar_log_weight(gamma_grid[j], L, alpha_star) + prior_gamma.log_density(gamma_grid[j]);
  const double z = log_sum_exp(lw);
  std::vector<double> out(lw.size());
  for (std::size_t j = 0; j < lw.size(); ++j) out[j] = std::exp(lw[j] - z);
  return out;
}

namespace {

void fill_common(FitReport& r, const SampleSummary& s) {
  r.alpha_profile = mle_alpha(s);
  r.observed_info = observed_info(s, r.alpha_profile);
  r.theta_aux = aux_theta(s, r.alpha_profile);
}

}  // namespace

FitReport fit_profile(const SampleSummary& s) {
  FitReport r;
  r.method = "profile-mle";
  fill_common(r, s);
  r.alpha_hat = r.alpha_profile;
  r.theta_hat = r.theta_aux;
  r.log_lik_at_max = log_lik_joint(s, r.alpha_hat, r.theta_hat);
  const auto tf = tail_functionals(s, r.alpha_hat);
  r.L_hat = tf.L_hat;
  r.theta_star = tf.theta_star;
  r.gamma_hat = r.theta_hat + r.alpha_hat;
  return r;
}

FitReport mle_joint(const SampleSummary& s) {
  FitReport r;
  r.method = "joint-mle";
  fill_common(r, s);
  auto prof = [&](double a) { return log_lik_joint(s, a, theta_mle_given_alpha(s, a)); };
  // coarse scan around the profile maximizer, then golden section
  const double eps = 1e-6;
  const double lo = std::max(eps, r.alpha_profile - 0.25);
  const double hi = std::min(1.0 - eps, r.alpha_profile + 0.25);
  const int pts = 41;
  int best = 0;
  double best_v = neg_inf;
  for (int i = 0; i < pts; ++i) {
    const double a = lo + (hi - lo) * i / (pts - 1);
    const double v = prof(a);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double step = (hi - lo) / (pts - 1);
  const double glo = std::max(lo, lo + (best - 1) * step);
  const double ghi = std::min(hi, lo + (best + 1) * step);
  double a = golden_max(prof, glo, ghi, 1e-8);
  if (prof(r.alpha_profile) > prof(a)) a = r.alpha_profile;
  r.alpha_hat = a;
  r.theta_hat = theta_mle_given_alpha(s, a);
  r.log_lik_at_max = log_lik_joint(s, a, r.theta_hat);
  const auto tf = tail_functionals(s, r.alpha_hat);
  r.L_hat = tf.L_hat;
  r.theta_star = tf.theta_star;
  r.gamma_hat = r.theta_hat + r.alpha_hat;
  r.alpha_gap = std::fabs(r.alpha_hat - r.alpha_profile);
  return r;
}

FitReport fit_hierarchical(const SampleSummary& s, const Prior& prior_alpha, const Prior& prior_gamma,
                           const GridOptions& opt) {
  FitReport r;
  r.method = "hierarchical";
  fill_common(r, s);
  auto gp = hierarchical_posterior(s, prior_alpha, prior_gamma, opt);
  const auto am = gp.alpha_summary();
  const auto tm = gp.theta_summary();
  r.alpha_hat = am.mean;
  r.theta_hat = tm.mean;
  r.gamma_hat = gp.gamma_summary().mean;
  r.log_lik_at_max = log_lik_joint(s, r.alpha_hat, std::max(r.theta_hat, -r.alpha_hat * (1 - 1e-9)));
  const auto tf = tail_functionals(s, r.alpha_profile);
  r.L_hat = tf.L_hat;
  r.theta_star = tf.theta_star;
  r.alpha_gap = std::fabs(r.alpha_hat - r.alpha_profile);
  r.grid = std::move(gp);
  return r;
}

}  // namespace pyspecies::fit
