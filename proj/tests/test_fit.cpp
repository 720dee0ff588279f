#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pyspecies/errors.hpp"
#include "pyspecies/fit.hpp"
#include "pyspecies/pyp.hpp"

using namespace pyspecies;

namespace {
SampleSummary three() { return SampleSummary::from_fingerprint({{1, 1}, {2, 1}}); }

SampleSummary simulate(double a, double th, std::int64_t n, std::uint64_t seed) {
  RngStream r(seed);
  return SampleSummary::from_frequencies(sample_partition({a, th}, n, r).block_sizes);
}
}  // namespace

TEST_CASE("profile likelihood examples") {
  for (double a : {0.1, 0.5, 0.8})
    CHECK(fit::log_lik_profile(three(), a) == doctest::Approx(std::log(a) + std::log(1 - a)));
  auto singles = SampleSummary::from_fingerprint({{1, 6}});
  CHECK(fit::log_lik_profile(singles, 0.3) == doctest::Approx(5 * std::log(0.3)));
  auto one = SampleSummary::from_fingerprint({{6, 1}});
  double expect = 0;
  for (int i = 1; i < 6; ++i) expect += std::log(i - 0.3);
  CHECK(fit::log_lik_profile(one, 0.3) == doctest::Approx(expect));
  CHECK_THROWS_AS(fit::log_lik_profile(three(), 1.0), DomainError);
  CHECK_THROWS_AS(fit::log_lik_profile(three(), 0.0), DomainError);
}

TEST_CASE("profile likelihood against brute force, scores by finite differences") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<int> K(2, 30), F(1, 200);
    std::vector<std::int64_t> sizes(K(gen));
    for (auto& x : sizes) x = F(gen);
    sizes[0] = 1;
    auto s = SampleSummary::from_frequencies(sizes);
    fit::ProfileLikelihood pl(s);
    for (double a : {0.05, 0.3, 0.5, 0.77, 0.95}) {
      CHECK(pl.log_lik(a) == doctest::Approx(static_cast<double>(oracle::profile_loglik(sizes, a))).epsilon(1e-12));
      CHECK(pl.score(a) == doctest::Approx(static_cast<double>(oracle::profile_score(sizes, a))).epsilon(1e-10));
      // five-point central stencils
      const double h = 1e-4;
      auto f = [&](double d) { return pl.log_lik(a + d * h); };
      const double fd1 = (-f(2) + 8 * f(1) - 8 * f(-1) + f(-2)) / (12 * h);
      CHECK(std::fabs(fd1 - pl.score(a)) <= 1e-6 * std::max(1.0, std::fabs(pl.score(a))));
      const double fd2 = static_cast<double>(-oracle::profile_second_difference(sizes, a, h));
      CHECK(std::fabs(fd2 - pl.observed_info(a)) <= 1e-6 * pl.observed_info(a));
      CHECK(pl.observed_info(a) > 0);
    }
  }
}

TEST_CASE("mle_alpha") {
  CHECK(fit::mle_alpha(three()) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit::observed_info(three(), 0.5) == doctest::Approx(8.0));
  CHECK_THROWS_AS(fit::mle_alpha(SampleSummary::from_fingerprint({{1, 10}})), PathologyError);
  CHECK_THROWS_AS(fit::mle_alpha(SampleSummary::from_fingerprint({{10, 1}})), PathologyError);
  try {
    fit::mle_alpha(SampleSummary::from_fingerprint({{1, 10}}));
  } catch (const PathologyError& e) {
    CHECK(std::string(e.what()).find("K_n = n") != std::string::npos);
  }
  auto s = simulate(0.5, 1.0, 20000, 4);
  const double a = fit::mle_alpha(s);
  fit::ProfileLikelihood pl(s);
  CHECK(std::fabs(pl.score(a)) <= 1e-9);
  CHECK(pl.observed_info(a) > 0);
  CHECK(std::fabs(a - 0.5) < 0.1);
}

TEST_CASE("joint likelihood equals the EPPF") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> U(0, 1);
  for (int n = 1; n <= 8; ++n) {
    const double a = 0.02 + 0.96 * U(gen);
    const double th = -a + 0.01 + 4 * U(gen);
    oracle::for_each_set_partition(n, [&](const std::vector<std::int64_t>& sizes) {
      auto s = SampleSummary::from_frequencies(sizes);
      CHECK(std::fabs(fit::log_lik_joint(s, a, th) - eppf_log({a, th}, sizes)) < 1e-10);
      CHECK(std::fabs(fit::log_lik_joint(s, a, th) - static_cast<double>(std::log(oracle::eppf(a, th, sizes)))) < 1e-10);
    });
  }
  CHECK_THROWS_AS(fit::log_lik_joint(three(), 0.5, -0.5), DomainError);
  auto s = SampleSummary::from_frequencies({9, 4, 4, 2, 1, 1, 1});
  for (double th : {-0.2, 0.0, 1.0, 7.0}) {
    const double h = 1e-5;
    const double fd = (fit::log_lik_joint(s, 0.4, th + h) - fit::log_lik_joint(s, 0.4, th - h)) / (2 * h);
    CHECK(std::fabs(fd - fit::joint_theta_score(s, 0.4, th)) < 1e-6);
  }
}

TEST_CASE("aux_theta") {
  // K = n^alpha: the score is positive at 0 and negative at 1
  auto s = SampleSummary::from_frequencies({86, 5, 2, 1, 1, 1, 1, 1, 1, 1});  // n = 100, K = 10
  CHECK(fit::aux_theta_score(s, 0.5, 0.0) == doctest::Approx(0.5772156649).epsilon(1e-8));
  CHECK(fit::aux_theta_score(s, 0.5, 1.0) < 0);
  const double t = fit::aux_theta(s, 0.5);
  CHECK(t > 0);
  CHECK(t < 1);
  CHECK(std::fabs(fit::aux_theta_score(s, 0.5, t)) <= 1e-9);
  double prev = INFINITY;
  for (std::int64_t n : {100, 200, 400, 800}) {
    std::vector<std::int64_t> f(9, 1);
    f.push_back(n - 9);
    const double v = fit::aux_theta(SampleSummary::from_frequencies(f), 0.5);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("tail functionals") {
  const double L0 = std::exp(-0.5772156649015329 / 2) / std::sqrt(M_PI);
  CHECK(L0 == doctest::Approx(0.422746).epsilon(1e-4));
  CHECK(std::fabs(fit::theta_star_from_L(L0, 0.5)) < 1e-9);
  double prev = -INFINITY;
  for (double L : {0.05, 0.2, 0.4227, 1.0, 3.0, 10.0}) {
    const double th = fit::theta_star_from_L(L, 0.5);
    CHECK(th > prev);
    prev = th;
    CHECK(fit::L_from_theta_star(th, 0.5) == doctest::Approx(L).epsilon(1e-9));
  }
  auto s = simulate(0.5, 1.0, 5000, 2);
  const double a = fit::mle_alpha(s);
  auto tf = fit::tail_functionals(s, a);
  CHECK(tf.L_hat == doctest::Approx(s.k() / (std::tgamma(1 - a) * std::pow(double(s.n()), a))));
  CHECK(fit::L_from_theta_star(tf.theta_star, a) == doctest::Approx(tf.L_hat).epsilon(1e-9));
  CHECK(tf.theta_star == doctest::Approx(fit::aux_theta(s, a)).epsilon(1e-7));
}

TEST_CASE("H_* weight") {
  CHECK(fit::hstar_log_weight(1e-12, 0.4, 0.5) < fit::hstar_log_weight(1e-3, 0.4, 0.5) - 10);
  std::vector<double> grid;
  for (int j = 1; j <= 200; ++j) grid.push_back(j * 0.1);
  auto a = fit::hstar_on_grid(grid, 0.4, 0.5, fit::Prior{fit::Prior::Kind::exponential, 1.0});
  auto b = fit::hstar_on_grid(grid, 0.4, 0.5, fit::Prior{fit::Prior::Kind::gamma, 1.0, 1.0});
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  double s = 0;
  for (double v : a) s += v;
  CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("priors") {
  auto u = fit::parse_alpha_prior("uniform");
  CHECK(u.kind == fit::Prior::Kind::uniform);
  CHECK(u.log_density(0.3) == 0.0);
  auto b = fit::parse_alpha_prior("beta:2,3");
  CHECK(b.kind == fit::Prior::Kind::beta);
  CHECK(std::exp(b.log_density(0.5)) == doctest::Approx(12 * 0.5 * 0.25));
  auto e = fit::parse_gamma_prior("exp:2");
  CHECK(std::exp(e.log_density(1.0)) == doctest::Approx(2 * std::exp(-2.0)));
  auto g = fit::parse_gamma_prior("gamma:2,1");
  CHECK(std::exp(g.log_density(1.0)) == doctest::Approx(std::exp(-1.0)));
  CHECK(fit::parse_gamma_prior("flat").kind == fit::Prior::Kind::flat);
  CHECK_THROWS_AS(fit::parse_alpha_prior("beta:2"), ParseError);
  CHECK_THROWS_AS(fit::parse_gamma_prior("exp:-1"), ParseError);
  CHECK_THROWS_AS(fit::parse_gamma_prior("lognormal"), ParseError);
}

TEST_CASE("joint MLE and hierarchical grid") {
  auto s = simulate(0.5, 1.0, 10000, 12);
  auto prof = fit::fit_profile(s);
  auto joint = fit::mle_joint(s);
  CHECK(joint.method == "joint-mle");
  CHECK(joint.alpha_gap == doctest::Approx(std::fabs(joint.alpha_hat - prof.alpha_hat)));
  CHECK(joint.alpha_gap < 10 * std::log(1e4) / std::pow(1e4, prof.alpha_hat));
  CHECK(joint.theta_hat > -joint.alpha_hat);
  CHECK(std::fabs(fit::joint_theta_score(s, joint.alpha_hat, joint.theta_hat)) < 1e-6);
  // the joint optimum beats nearby points
  for (double da : {-1e-3, 1e-3})
    for (double dt : {-1e-2, 0.0, 1e-2})
      CHECK(fit::log_lik_joint(s, joint.alpha_hat + da, joint.theta_hat + dt) <= joint.log_lik_at_max + 1e-9);

  fit::GridOptions opt;
  opt.alpha_points = 60;
  opt.gamma_points = 80;
  opt.threads = 3;
  auto hb = fit::hierarchical_posterior(s, fit::parse_alpha_prior("uniform"), fit::parse_gamma_prior("exp:1"), opt);
  double lse = -INFINITY;
  for (double v : hb.log_post) lse = std::max(lse, v);
  double acc = 0;
  for (double v : hb.log_post) acc += std::exp(v - lse);
  CHECK(lse + std::log(acc) == doctest::Approx(0.0).epsilon(1e-12));
  opt.threads = 1;
  auto hb1 = fit::hierarchical_posterior(s, fit::parse_alpha_prior("uniform"), fit::parse_gamma_prior("exp:1"), opt);
  CHECK(hb1.log_post == hb.log_post);
  CHECK(std::fabs(hb.alpha_summary().mean - prof.alpha_hat) < 0.05);

  // relabeling and reordering leave every fit output unchanged
  auto f = s.frequencies();
  std::reverse(f.begin(), f.end());
  auto r = SampleSummary::from_frequencies(f);
  CHECK(fit::mle_joint(r).alpha_hat == joint.alpha_hat);
  CHECK(fit::hierarchical_posterior(r, fit::parse_alpha_prior("uniform"), fit::parse_gamma_prior("exp:1"), opt)
            .log_post == hb1.log_post);
  CHECK_THROWS_AS(fit::fit_hierarchical(SampleSummary::from_fingerprint({{1, 5}}), fit::Prior{}, fit::Prior{}),
                  PathologyError);
}
