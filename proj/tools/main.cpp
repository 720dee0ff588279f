// pyspecies: species-sampling inference under the Pitman-Yor prior.
//
// Exit codes: 0 ok, 2 parse/usage, 3 model pathology, 4 size guard,
// 5 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "pyspecies/coverage.hpp"
#include "pyspecies/data.hpp"
#include "pyspecies/errors.hpp"
#include "pyspecies/fit.hpp"
#include "pyspecies/prevalence.hpp"
#include "pyspecies/report.hpp"
#include "pyspecies/unseen.hpp"

namespace {

using namespace pyspecies;
using report::json;
using report::number;

enum ExitCode { ok = 0, parse_error = 2, pathology = 3, size_guard = 4, numerical = 5 };

struct Common {
  std::string output;
  int threads = 1;
};

struct InputArgs {
  std::string path;
  std::string format = "labels";
};

void add_input(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("input", in.path, "Input file")->required();
  cmd->add_option("--format", in.format, "labels | counts | fingerprint")
      ->check(CLI::IsMember({"labels", "counts", "fingerprint"}));
}

SampleSummary load(const InputArgs& in) {
  return read_sample_file(in.path, parse_input_format(in.format));
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw ParseError("cannot write output file '" + c.output + "'", 0);
  out << text;
}

// ---- summarize ----

json run_summarize(const InputArgs& in) {
  const auto s = load(in);
  json j = report::envelope("summarize", &s);
  j["n"] = s.n();
  j["k"] = s.k();
  j["fingerprint"] = j["inputs"]["fingerprint"];
  return j;
}

// ---- fit ----

struct FitArgs {
  InputArgs in;
  std::string method = "mle";
  std::string prior_alpha = "uniform";
  std::string prior_gamma = "exp:1";
  int alpha_grid = 400;
  int gamma_grid = 400;
  double gamma_max = 20.0;
};

json run_fit(const FitArgs& a, const Common& c) {
  const auto s = load(a.in);
  json j = report::envelope("fit", &s);
  fit::FitReport r;
  if (a.method == "mle") {
    r = fit::fit_profile(s);
  } else if (a.method == "joint") {
    r = fit::mle_joint(s);
  } else {
    fit::GridOptions opt;
    opt.alpha_points = a.alpha_grid;
    opt.gamma_points = a.gamma_grid;
    opt.gamma_max = a.gamma_max;
    opt.threads = c.threads;
    r = fit::fit_hierarchical(s, fit::parse_alpha_prior(a.prior_alpha), fit::parse_gamma_prior(a.prior_gamma), opt);
  }
  j["fit"] = report::fit_json(r);
  j["params"] = {{"alpha", number(r.alpha_hat)}, {"theta", number(r.theta_hat)}, {"fit_method", r.method}};
  const double n = static_cast<double>(s.n());
  j["diagnostics"]["alpha_gap_rate_bound"] = number(10.0 * std::log(n) / std::pow(n, r.alpha_profile));
  return j;
}

// ---- estimate ----

struct EstimateArgs {
  InputArgs in;
  std::string target;
  std::int64_t r = -1;
  std::int64_t m = 1;
  std::optional<double> alpha, theta;
  std::string fit_method;
  std::string method = "exact";
  std::int64_t mc_samples = 100000;
  std::uint64_t seed = 1;
  double level = 0.95;
};

PypParams resolve_params(const EstimateArgs& a, const SampleSummary& s, json& j) {
  PypParams p;
  if (!a.fit_method.empty()) {
    const auto r = a.fit_method == "joint" ? fit::mle_joint(s) : fit::fit_profile(s);
    p = {r.alpha_hat, r.theta_hat};
    j["params"] = {{"alpha", number(p.alpha)}, {"theta", number(p.theta)}, {"fit_method", r.method}};
    j["fit"] = report::fit_json(r);
  } else {
    if (!a.alpha || !a.theta) throw ParseError("give --alpha and --theta, or --fit", 0);
    p = {*a.alpha, *a.theta};
    j["params"] = {{"alpha", number(p.alpha)}, {"theta", number(p.theta)}, {"fit_method", "given"}};
  }
  p.validate();
  return p;
}

void put_discrete(json& j, const DiscretePosterior& post, double level) {
  const auto [lo, hi] = post.credible_interval(level);
  j["estimate"] = number(post.mean);
  j["ci"] = {{"lo", lo}, {"hi", hi}, {"level", number(level)}};
  j["posterior"] = report::posterior_json(post);
}

void put_frequentist(json& j, const unseen::FrequentistEstimate& e, const char* name) {
  j["estimate"] = number(e.value);
  j["ci"] = nullptr;
  j["diagnostics"]["estimator"] = name;
  j["diagnostics"]["lambda"] = number(e.lambda);
  j["diagnostics"]["lambda_ge_one"] = e.lambda_ge_one;
}

json run_estimate(const EstimateArgs& a, const Common& c) {
  const auto s = load(a.in);
  json j = report::envelope("estimate", &s);
  j["target"] = a.target;
  j["method"] = a.method;
  j["m"] = a.m;
  j["r"] = a.r < 0 ? json(nullptr) : json(a.r);
  j["estimate"] = nullptr;
  j["ci"] = nullptr;
  j["posterior"] = nullptr;
  if (!(a.level > 0 && a.level < 1)) throw ParseError("--level must lie in (0,1)", 0);
  const McOptions mc{a.mc_samples, a.seed, c.threads};
  const bool stochastic = a.method == "mc";

  if (a.method == "gt") {
    if (a.target == "coverage") {
      const std::int64_t r = std::max<std::int64_t>(a.r, 0);
      j["estimate"] = number(coverage::good_turing(s, r));
      j["diagnostics"]["estimator"] = "good-turing";
      j["diagnostics"]["zero_next_count"] = s.m(r + 1) == 0;
    } else if (a.target == "unseen") {
      if (a.r >= 1)
        put_frequentist(j, unseen::good_toulmin_order_r(s, a.m, a.r), "good-toulmin-order-r");
      else
        put_frequentist(j, unseen::good_toulmin(s, a.m), "good-toulmin");
    } else {
      if (a.r < 1) throw ParseError("--target prevalence needs --r >= 1", 0);
      put_frequentist(j, prevalence::thisted_efron(s, a.m, a.r), "thisted-efron");
    }
    return j;
  }

  const auto p = resolve_params(a, s, j);
  if (a.target == "coverage") {
    if (a.method != "exact") throw ParseError("coverage supports --method exact or gt", 0);
    const std::int64_t r = std::max<std::int64_t>(a.r, 0);
    const auto post = coverage::posterior(p, s, r);
    const auto ci = coverage::credible_interval(post, a.level);
    j["estimate"] = number(coverage::estimate(p, s, r));
    j["ci"] = {{"lo", number(ci.first)}, {"hi", number(ci.second)}, {"level", number(a.level)}};
    j["beta_posterior"] = {{"shape1", number(post.shape1)},
                           {"shape2", number(post.shape2)},
                           {"point_mass_at_zero", post.point_mass_at_zero}};
    j["diagnostics"]["good_turing"] = number(coverage::good_turing(s, r));
    if (p.alpha > 0) {
      const auto cmp = coverage::compare_smoothed(p, s, r);
      j["diagnostics"]["smoothed_good_turing"] = number(cmp.smoothed_good_turing);
      j["diagnostics"]["smoothed_relative_gap"] = number(cmp.relative_gap);
    }
  } else if (a.target == "unseen") {
    if (a.r >= 1) {
      if (a.method != "mc")
        throw ParseError("the order-r unseen posterior is only available with --method mc", 0);
      put_discrete(j, unseen::posterior_mc_order_r(p, s, a.m, a.r, mc), a.level);
      j["diagnostics"]["closed_form_mean"] = number(unseen::estimator_order_r(p, s, a.m, a.r));
    } else {
      if (a.method == "exact")
        put_discrete(j, unseen::posterior_exact(p, s, a.m), a.level);
      else if (a.method == "mc")
        put_discrete(j, unseen::posterior_mc(p, s, a.m, mc), a.level);
      else
        throw ParseError("unseen supports --method exact, mc or gt", 0);
      j["diagnostics"]["closed_form_mean"] = number(unseen::estimator(p, s, a.m));
      const double md = static_cast<double>(a.m);
      j["diagnostics"]["growth_ratio"] =
          number(p.alpha > 0 ? unseen::estimator(p, s, a.m) / std::pow(md, p.alpha)
                             : unseen::estimator(p, s, a.m) / std::log(std::max(md, 2.0)));
    }
  } else {
    if (a.r < 1) throw ParseError("--target prevalence needs --r >= 1", 0);
    if (a.method == "exact")
      put_discrete(j, prevalence::posterior_exact(p, s, a.m, a.r), a.level);
    else if (a.method == "mc")
      put_discrete(j, prevalence::posterior_mc(p, s, a.m, a.r, mc), a.level);
    else if (a.method == "approx")
      put_discrete(j, prevalence::posterior_binomial_approx(p, s, a.m, a.r), a.level);
    j["diagnostics"]["closed_form_mean"] = number(prevalence::estimator(p, s, a.m, a.r));
  }
  if (stochastic) {
    j["seed"] = a.seed;
    j["replicates"] = a.mc_samples;
  }
  return j;
}

// ---- simulate ----

struct SimulateArgs {
  double alpha = 0.5;
  double theta = 1.0;
  std::int64_t n = 1000;
  std::uint64_t seed = 1;
  std::string emit = "labels";
};

std::string run_simulate(const SimulateArgs& a) {
  const PypParams p{a.alpha, a.theta};
  RngStream rng(a.seed, 0);
  const auto seq = sample_sequence(p, a.n, rng);
  std::ostringstream out;
  if (a.emit == "labels") {
    for (auto v : seq) out << 's' << v << '\n';
  } else {
    std::vector<std::int64_t> sizes;
    for (auto v : seq) {
      if (v >= sizes.size()) sizes.resize(v + 1, 0);
      ++sizes[v];
    }
    const auto s = SampleSummary::from_frequencies(sizes);
    out << "r,m_r\n";
    for (const auto& [r, m] : s.fingerprint()) out << r << ',' << m << '\n';
  }
  return out.str();
}

int exit_for(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian nonparametric species-sampling inference under the Pitman-Yor prior"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--output,-o", common.output, "Write the result here instead of stdout");
  app.add_option("--threads", common.threads, "Worker threads for Monte Carlo and grids")
      ->check(CLI::Range(1, 256));

  InputArgs sum_in;
  auto* sum = app.add_subcommand("summarize", "Reduce a sample to n, k and its fingerprint");
  add_input(sum, sum_in);

  FitArgs fa;
  auto* fitc = app.add_subcommand("fit", "Estimate the prior parameters (alpha, theta)");
  add_input(fitc, fa.in);
  fitc->add_option("--method", fa.method, "mle | joint | hb")->check(CLI::IsMember({"mle", "joint", "hb"}));
  fitc->add_option("--prior-alpha", fa.prior_alpha, "uniform | beta:a,b");
  fitc->add_option("--prior-gamma", fa.prior_gamma, "exp:rate | gamma:shape,rate | flat");
  fitc->add_option("--alpha-grid", fa.alpha_grid, "Alpha grid points (hb)")->check(CLI::Range(2, 100000));
  fitc->add_option("--gamma-grid", fa.gamma_grid, "Gamma grid points (hb)")->check(CLI::Range(2, 100000));
  fitc->add_option("--gamma-max", fa.gamma_max, "Upper end of the gamma grid (hb)")->check(CLI::PositiveNumber);

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Estimate a species-sampling functional");
  add_input(est, ea.in);
  est->add_option("--target", ea.target, "coverage | unseen | prevalence")
      ->required()
      ->check(CLI::IsMember({"coverage", "unseen", "prevalence"}));
  est->add_option("--r", ea.r, "Frequency order r")->check(CLI::NonNegativeNumber);
  est->add_option("--m", ea.m, "Size of the additional sample")->check(CLI::PositiveNumber);
  est->add_option("--alpha", ea.alpha, "Discount parameter");
  est->add_option("--theta", ea.theta, "Scale parameter");
  est->add_option("--fit", ea.fit_method, "Plug in a fitted (alpha, theta): mle | joint")
      ->check(CLI::IsMember({"mle", "joint"}))
      ->expected(0, 1)
      ->default_str("mle");
  est->add_option("--method", ea.method, "exact | mc | approx | gt")
      ->check(CLI::IsMember({"exact", "mc", "approx", "gt"}));
  est->add_option("--mc-samples", ea.mc_samples, "Monte Carlo replicates")->check(CLI::PositiveNumber);
  est->add_option("--seed", ea.seed, "Random seed");
  est->add_option("--level", ea.level, "Credible level");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Draw a synthetic sample from the Pitman-Yor urn");
  sim->add_option("--alpha", sa.alpha, "Discount parameter");
  sim->add_option("--theta", sa.theta, "Scale parameter");
  sim->add_option("--n", sa.n, "Sample size")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sa.seed, "Random seed");
  sim->add_option("--emit", sa.emit, "labels | fingerprint")->check(CLI::IsMember({"labels", "fingerprint"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parse_error;
  }

  try {
    if (est->count("--fit") > 0 && ea.fit_method.empty()) ea.fit_method = "mle";
    if (*sum) emit(common, report::dump(run_summarize(sum_in)));
    if (*fitc) emit(common, report::dump(run_fit(fa, common)));
    if (*est) emit(common, report::dump(run_estimate(ea, common)));
    if (*sim) emit(common, run_simulate(sa));
  } catch (const ParseError& e) {
    return exit_for(e, parse_error);
  } catch (const PathologyError& e) {
    return exit_for(e, pathology);
  } catch (const SizeGuardError& e) {
    return exit_for(e, size_guard);
  } catch (const NumericalError& e) {
    return exit_for(e, numerical);
  } catch (const DomainError& e) {
    return exit_for(e, parse_error);
  } catch (const std::exception& e) {
    return exit_for(e, numerical);
  }
  return ok;
}
