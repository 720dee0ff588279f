#include "pyspecies/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace pyspecies::report {

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json summary_json(const SampleSummary& s) {
  json fp = json::object();
  for (const auto& [r, m] : s.fingerprint()) fp[std::to_string(r)] = m;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s.fingerprint_hash()));
  return {{"n", s.n()}, {"k", s.k()}, {"fingerprint", fp}, {"fingerprint_hash", hash}};
}

json posterior_json(const DiscretePosterior& p) {
  json lp = json::array();
  for (double v : p.log_pmf) lp.push_back(number(v));
  return {{"support_min", 0},
          {"support_max", p.support_max()},
          {"log_pmf", lp},
          {"mean", number(p.mean)},
          {"provenance", to_string(p.provenance)},
          {"method", p.method}};
}

namespace {

json marginal_json(const fit::MarginalSummary& m) {
  return {{"mean", number(m.mean)},
          {"sd", number(m.sd)},
          {"q025", number(m.q025)},
          {"q500", number(m.q500)},
          {"q975", number(m.q975)}};
}

}  // namespace

json fit_json(const fit::FitReport& r) {
  json j = {{"method", r.method},
            {"alpha_hat", number(r.alpha_hat)},
            {"theta_hat", number(r.theta_hat)},
            {"gamma_hat", number(r.gamma_hat)},
            {"log_lik_at_max", number(r.log_lik_at_max)},
            {"observed_info", number(r.observed_info)},
            {"alpha_profile", number(r.alpha_profile)},
            {"theta_aux", number(r.theta_aux)},
            {"L_hat", number(r.L_hat)},
            {"theta_star", number(r.theta_star)},
            {"alpha_gap", number(r.alpha_gap)}};
  if (r.grid) {
    const auto& g = *r.grid;
    const auto a = g.alpha_summary();
    j["hierarchical"] = {
        {"prior_alpha", g.prior_alpha.describe()},
        {"prior_gamma", g.prior_gamma.describe()},
        {"alpha_points", g.alpha_grid.size()},
        {"gamma_points", g.gamma_grid.size()},
        {"alpha_range", {number(g.alpha_grid.front()), number(g.alpha_grid.back())}},
        {"gamma_range", {number(g.gamma_grid.front()), number(g.gamma_grid.back())}},
        {"alpha", marginal_json(a)},
        {"gamma", marginal_json(g.gamma_summary())},
        {"theta", marginal_json(g.theta_summary())},
        {"standardized_alpha_sd", number(a.sd * std::sqrt(r.observed_info))}};
  }
  return j;
}

json envelope(const std::string& command, const SampleSummary* s) {
  json j = {{"schema_version", schema_version}, {"command", command}};
  j["inputs"] = s ? summary_json(*s) : json(nullptr);
  j["diagnostics"] = json::object();
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace pyspecies::report
