#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pyspecies/coverage.hpp"
#include "pyspecies/data.hpp"
#include "pyspecies/errors.hpp"
#include "pyspecies/fit.hpp"
#include "pyspecies/prevalence.hpp"
#include "pyspecies/pyp.hpp"
#include "pyspecies/unseen.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace pyspecies;

namespace {

McOptions mc_options(std::int64_t replicates, std::uint64_t seed, int threads) {
  return McOptions{replicates, seed, threads};
}

prevalence::McPath mc_path(const std::string& name) {
  if (name == "auto") return prevalence::McPath::automatic;
  if (name == "compound") return prevalence::McPath::compound;
  if (name == "forward-urn") return prevalence::McPath::forward_urn;
  throw DomainError("path must be auto, compound or forward-urn");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Species-sampling inference under the Pitman-Yor prior";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<PathologyError>(m, "PathologyError", base.ptr());
  py::register_exception<SizeGuardError>(m, "SizeGuardError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<PypParams>(m, "PypParams")
      .def(py::init([](double alpha, double theta) {
             PypParams p{alpha, theta};
             p.validate();
             return p;
           }),
           "alpha"_a, "theta"_a)
      .def_readonly("alpha", &PypParams::alpha)
      .def_readonly("theta", &PypParams::theta)
      .def("__repr__", [](const PypParams& p) {
        return "PypParams(alpha=" + py::repr(py::float_(p.alpha)).cast<std::string>() +
               ", theta=" + py::repr(py::float_(p.theta)).cast<std::string>() + ")";
      });

  py::class_<SampleSummary>(m, "SampleSummary")
      .def_static("from_labels", &SampleSummary::from_labels, "labels"_a)
      .def_static("from_frequencies", &SampleSummary::from_frequencies, "frequencies"_a)
      .def_static("from_fingerprint", &SampleSummary::from_fingerprint, "pairs"_a)
      .def_static("from_file",
                  [](const std::string& path, const std::string& format) {
                    return read_sample_file(path, parse_input_format(format));
                  },
                  "path"_a, "format"_a = "labels")
      .def_property_readonly("n", &SampleSummary::n)
      .def_property_readonly("k", &SampleSummary::k)
      .def_property_readonly("fingerprint", &SampleSummary::fingerprint)
      .def_property_readonly("frequencies", &SampleSummary::frequencies)
      .def("m", &SampleSummary::m, "r"_a)
      .def("__repr__", [](const SampleSummary& s) {
        return "SampleSummary(n=" + std::to_string(s.n()) + ", k=" + std::to_string(s.k()) + ")";
      });

  py::class_<DiscretePosterior>(m, "DiscretePosterior")
      .def_readonly("log_pmf", &DiscretePosterior::log_pmf)
      .def_readonly("mean", &DiscretePosterior::mean)
      .def_readonly("method", &DiscretePosterior::method)
      .def_property_readonly("provenance", [](const DiscretePosterior& p) { return to_string(p.provenance); })
      .def_property_readonly("pmf", &DiscretePosterior::pmf)
      .def("credible_interval", &DiscretePosterior::credible_interval, "level"_a = 0.95);

  m.def(
      "eppf_log",
      [](const PypParams& p, const std::vector<std::int64_t>& sizes) { return eppf_log(p, sizes); },
      "params"_a, "block_sizes"_a);
  m.def("epsf_log", &epsf_log, "params"_a, "fingerprint"_a, "n"_a);
  m.def("k_n_log_pmf", &k_n_log_pmf, "params"_a, "n"_a, "k"_a);
  m.def(
      "sample_partition",
      [](const PypParams& p, std::int64_t n, std::uint64_t seed) {
        RngStream rng(seed, 0);
        return sample_partition(p, n, rng).block_sizes;
      },
      "params"_a, "n"_a, "seed"_a = 1, "Block sizes of a PYP partition of n items, in arrival order.");

  auto cov = m.def_submodule("coverage");
  py::class_<coverage::BetaPosterior>(cov, "BetaPosterior")
      .def_readonly("shape1", &coverage::BetaPosterior::shape1)
      .def_readonly("shape2", &coverage::BetaPosterior::shape2)
      .def_readonly("point_mass_at_zero", &coverage::BetaPosterior::point_mass_at_zero)
      .def_property_readonly("mean", &coverage::BetaPosterior::mean);
  cov.def("good_turing", &coverage::good_turing, "summary"_a, "r"_a);
  cov.def("posterior", &coverage::posterior, "params"_a, "summary"_a, "r"_a);
  cov.def("estimate", &coverage::estimate, "params"_a, "summary"_a, "r"_a);
  cov.def("credible_interval", &coverage::credible_interval, "posterior"_a, "level"_a = 0.95);
  cov.def("smoothed_count", &coverage::smoothed_count, "params"_a, "k"_a, "r"_a);

  auto uns = m.def_submodule("unseen");
  uns.def("good_toulmin", [](const SampleSummary& s, std::int64_t mm) { return unseen::good_toulmin(s, mm).value; },
          "summary"_a, "m"_a);
  uns.def("good_toulmin_order_r",
          [](const SampleSummary& s, std::int64_t mm, std::int64_t r) {
            return unseen::good_toulmin_order_r(s, mm, r).value;
          },
          "summary"_a, "m"_a, "r"_a);
  uns.def("posterior_exact", &unseen::posterior_exact, "params"_a, "summary"_a, "m"_a);
  uns.def("estimator", &unseen::estimator, "params"_a, "summary"_a, "m"_a);
  uns.def("estimator_order_r", &unseen::estimator_order_r, "params"_a, "summary"_a, "m"_a, "r"_a);
  uns.def(
      "posterior_mc",
      [](const PypParams& p, const SampleSummary& s, std::int64_t mm, std::int64_t reps, std::uint64_t seed,
         int threads) {
        py::gil_scoped_release release;
        return unseen::posterior_mc(p, s, mm, mc_options(reps, seed, threads));
      },
      "params"_a, "summary"_a, "m"_a, "replicates"_a = 100000, "seed"_a = 1, "threads"_a = 1);
  uns.def(
      "posterior_mc_order_r",
      [](const PypParams& p, const SampleSummary& s, std::int64_t mm, std::int64_t r, std::int64_t reps,
         std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        return unseen::posterior_mc_order_r(p, s, mm, r, mc_options(reps, seed, threads));
      },
      "params"_a, "summary"_a, "m"_a, "r"_a, "replicates"_a = 100000, "seed"_a = 1, "threads"_a = 1);

  auto prev = m.def_submodule("prevalence");
  prev.def("thisted_efron",
           [](const SampleSummary& s, std::int64_t mm, std::int64_t r) {
             return prevalence::thisted_efron(s, mm, r).value;
           },
           "summary"_a, "m"_a, "r"_a);
  prev.def("estimator", &prevalence::estimator, "params"_a, "summary"_a, "m"_a, "r"_a);
  prev.def("posterior_exact", &prevalence::posterior_exact, "params"_a, "summary"_a, "m"_a, "r"_a);
  prev.def(
      "posterior_mc",
      [](const PypParams& p, const SampleSummary& s, std::int64_t mm, std::int64_t r, std::int64_t reps,
         std::uint64_t seed, int threads, const std::string& path) {
        const auto which = mc_path(path);
        py::gil_scoped_release release;
        return prevalence::posterior_mc(p, s, mm, r, mc_options(reps, seed, threads), which);
      },
      "params"_a, "summary"_a, "m"_a, "r"_a, "replicates"_a = 100000, "seed"_a = 1, "threads"_a = 1,
      "path"_a = "auto");
  prev.def("posterior_binomial_approx", &prevalence::posterior_binomial_approx, "params"_a, "summary"_a, "m"_a,
           "r"_a);

  auto ft = m.def_submodule("fit");
  py::class_<fit::FitReport>(ft, "FitReport")
      .def_readonly("method", &fit::FitReport::method)
      .def_readonly("alpha_hat", &fit::FitReport::alpha_hat)
      .def_readonly("theta_hat", &fit::FitReport::theta_hat)
      .def_readonly("gamma_hat", &fit::FitReport::gamma_hat)
      .def_readonly("log_lik_at_max", &fit::FitReport::log_lik_at_max)
      .def_readonly("observed_info", &fit::FitReport::observed_info)
      .def_readonly("alpha_profile", &fit::FitReport::alpha_profile)
      .def_readonly("theta_aux", &fit::FitReport::theta_aux)
      .def_readonly("L_hat", &fit::FitReport::L_hat)
      .def_readonly("theta_star", &fit::FitReport::theta_star)
      .def_readonly("alpha_gap", &fit::FitReport::alpha_gap)
      .def_property_readonly("params", [](const fit::FitReport& r) { return PypParams{r.alpha_hat, r.theta_hat}; });
  ft.def("log_lik_profile", &fit::log_lik_profile, "summary"_a, "alpha"_a);
  ft.def("observed_info", &fit::observed_info, "summary"_a, "alpha"_a);
  ft.def("mle_alpha", &fit::mle_alpha, "summary"_a);
  ft.def("aux_theta", &fit::aux_theta, "summary"_a, "alpha"_a);
  ft.def("log_lik_joint", &fit::log_lik_joint, "summary"_a, "alpha"_a, "theta"_a);
  ft.def("tail_functionals",
         [](const SampleSummary& s, double a) {
           const auto t = fit::tail_functionals(s, a);
           return py::make_tuple(t.L_hat, t.theta_star);
         },
         "summary"_a, "alpha_hat"_a);
  ft.def("fit_profile", &fit::fit_profile, "summary"_a);
  ft.def("mle_joint", &fit::mle_joint, "summary"_a);
  ft.def(
      "fit_hierarchical",
      [](const SampleSummary& s, const std::string& prior_alpha, const std::string& prior_gamma, int alpha_points,
         int gamma_points, double gamma_max, int threads) {
        fit::GridOptions opt;
        opt.alpha_points = alpha_points;
        opt.gamma_points = gamma_points;
        opt.gamma_max = gamma_max;
        opt.threads = threads;
        const auto pa = fit::parse_alpha_prior(prior_alpha);
        const auto pg = fit::parse_gamma_prior(prior_gamma);
        py::gil_scoped_release release;
        const auto r = fit::fit_hierarchical(s, pa, pg, opt);
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["alpha_hat"] = r.alpha_hat;
        d["theta_hat"] = r.theta_hat;
        d["gamma_hat"] = r.gamma_hat;
        d["observed_info"] = r.observed_info;
        d["alpha_grid"] = r.grid->alpha_grid;
        d["gamma_grid"] = r.grid->gamma_grid;
        d["alpha_marginal"] = r.grid->alpha_marginal();
        d["gamma_marginal"] = r.grid->gamma_marginal();
        return d;
      },
      "summary"_a, "prior_alpha"_a = "uniform", "prior_gamma"_a = "exp:1", "alpha_points"_a = 400,
      "gamma_points"_a = 400, "gamma_max"_a = 20.0, "threads"_a = 1);
}
