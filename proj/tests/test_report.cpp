#include <doctest.h>

#include <cmath>
#include <limits>

#include "pyspecies/report.hpp"

using namespace pyspecies;

TEST_CASE("number rounding") {
  CHECK(report::number(0.1).get<double>() == 0.1);
  CHECK(report::number(1.0 / 3).get<double>() == 0.333333333333);
  CHECK(report::number(2.0 / 3).get<double>() == 0.666666666667);
  CHECK(report::number(123456789.0123456).get<double>() == 123456789.012);
  CHECK(report::number(std::numeric_limits<double>::infinity()).is_null());
  CHECK(report::number(std::nan("")).is_null());
  CHECK(report::dump(report::number(0.5340909090909091)) == "0.534090909091\n");
}

TEST_CASE("summary and posterior serialization") {
  auto s = SampleSummary::from_labels({"a", "b", "a"});
  auto j = report::summary_json(s);
  CHECK(j["n"] == 3);
  CHECK(j["k"] == 2);
  CHECK(j["fingerprint"]["1"] == 1);
  CHECK(j["fingerprint"]["2"] == 1);
  CHECK(j["fingerprint_hash"].is_string());
  auto post = DiscretePosterior::from_log_pmf({0.0, -std::numeric_limits<double>::infinity()}, Provenance::exact,
                                             "closed-form");
  auto p = report::posterior_json(post);
  CHECK(p["support_min"] == 0);
  CHECK(p["support_max"] == 1);
  CHECK(p["log_pmf"][1].is_null());
  CHECK(p["provenance"] == "exact");
  CHECK(p["method"] == "closed-form");
  auto env = report::envelope("summarize", &s);
  CHECK(env["schema_version"] == report::schema_version);
  CHECK(env["command"] == "summarize");
  CHECK(env["inputs"]["n"] == 3);
}
