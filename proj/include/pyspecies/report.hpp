#pragma once

#include <json.hpp>
#include <string>

#include "pyspecies/data.hpp"
#include "pyspecies/discrete_posterior.hpp"
#include "pyspecies/fit.hpp"

namespace pyspecies::report {

using json = nlohmann::json;

inline constexpr const char* schema_version = "1.0";

// x rounded to 12 significant digits; non-finite values become null.
json number(double x);

json summary_json(const SampleSummary& s);
json posterior_json(const DiscretePosterior& p);
json fit_json(const fit::FitReport& r);

// Fresh envelope with schema version, command and input digest.
json envelope(const std::string& command, const SampleSummary* s);

std::string dump(const json& j);

}  // namespace pyspecies::report
