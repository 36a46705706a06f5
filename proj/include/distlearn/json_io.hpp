#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "distlearn/core.hpp"
#include "distlearn/experiments.hpp"
#include "distlearn/poissonization.hpp"

namespace distlearn {

using json = nlohmann::json;

// Schemas (documented in the README):
//   SpaceSpec            {"sizes": [4,4,4], "enumeration_cap": 16777216?}
//   DenseDistribution    [0.25, 0.25, 0.5]
//   ProductDistribution  {"type": "product", "marginals": [[...], ...],
//                         "space": {...}?}
//   uniform shorthand    {"type": "uniform", "space": {"sizes": [...]}}
//   dense file           {"type": "dense", "probs": [...]}

json space_to_json(const SpaceSpec& space);
SpaceSpec space_from_json(const json& j);

json product_to_json(const ProductDistribution& dist);
ProductDistribution product_from_json(const json& j);

// Any distribution file: product, uniform shorthand, or dense.
using LoadedDistribution = std::variant<ProductDistribution, DenseDistribution>;
LoadedDistribution distribution_from_json(const json& j);
LoadedDistribution load_distribution_file(const std::string& path);

// SweepConfig mirror; unknown keys rejected so config typos fail loudly.
json sweep_config_to_json(const SweepConfig& config);
SweepConfig sweep_config_from_json(const json& j);
SweepConfig load_sweep_config(const std::string& path);

json sweep_record_to_json(const SweepRecord& record, bool include_tv_values = false);
json gap_report_to_json(const GapReport& report, bool include_tv_pairs = false);
json event_estimate_to_json(const EventEstimate& estimate);
json poissonization_report_to_json(const PoissonizationReport& report);

json load_json_file(const std::string& path);

} // namespace distlearn
