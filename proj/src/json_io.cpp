#include "distlearn/json_io.hpp"

#include <fstream>
#include <set>

namespace distlearn {

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& what) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + what);
        }
    }
}

std::vector<DenseDistribution> marginals_from_json(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("'marginals' must be a non-empty array of arrays");
    }
    std::vector<DenseDistribution> marginals;
    marginals.reserve(j.size());
    for (const auto& row : j) {
        marginals.emplace_back(row.get<std::vector<double>>());
    }
    return marginals;
}

} // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

json space_to_json(const SpaceSpec& space) {
    return json{{"sizes", space.sizes()}, {"enumeration_cap", space.enumeration_cap()}};
}

SpaceSpec space_from_json(const json& j) {
    reject_unknown_keys(j, {"sizes", "enumeration_cap"}, "space");
    if (!j.contains("sizes")) throw ConfigError("space needs 'sizes'");
    auto sizes = j.at("sizes").get<std::vector<Coord>>();
    const std::uint64_t cap = j.value("enumeration_cap", kDefaultEnumerationCap);
    try {
        return SpaceSpec(std::move(sizes), cap);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json product_to_json(const ProductDistribution& dist) {
    json marginals = json::array();
    for (const auto& marginal : dist.marginals()) {
        marginals.push_back(std::vector<double>(marginal.probs().begin(),
                                                marginal.probs().end()));
    }
    return json{{"type", "product"},
                {"space", space_to_json(dist.space())},
                {"marginals", std::move(marginals)}};
}

ProductDistribution product_from_json(const json& j) {
    reject_unknown_keys(j, {"type", "space", "marginals"}, "product distribution");
    try {
        auto marginals = marginals_from_json(j.at("marginals"));
        if (j.contains("space")) {
            return ProductDistribution(space_from_json(j.at("space")), std::move(marginals));
        }
        return ProductDistribution(std::move(marginals));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

LoadedDistribution distribution_from_json(const json& j) {
    const std::string type = j.value("type", "product");
    try {
        if (type == "product") return product_from_json(j);
        if (type == "uniform") {
            reject_unknown_keys(j, {"type", "space"}, "uniform distribution");
            return uniform_product(space_from_json(j.at("space")));
        }
        if (type == "dense") {
            reject_unknown_keys(j, {"type", "probs"}, "dense distribution");
            return DenseDistribution(j.at("probs").get<std::vector<double>>());
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown distribution type '" + type + "'");
}

LoadedDistribution load_distribution_file(const std::string& path) {
    return distribution_from_json(load_json_file(path));
}

namespace {

Estimator estimator_from_string(const std::string& s) {
    if (s == "emp") return Estimator::Emp;
    if (s == "pemp") return Estimator::Pemp;
    throw ConfigError("estimator must be 'emp' or 'pemp', got '" + s + "'");
}

TvMode tv_mode_from_string(const std::string& s) {
    if (s == "exact") return TvMode::Exact;
    if (s == "bound") return TvMode::Bound;
    throw ConfigError("tv_mode must be 'exact' or 'bound', got '" + s + "'");
}

} // namespace

json sweep_config_to_json(const SweepConfig& config) {
    json j{{"n", config.n},
           {"k", config.k},
           {"epsilon", config.epsilon},
           {"m_grid", config.m_grid},
           {"trials", config.trials},
           {"estimator", to_string(config.estimator)},
           {"master_seed", config.master_seed},
           {"tv_mode", to_string(config.tv_mode)},
           {"enumeration_cap", config.enumeration_cap},
           {"threads", config.threads}};
    if (config.target) {
        j["target"] = product_to_json(*config.target);
    } else {
        j["target"] = "uniform";
    }
    return j;
}

SweepConfig sweep_config_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"n", "k", "epsilon", "m_grid", "trials", "estimator", "master_seed",
                         "target", "tv_mode", "enumeration_cap", "threads"},
                        "sweep config");
    SweepConfig config;
    config.n = j.value("n", config.n);
    config.k = j.value("k", config.k);
    config.epsilon = j.value("epsilon", config.epsilon);
    if (j.contains("m_grid")) config.m_grid = j.at("m_grid").get<std::vector<std::uint64_t>>();
    config.trials = j.value("trials", config.trials);
    if (j.contains("estimator")) {
        config.estimator = estimator_from_string(j.at("estimator").get<std::string>());
    }
    config.master_seed = j.value("master_seed", config.master_seed);
    if (j.contains("tv_mode")) {
        config.tv_mode = tv_mode_from_string(j.at("tv_mode").get<std::string>());
    }
    config.enumeration_cap = j.value("enumeration_cap", config.enumeration_cap);
    config.threads = j.value("threads", config.threads);
    if (j.contains("target") && j.at("target") != json("uniform")) {
        config.target = product_from_json(j.at("target"));
    }
    return config;
}

SweepConfig load_sweep_config(const std::string& path) {
    return sweep_config_from_json(load_json_file(path));
}

json sweep_record_to_json(const SweepRecord& record, bool include_tv_values) {
    json j{{"m", record.m},
           {"successes", record.successes},
           {"success_rate", record.success_rate},
           {"ci_low", record.ci.low},
           {"ci_high", record.ci.high},
           {"median_tv", record.median_tv},
           {"mean_tv", record.mean_tv},
           {"tv_mode", to_string(record.tv_mode)}};
    if (include_tv_values) j["tv_values"] = record.tv_values;
    return j;
}

json gap_report_to_json(const GapReport& report, bool include_tv_pairs) {
    json j{{"n", report.n},
           {"k", report.k},
           {"epsilon", report.epsilon},
           {"m", report.m},
           {"trials", report.trials},
           {"master_seed", report.master_seed},
           {"median_tv_emp", report.median_emp},
           {"median_tv_pemp", report.median_pemp},
           {"gap_witness_count", report.witness_count},
           {"gap_witness_rate", report.witness_rate},
           {"gap_witness_ci", {report.witness_ci.low, report.witness_ci.high}}};
    if (include_tv_pairs) {
        json pairs = json::array();
        for (const auto& [tv_emp, tv_pemp] : report.tv_pairs) {
            pairs.push_back({tv_emp, tv_pemp});
        }
        j["tv_pairs"] = std::move(pairs);
    }
    return j;
}

json event_estimate_to_json(const EventEstimate& estimate) {
    return json{{"successes", estimate.successes},
                {"trials", estimate.trials},
                {"estimate", estimate.estimate},
                {"ci", {estimate.ci.low, estimate.ci.high}}};
}

json poissonization_report_to_json(const PoissonizationReport& report) {
    return json{{"exact_arm", event_estimate_to_json(report.exact_arm)},
                {"poisson_arm", event_estimate_to_json(report.poisson_arm)},
                {"slack", report.slack},
                {"factor4_bound", 4.0 * report.poisson_arm.estimate + report.slack},
                {"holds", report.holds}};
}

} // namespace distlearn
