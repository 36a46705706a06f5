#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "distlearn/estimators.hpp"
#include "distlearn/experiments.hpp"
#include "distlearn/json_io.hpp"
#include "distlearn/metrics.hpp"
#include "distlearn/numeric.hpp"
#include "distlearn/poissonization.hpp"
#include "distlearn/theory.hpp"

namespace {

using namespace distlearn;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

// sweep / crossover share the config assembly: file config first, explicit
// flags override
struct SweepCliOptions {
    std::string config_path;
    std::string target_path;
    std::string out_path;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    double epsilon = 0.0;
    std::vector<std::uint64_t> m_grid;
    std::uint64_t trials = 0;
    std::string estimator;
    std::uint64_t seed = 0;
    std::string tv_mode;
    std::uint64_t enumeration_cap = 0;
    unsigned threads = 0;

    void register_options(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "JSON config file (flags override it)");
        cmd.add_option("--n", n, "dimensions");
        cmd.add_option("--k", k, "per-dimension cardinality");
        cmd.add_option("--epsilon", epsilon, "TV accuracy target");
        cmd.add_option("--m-grid", m_grid, "sample counts, strictly increasing")
            ->delimiter(',');
        cmd.add_option("--trials", trials, "trials per grid point");
        cmd.add_option("--estimator", estimator, "emp | pemp");
        cmd.add_option("--seed", seed, "master seed");
        cmd.add_option("--tv-mode", tv_mode, "exact | bound (bound: pemp only)");
        cmd.add_option("--enumeration-cap", enumeration_cap, "max enumerable space size");
        cmd.add_option("--threads", threads, "worker threads (output is thread-count independent)");
        cmd.add_option("--target", target_path, "target distribution file (default uniform)");
        cmd.add_option("--out", out_path, "output path (default stdout)");
    }

    SweepConfig build(const CLI::App& cmd) const {
        SweepConfig config;
        if (!config_path.empty()) config = load_sweep_config(config_path);
        if (cmd.count("--n")) config.n = n;
        if (cmd.count("--k")) config.k = k;
        if (cmd.count("--epsilon")) config.epsilon = epsilon;
        if (cmd.count("--m-grid")) config.m_grid = m_grid;
        if (cmd.count("--trials")) config.trials = trials;
        if (cmd.count("--estimator")) {
            if (estimator == "emp") {
                config.estimator = Estimator::Emp;
            } else if (estimator == "pemp") {
                config.estimator = Estimator::Pemp;
            } else {
                throw ConfigError("estimator must be 'emp' or 'pemp'");
            }
        }
        if (cmd.count("--seed")) config.master_seed = seed;
        if (cmd.count("--tv-mode")) {
            if (tv_mode == "exact") {
                config.tv_mode = TvMode::Exact;
            } else if (tv_mode == "bound") {
                config.tv_mode = TvMode::Bound;
            } else {
                throw ConfigError("tv-mode must be 'exact' or 'bound'");
            }
        }
        if (cmd.count("--enumeration-cap")) config.enumeration_cap = enumeration_cap;
        if (cmd.count("--threads")) config.threads = threads;
        if (cmd.count("--target")) {
            auto loaded = load_distribution_file(target_path);
            auto* product = std::get_if<ProductDistribution>(&loaded);
            if (!product) throw ConfigError("sweep target must be a product distribution");
            config.target = std::move(*product);
        }
        return config;
    }
};

int cmd_sweep(const CLI::App& cmd, const SweepCliOptions& opts) {
    const SweepConfig config = opts.build(cmd);
    const auto records = run_sweep(config);
    write_output(opts.out_path, sweep_csv(config, records));
    return 0;
}

int cmd_crossover(const CLI::App& cmd, const SweepCliOptions& opts, double delta) {
    const SweepConfig config = opts.build(cmd);
    const auto records = run_sweep(config);
    const auto crossover = crossover_from_records(records, delta);

    json j{{"delta", delta},
           {"estimator", to_string(config.estimator)},
           {"crossover_m", crossover ? json(*crossover) : json(nullptr)},
           {"records", json::array()}};
    for (const auto& record : records) j["records"].push_back(sweep_record_to_json(record));
    write_output(opts.out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_gap(std::uint32_t n, std::uint32_t k, double epsilon, std::uint64_t m,
            std::uint64_t trials, std::uint64_t seed, unsigned threads,
            std::uint64_t enumeration_cap, bool include_pairs, const std::string& out_path) {
    const GapReport report =
        gap_experiment(n, k, epsilon, m, trials, seed, threads, enumeration_cap);
    write_output(out_path, gap_report_to_json(report, include_pairs).dump(2) + "\n");
    return 0;
}

int cmd_theory(std::uint64_t support_size, double m, double epsilon, double delta, double c,
               std::uint32_t n, std::uint32_t k, double perm_constant,
               const std::string& out_path) {
    const double coef = folded_mean_lower_coefficient();
    BoundParams params{support_size, m, epsilon, delta};
    params.validate();
    const double lambda = params.lambda();

    json j{{"folded_mean_lower_coefficient", coef},
           {"coefficient_squared_over_16", coef * coef / 16.0},
           {"params",
            {{"N", support_size}, {"m", m}, {"epsilon", epsilon}, {"delta", delta}, {"c", c}}},
           {"lambda", lambda}};

    try {
        j["erm_lower_threshold"] = erm_lower_threshold(support_size, epsilon, c);
    } catch (const std::invalid_argument& e) {
        j["erm_lower_threshold"] = nullptr;
        j["erm_lower_threshold_error"] = e.what();
    }
    try {
        const double bound = chebyshev_failure_bound(params);
        j["chebyshev_failure_bound"] = bound;
        j["chebyshev_failure_bound_times_4"] = 4.0 * bound;
    } catch (const BoundInapplicableError& e) {
        j["chebyshev_failure_bound"] = nullptr;
        j["chebyshev_failure_bound_error"] = e.what();
    }
    if (lambda > 0.0) {
        j["folded_abs_mean"] = {{"closed_form", folded_abs_mean_exact(lambda)},
                                {"summation", folded_abs_mean_by_summation(lambda)}};
        try {
            const auto bounds = folded_moment_bounds(lambda);
            j["folded_moment_bounds"] = {{"mean_lower", bounds.mean_lower},
                                         {"var_upper", bounds.var_upper}};
            const auto chain = stirling_chain_check(lambda);
            j["stirling_chain"] = {{"exact", chain.exact},
                                   {"floor_step", chain.floor_step},
                                   {"stirling_step", chain.stirling_step},
                                   {"final_step", chain.final_step},
                                   {"log_margins",
                                    {chain.log_margin_floor, chain.log_margin_stirling,
                                     chain.log_margin_final}}};
        } catch (const HypothesisError&) {
            j["folded_moment_bounds"] = nullptr;
            j["stirling_chain"] = nullptr;
        }
    }
    if (n > 0 && k > 0) {
        j["perm_sample_bound"] = perm_sample_bound(n, k, epsilon, delta, perm_constant);
    }
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_poisson_check(std::uint64_t bins, std::uint64_t balls, double epsilon,
                      std::uint64_t trials, std::uint64_t seed, const std::string& event_name,
                      std::uint64_t threshold, const std::string& out_path) {
    CountsPredicate event;
    json event_json{{"name", event_name}};
    if (event_name == "discrepancy") {
        const double cutoff = 2.0 * static_cast<double>(balls) * epsilon;
        event = [=](const OccupancyCounts& counts) {
            return discrepancy_stat(counts, balls, bins) < cutoff;
        };
        event_json["epsilon"] = epsilon;
        event_json["cutoff"] = cutoff;
    } else if (event_name == "max-load") {
        event = [=](const OccupancyCounts& counts) {
            std::uint64_t max_load = 0;
            for (std::uint64_t c : counts.bins) max_load = std::max(max_load, c);
            return max_load <= threshold;
        };
        event_json["threshold"] = threshold;
    } else if (event_name == "total-le-m") {
        event = [=](const OccupancyCounts& counts) { return counts.total <= balls; };
    } else {
        throw ConfigError("event must be discrepancy, max-load, or total-le-m");
    }

    const PoissonizationReport report = poissonization_check(event, bins, balls, trials, seed);
    json j = poissonization_report_to_json(report);
    j["event"] = event_json;
    j["N"] = bins;
    j["m"] = balls;
    j["lambda"] = static_cast<double>(balls) / static_cast<double>(bins);
    j["trials"] = trials;
    j["seed"] = seed;
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_tv(const std::string& p_path, const std::string& q_path, const std::string& mode,
           const std::string& out_path) {
    const LoadedDistribution p = load_distribution_file(p_path);
    const LoadedDistribution q = load_distribution_file(q_path);

    double tv = 0.0;
    std::string used_mode = "exact";

    if (std::holds_alternative<DenseDistribution>(p) &&
        std::holds_alternative<DenseDistribution>(q)) {
        tv = tv_dense(std::get<DenseDistribution>(p), std::get<DenseDistribution>(q));
    } else if (std::holds_alternative<ProductDistribution>(p) &&
               std::holds_alternative<ProductDistribution>(q)) {
        const auto& pp = std::get<ProductDistribution>(p);
        const auto& qq = std::get<ProductDistribution>(q);
        const bool enumerable = pp.space().enumerable();
        if (mode == "bound" || (mode == "auto" && !enumerable)) {
            tv = tv_product_upper_bound(pp, qq);
            used_mode = "bound";
        } else {
            tv = tv_product_exact(pp, qq, pp.space());
        }
    } else {
        // mixed dense/product: compare pointwise over the flattened space
        const auto& product = std::holds_alternative<ProductDistribution>(p)
                                  ? std::get<ProductDistribution>(p)
                                  : std::get<ProductDistribution>(q);
        const auto& dense = std::holds_alternative<DenseDistribution>(p)
                                ? std::get<DenseDistribution>(p)
                                : std::get<DenseDistribution>(q);
        if (mode == "bound") throw ConfigError("bound mode needs two product distributions");
        const SpaceSpec& space = product.space();
        if (!space.enumerable() || space.total_size() != dense.size()) {
            throw EnumerationError("dense support must equal the enumerable space size");
        }
        NeumaierSum l1;
        std::uint64_t flat = 0;
        for_each_point(space, [&](const Point& x) {
            l1.add(std::abs(product.mass(x) - dense.prob(flat)));
            ++flat;
        });
        tv = 0.5 * l1.value();
    }

    write_output(out_path, json{{"tv", tv}, {"mode", used_mode}}.dump(2) + "\n");
    return 0;
}

int cmd_sample(const std::vector<Coord>& sizes, const std::string& dist_path, std::uint64_t m,
               std::uint64_t seed, const std::string& format, const std::string& out_path) {
    std::optional<ProductDistribution> dist;
    if (!dist_path.empty()) {
        auto loaded = load_distribution_file(dist_path);
        auto* product = std::get_if<ProductDistribution>(&loaded);
        if (!product) throw ConfigError("sample needs a product distribution file");
        dist = std::move(*product);
    } else {
        if (sizes.empty()) throw ConfigError("pass --sizes or --dist");
        dist = uniform_product(SpaceSpec(sizes));
    }

    const SampleSet samples = draw_samples(*dist, m, seed);
    std::string out;
    for (const Point& point : samples.points) {
        if (format == "jsonl") {
            out += json(point).dump();
        } else {
            for (std::size_t j = 0; j < point.size(); ++j) {
                if (j > 0) out += ',';
                out += std::to_string(point[j]);
            }
        }
        out += '\n';
    }
    write_output(out_path, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"empirical vs product-empirical density estimation on finite product spaces"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo success-rate sweep over m (CSV)");
    SweepCliOptions sweep_opts;
    sweep_opts.register_options(*sweep);

    // gap
    auto* gap = app.add_subcommand("gap", "paired emp-vs-pemp experiment on shared samples");
    std::uint32_t gap_n = 5, gap_k = 4;
    double gap_epsilon = 0.1;
    std::uint64_t gap_m = 5000, gap_trials = 200, gap_seed = 1;
    unsigned gap_threads = 1;
    std::uint64_t gap_cap = kDefaultEnumerationCap;
    bool gap_pairs = false;
    std::string gap_out;
    gap->add_option("--n", gap_n, "dimensions");
    gap->add_option("--k", gap_k, "per-dimension cardinality");
    gap->add_option("--epsilon", gap_epsilon, "TV accuracy target");
    gap->add_option("--m", gap_m, "samples per trial");
    gap->add_option("--trials", gap_trials, "trial count");
    gap->add_option("--seed", gap_seed, "master seed");
    gap->add_option("--threads", gap_threads, "worker threads");
    gap->add_option("--enumeration-cap", gap_cap, "max enumerable space size");
    gap->add_flag("--tv-pairs", gap_pairs, "include per-trial TV pairs");
    gap->add_option("--out", gap_out, "output path (default stdout)");

    // crossover
    auto* crossover = app.add_subcommand(
        "crossover", "smallest m whose Wilson lower bound reaches 1 - delta");
    SweepCliOptions crossover_opts;
    crossover_opts.register_options(*crossover);
    double crossover_delta = 0.1;
    crossover->add_option("--delta", crossover_delta, "failure probability target")
        ->required();

    // theory
    auto* theory = app.add_subcommand("theory", "closed-form constants and bounds as JSON");
    std::uint64_t theory_support = 1024;
    double theory_m = 1638, theory_epsilon = 0.1, theory_delta = 0.1, theory_c = 0.016;
    std::uint32_t theory_n = 0, theory_k = 0;
    double theory_perm_constant = 1.0;
    std::string theory_out;
    theory->add_option("--N", theory_support, "support size k^n");
    theory->add_option("--m", theory_m, "sample count (real-valued)");
    theory->add_option("--epsilon", theory_epsilon, "TV accuracy target");
    theory->add_option("--delta", theory_delta, "failure probability");
    theory->add_option("--c", theory_c, "threshold constant for the failing regime");
    theory->add_option("--n", theory_n, "dimensions (enables the polynomial bound)");
    theory->add_option("--k", theory_k, "per-dimension cardinality (with --n)");
    theory->add_option("--perm-constant", theory_perm_constant,
                       "constant in the polynomial sample bound");
    theory->add_option("--out", theory_out, "output path (default stdout)");

    // poisson-check
    auto* poisson = app.add_subcommand(
        "poisson-check", "factor-4 occupancy transfer check for a monotone event");
    std::uint64_t pc_bins = 64, pc_balls = 128, pc_trials = 100000, pc_seed = 1,
                  pc_threshold = 4;
    double pc_epsilon = 0.1;
    std::string pc_event = "discrepancy", pc_out;
    poisson->add_option("--N", pc_bins, "bins");
    poisson->add_option("--m", pc_balls, "balls");
    poisson->add_option("--epsilon", pc_epsilon, "accuracy for the discrepancy event");
    poisson->add_option("--trials", pc_trials, "Monte Carlo trials per arm");
    poisson->add_option("--seed", pc_seed, "master seed");
    poisson->add_option("--event", pc_event, "discrepancy | max-load | total-le-m");
    poisson->add_option("--threshold", pc_threshold, "threshold for max-load");
    poisson->add_option("--out", pc_out, "output path (default stdout)");

    // tv
    auto* tv = app.add_subcommand("tv", "TV distance between two distribution files");
    std::string tv_p, tv_q, tv_mode = "auto", tv_out;
    tv->add_option("--p", tv_p, "first distribution file")->required();
    tv->add_option("--q", tv_q, "second distribution file")->required();
    tv->add_option("--mode", tv_mode, "auto | exact | bound");
    tv->add_option("--out", tv_out, "output path (default stdout)");

    // sample
    auto* sample = app.add_subcommand("sample", "draw i.i.d. samples");
    std::vector<Coord> sample_sizes;
    std::string sample_dist, sample_format = "csv", sample_out;
    std::uint64_t sample_m = 10, sample_seed = 1;
    sample->add_option("--sizes", sample_sizes, "per-dimension cardinalities (uniform target)")
        ->delimiter(',');
    sample->add_option("--dist", sample_dist, "product distribution file");
    sample->add_option("--m", sample_m, "number of samples");
    sample->add_option("--seed", sample_seed, "seed");
    sample->add_option("--format", sample_format, "csv | jsonl");
    sample->add_option("--out", sample_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(*sweep, sweep_opts);
        if (gap->parsed()) {
            return cmd_gap(gap_n, gap_k, gap_epsilon, gap_m, gap_trials, gap_seed, gap_threads,
                           gap_cap, gap_pairs, gap_out);
        }
        if (crossover->parsed()) {
            return cmd_crossover(*crossover, crossover_opts, crossover_delta);
        }
        if (theory->parsed()) {
            return cmd_theory(theory_support, theory_m, theory_epsilon, theory_delta, theory_c,
                              theory_n, theory_k, theory_perm_constant, theory_out);
        }
        if (poisson->parsed()) {
            return cmd_poisson_check(pc_bins, pc_balls, pc_epsilon, pc_trials, pc_seed, pc_event,
                                     pc_threshold, pc_out);
        }
        if (tv->parsed()) return cmd_tv(tv_p, tv_q, tv_mode, tv_out);
        if (sample->parsed()) {
            return cmd_sample(sample_sizes, sample_dist, sample_m, sample_seed, sample_format,
                              sample_out);
        }
    } catch (const EnumerationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
