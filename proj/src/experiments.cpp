#include "distlearn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "distlearn/estimators.hpp"
#include "distlearn/metrics.hpp"
#include "distlearn/numeric.hpp"

namespace distlearn {

std::string to_string(Estimator e) { return e == Estimator::Emp ? "emp" : "pemp"; }

std::string to_string(TvMode mode) { return mode == TvMode::Exact ? "exact" : "bound"; }

namespace {

// Work-stealing loop over [0, count); bodies write to disjoint slots, so
// scheduling cannot affect results.
void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(std::uint64_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

SweepRecord aggregate(std::uint64_t m, std::vector<double> tv_values, double epsilon,
                      TvMode tv_mode) {
    SweepRecord record;
    record.m = m;
    record.tv_mode = tv_mode;
    record.tv_values = std::move(tv_values);
    NeumaierSum mean;
    for (double tv : record.tv_values) {
        if (tv <= epsilon) ++record.successes;
        mean.add(tv);
    }
    const std::uint64_t trials = record.tv_values.size();
    record.success_rate = static_cast<double>(record.successes) / static_cast<double>(trials);
    record.ci = wilson_interval(record.successes, trials);
    record.median_tv = median(record.tv_values);
    record.mean_tv = mean.value() / static_cast<double>(trials);
    return record;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

SpaceSpec SweepConfig::space() const {
    return SpaceSpec(std::vector<Coord>(n, k), enumeration_cap);
}

void SweepConfig::validate() const {
    if (n < 1 || k < 1) throw ConfigError("need n >= 1 and k >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (trials < 1) throw ConfigError("need trials >= 1");
    if (m_grid.empty()) throw ConfigError("m_grid must not be empty");
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        if (m_grid[i] < 1) throw ConfigError("every m must be >= 1");
        if (i > 0 && m_grid[i] <= m_grid[i - 1]) {
            throw ConfigError("m_grid must be strictly increasing");
        }
    }
    if (tv_mode == TvMode::Bound && estimator == Estimator::Emp) {
        throw ConfigError("tv_mode=bound applies to the pemp estimator only");
    }
    const SpaceSpec sp = space();
    if (tv_mode == TvMode::Exact && !sp.enumerable()) {
        throw EnumerationError(
            "tv_mode=exact needs k^n <= enumeration_cap; use tv_mode=bound with pemp");
    }
    if (target) {
        if (target->dims() != n) throw ConfigError("target dimension mismatch");
        for (std::size_t j = 0; j < target->dims(); ++j) {
            if (target->marginal(j).size() != k) {
                throw ConfigError("target marginal cardinality mismatch");
            }
        }
    }
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
    config.validate();
    const SpaceSpec sp = config.space();
    const ProductDistribution target =
        config.target ? ProductDistribution(sp, config.target->marginals())
                      : uniform_product(sp);

    std::vector<SweepRecord> records;
    records.reserve(config.m_grid.size());
    for (const std::uint64_t m : config.m_grid) {
        std::vector<double> tv_values(config.trials);
        parallel_for(config.trials, config.threads, [&](std::uint64_t trial) {
            const std::uint64_t seed =
                derive_trial_seed(config.master_seed, kSweepDrawTag, m, trial);
            const SampleSet samples = draw_samples(target, m, seed);
            double tv = 0.0;
            if (config.estimator == Estimator::Emp) {
                tv = tv_sparse_vs_pointwise(empirical_distribution(samples, sp), target);
            } else {
                const ProductDistribution estimate =
                    product_empirical_distribution(samples, sp);
                tv = config.tv_mode == TvMode::Exact
                         ? tv_product_exact(estimate, target, sp)
                         : tv_product_upper_bound(estimate, target);
            }
            tv_values[trial] = tv;
        });
        records.push_back(aggregate(m, std::move(tv_values), config.epsilon, config.tv_mode));
    }
    return records;
}

GapReport gap_experiment(std::uint32_t n, std::uint32_t k, double epsilon, std::uint64_t m,
                         std::uint64_t trials, std::uint64_t master_seed, unsigned threads,
                         std::uint64_t enumeration_cap) {
    if (n < 1 || k < 1) throw ConfigError("need n >= 1 and k >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (m < 1) throw ConfigError("need m >= 1");
    if (trials < 1) throw ConfigError("need trials >= 1");
    const SpaceSpec sp(std::vector<Coord>(n, k), enumeration_cap);
    if (!sp.enumerable()) {
        throw EnumerationError("gap experiment needs k^n <= enumeration_cap");
    }
    const ProductDistribution target = uniform_product(sp);

    GapReport report;
    report.n = n;
    report.k = k;
    report.epsilon = epsilon;
    report.m = m;
    report.trials = trials;
    report.master_seed = master_seed;
    report.tv_pairs.assign(trials, {0.0, 0.0});

    parallel_for(trials, threads, [&](std::uint64_t trial) {
        const std::uint64_t seed = derive_trial_seed(master_seed, kGapDrawTag, m, trial);
        const SampleSet samples = draw_samples(target, m, seed);
        const double tv_emp =
            tv_sparse_vs_pointwise(empirical_distribution(samples, sp), target);
        const double tv_pemp =
            tv_product_exact(product_empirical_distribution(samples, sp), target, sp);
        report.tv_pairs[trial] = {tv_emp, tv_pemp};
    });

    std::vector<double> emp_values, pemp_values;
    emp_values.reserve(trials);
    pemp_values.reserve(trials);
    for (const auto& [tv_emp, tv_pemp] : report.tv_pairs) {
        emp_values.push_back(tv_emp);
        pemp_values.push_back(tv_pemp);
        if (tv_pemp < epsilon && epsilon < tv_emp) ++report.witness_count;
    }
    report.median_emp = median(std::move(emp_values));
    report.median_pemp = median(std::move(pemp_values));
    report.witness_rate = static_cast<double>(report.witness_count) / static_cast<double>(trials);
    report.witness_ci = wilson_interval(report.witness_count, trials);
    return report;
}

std::optional<std::uint64_t> crossover_from_records(const std::vector<SweepRecord>& records,
                                                    double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    for (const SweepRecord& record : records) {
        if (record.ci.low >= 1.0 - delta) return record.m;
    }
    return std::nullopt;
}

std::optional<std::uint64_t> crossover_estimate(const SweepConfig& config, double delta) {
    return crossover_from_records(run_sweep(config), delta);
}

std::string sweep_csv_header() {
    return "estimator,n,k,N,epsilon,m,trials,success_rate,ci_low,ci_high,median_tv,mean_tv,seed";
}

std::string sweep_csv(const SweepConfig& config, const std::vector<SweepRecord>& records) {
    const SpaceSpec sp = config.space();
    std::string estimator_label = to_string(config.estimator);
    if (config.tv_mode == TvMode::Bound) estimator_label += "-bound";

    std::string out = sweep_csv_header();
    out += '\n';
    for (const SweepRecord& record : records) {
        out += estimator_label;
        out += ',' + std::to_string(config.n);
        out += ',' + std::to_string(config.k);
        out += ',' + std::to_string(sp.total_size());
        out += ',' + format_double(config.epsilon);
        out += ',' + std::to_string(record.m);
        out += ',' + std::to_string(config.trials);
        out += ',' + format_double(record.success_rate);
        out += ',' + format_double(record.ci.low);
        out += ',' + format_double(record.ci.high);
        out += ',' + format_double(record.median_tv);
        out += ',' + format_double(record.mean_tv);
        out += ',' + std::to_string(config.master_seed);
        out += '\n';
    }
    return out;
}

} // namespace distlearn
