#include "eqfs/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "eqfs/error.hpp"

namespace eqfs {

using Json = nlohmann::ordered_json;

namespace {

PreparedData prepare(Dataset data, const std::string& name, const std::string& label, double test_fraction,
                     std::uint64_t split_seed) {
    PreparedData p;
    p.split = stratified_split(data, test_fraction, split_seed);
    p.info = {name, label, data.digest, data.rows(), data.feature_count(), test_fraction, split_seed};
    p.data = std::move(data);
    return p;
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd out;
    if (v.empty()) return out;
    double sum = 0.0;
    for (double x : v) sum += x;
    out.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size()));
    return out;
}

Json evaluator_json(const EvaluatorSpec& s) {
    return {{"kind", to_string(s.kind)}, {"C", s.C}, {"epochs", s.epochs}, {"command", s.command}};
}

Json dataset_json(const DatasetInfo& d) {
    return {{"path", d.path},         {"label", d.label},       {"digest", d.digest},        {"rows", d.rows},
            {"features", d.features}, {"test_fraction", d.test_fraction}, {"split_seed", d.split_seed}};
}

}  // namespace

PreparedData prepare_data(const std::filesystem::path& path, const std::string& label, double test_fraction,
                          std::uint64_t split_seed) {
    return prepare(load_csv(path, LabelColumn::parse(label)), path.string(), label, test_fraction, split_seed);
}

PreparedData prepare_data(Dataset data, const std::string& name, double test_fraction, std::uint64_t split_seed) {
    return prepare(std::move(data), name, "", test_fraction, split_seed);
}

Aggregate aggregate(const std::vector<RunRecord>& records) {
    if (records.empty()) throw InsufficientDataError("no records to aggregate");
    const std::size_t gens = records.front().generations.size();
    for (const auto& r : records)
        if (r.generations.size() != gens) throw RecordError("records disagree on generation count");

    Aggregate a;
    a.records = records.size();
    for (std::size_t k = 0; k < gens; ++k) {
        std::vector<double> best, support, cumulative;
        for (const auto& r : records) {
            best.push_back(r.generations[k].best_accuracy);
            support.push_back(static_cast<double>(r.generations[k].support_count));
            double total = 0.0;
            for (std::size_t j = 0; j <= k; ++j) total += static_cast<double>(r.generations[j].new_evaluations);
            cumulative.push_back(total);
        }
        const auto b = mean_std(best);
        a.mean_best_accuracy.push_back(b.mean);
        a.std_best_accuracy.push_back(b.std);
        a.mean_support_count.push_back(mean_std(support).mean);
        a.mean_cumulative_evaluations.push_back(mean_std(cumulative).mean);
    }
    std::vector<double> auc, depths, cache;
    for (const auto& r : records) {
        auc.push_back(r.totals.empirical_auc);
        depths.push_back(static_cast<double>(depth(r.final_circuit)));
        cache.push_back(static_cast<double>(r.totals.cache_size));
    }
    const auto au = mean_std(auc);
    a.mean_auc = au.mean;
    a.std_auc = au.std;
    a.predicted_auc = records.front().totals.predicted_auc;
    a.mean_final_depth = mean_std(depths).mean;
    a.mean_cache_size = mean_std(cache).mean;
    return a;
}

std::string serialize(const Aggregate& a, const std::vector<double>& wall_clock_seconds) {
    Json j = {{"format_version", run_record_version},
              {"records", a.records},
              {"mean_best_accuracy", a.mean_best_accuracy},
              {"std_best_accuracy", a.std_best_accuracy},
              {"mean_support_count", a.mean_support_count},
              {"mean_cumulative_evaluations", a.mean_cumulative_evaluations},
              {"mean_auc", a.mean_auc},
              {"std_auc", a.std_auc},
              {"predicted_auc", a.predicted_auc},
              {"mean_final_depth", a.mean_final_depth},
              {"mean_cache_size", a.mean_cache_size},
              {"wall_clock_seconds", wall_clock_seconds}};
    return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& config, const PreparedData& prepared) {
    if (config.repeat < 1) throw ContractError("repeat must be at least 1");
    validate(config.evaluator);
    if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

    ExperimentResult result;
    for (int i = 0; i < config.repeat; ++i) {
        EvolutionConfig evo = config.evolution;
        evo.n = prepared.split.feature_count();
        evo.seed = config.evolution.seed + static_cast<std::uint64_t>(i);

        const auto start = std::chrono::steady_clock::now();
        auto evaluator = make_evaluator(config.evaluator, prepared.split);
        RunRecord record = evolve(evo, *evaluator, {config.threads});
        evaluator.reset();
        result.wall_clock_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());

        record.evaluator = config.evaluator;
        record.dataset = prepared.info;
        if (!config.out_dir.empty()) {
            std::ostringstream name;
            name << "record_" << std::setw(3) << std::setfill('0') << i << ".json";
            write_run_record(record, (config.out_dir / name.str()).string());
        }
        result.records.push_back(std::move(record));
    }
    result.summary = aggregate(result.records);
    if (!config.out_dir.empty()) {
        std::ofstream out(config.out_dir / "aggregate.json", std::ios::binary | std::ios::trunc);
        out << serialize(result.summary, result.wall_clock_seconds);
        if (!out) throw RecordError("failed writing aggregate.json");
    }
    return result;
}

OracleRecord run_oracle(const PreparedData& prepared, const EvaluatorSpec& spec, int threads) {
    const int n = prepared.split.feature_count();
    if (n > oracle_max_features)
        throw ContractError("brute-force oracle refuses n = " + std::to_string(n) + " (limit " +
                            std::to_string(oracle_max_features) + ")");
    validate(spec);
    OracleRecord o;
    o.n = n;
    o.dataset = prepared.info;
    o.evaluator = spec;
    const std::uint64_t total = std::uint64_t{1} << n;
    o.accuracies.assign(total, 0.0);

    auto evaluator = make_evaluator(spec, prepared.split);
    // The external client serializes requests itself, so one worker is enough there.
    const auto workers = spec.kind == EvaluatorKind::external ? 1U : static_cast<unsigned>(std::max(threads, 1));
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned t) {
        try {
            for (std::uint64_t bits = t; bits < total; bits += workers) o.accuracies[bits] = (*evaluator)(FeatureMask(n, bits));
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    const auto best = std::max_element(o.accuracies.begin(), o.accuracies.end());
    o.argmax = FeatureMask(n, static_cast<std::uint64_t>(best - o.accuracies.begin()));
    o.max_accuracy = *best;
    return o;
}

std::string serialize(const OracleRecord& o) {
    Json entries = Json::array();
    for (std::size_t bits = 0; bits < o.accuracies.size(); ++bits)
        entries.push_back({{"mask", FeatureMask(o.n, bits).to_string()}, {"accuracy", o.accuracies[bits]}});
    Json j = {{"format_version", run_record_version},
              {"n", o.n},
              {"dataset", dataset_json(o.dataset)},
              {"evaluator", evaluator_json(o.evaluator)},
              {"argmax", o.argmax.to_string()},
              {"max_accuracy", o.max_accuracy},
              {"entries", entries}};
    return j.dump(2) + "\n";
}

void render_report(const std::vector<RunRecord>& records, std::ostream& out) {
    if (records.empty()) throw RecordError("no records given");
    for (const auto& r : records) {
        if (r.format_version != records.front().format_version) throw RecordError("records mix format versions");
        if (r.dataset.digest != records.front().dataset.digest)
            throw RecordError("records come from different datasets (digest " + r.dataset.digest + " vs " +
                              records.front().dataset.digest + ")");
    }
    const Aggregate a = aggregate(records);
    const auto old_precision = out.precision(10);

    out << "# per-generation (" << a.records << " record" << (a.records == 1 ? "" : "s") << ")\n";
    out << "generation,mean_best_accuracy,std_best_accuracy,mean_support_count,mean_cumulative_evaluations\n";
    for (std::size_t k = 0; k < a.mean_best_accuracy.size(); ++k)
        out << k << ',' << a.mean_best_accuracy[k] << ',' << a.std_best_accuracy[k] << ',' << a.mean_support_count[k]
            << ',' << a.mean_cumulative_evaluations[k] << '\n';

    std::size_t champion = 0;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].generations.back().best_accuracy > records[champion].generations.back().best_accuracy)
            champion = i;
    const auto& best = records[champion];
    out << "\n# final-distribution record=" << champion << " seed=" << best.evolution.seed
        << " depth=" << depth(best.final_circuit) << " fitness=" << best.final_fitness << '\n';
    out << "mask,probability,accuracy\n";
    for (const auto& d : best.final_distribution) out << d.mask.to_string() << ',' << d.probability << ',' << d.accuracy << '\n';

    out << "\n# auc\n";
    out << "records,empirical_auc_mean,empirical_auc_std,predicted_auc,mean_cache_size,mean_final_depth\n";
    out << a.records << ',' << a.mean_auc << ',' << a.std_auc << ',' << a.predicted_auc << ',' << a.mean_cache_size
        << ',' << a.mean_final_depth << '\n';
    out.precision(old_precision);
}

}  // namespace eqfs
