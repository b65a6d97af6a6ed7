// eqfs: evolve circuits over feature masks, brute-force small problems,
// and summarize run records.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eqfs/error.hpp"
#include "eqfs/experiment.hpp"

namespace {

constexpr int exit_usage = 2;
constexpr int exit_failure = 1;

struct DataFlags {
    std::string path;
    std::string label = "0";
    double test_fraction = 0.2;
    std::uint64_t split_seed = 0;
    std::string evaluator = "linear-svm";
    std::string external_cmd;
    double C = 1.0;
    int epochs = 200;
    double timeout = 60.0;
    int threads = 1;
};

void add_data_flags(CLI::App& cmd, DataFlags& f) {
    cmd.add_option("--data", f.path, "CSV dataset with a header row")->required()->check(CLI::ExistingFile);
    cmd.add_option("--label", f.label, "label column, header name or 0-based index")->capture_default_str();
    cmd.add_option("--test-fraction", f.test_fraction, "held-out fraction")
        ->capture_default_str()
        ->check(CLI::Validator(
            [](std::string& s) -> std::string {
                double v = 0.0;
                return CLI::detail::lexical_cast(s, v) && v > 0.0 && v < 1.0 ? "" : "must lie strictly between 0 and 1";
            },
            "(0, 1)"));
    cmd.add_option("--split-seed", f.split_seed, "seed for the stratified split")->capture_default_str();
    cmd.add_option("--evaluator", f.evaluator, "mask scorer")
        ->capture_default_str()
        ->check(CLI::IsMember({"linear-svm", "nearest-centroid", "external"}));
    cmd.add_option("--external-cmd", f.external_cmd, "shell command of an external evaluator process");
    cmd.add_option("--C", f.C, "linear-svm regularization strength")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--epochs", f.epochs, "linear-svm epochs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--timeout", f.timeout, "external evaluator timeout per mask, seconds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--threads", f.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

eqfs::EvaluatorSpec evaluator_spec(const DataFlags& f) {
    eqfs::EvaluatorSpec spec;
    spec.kind = eqfs::parse_evaluator_kind(f.evaluator);
    spec.C = f.C;
    spec.epochs = f.epochs;
    spec.command = f.external_cmd;
    spec.timeout_seconds = f.timeout;
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary quantum feature selection"};
    app.require_subcommand(1);

    DataFlags run_flags;
    eqfs::ExperimentConfig experiment;
    auto& evo = experiment.evolution;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "run seeded evolution experiments");
    add_data_flags(*run, run_flags);
    run->add_option("--generations", evo.generations, "generations K")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--shots", evo.shots, "shots m per individual")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--mu", evo.mu, "parents kept")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--lambda", evo.lambda, "offspring per generation")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--seed", evo.seed, "base seed; repeat i uses seed + i")->capture_default_str();
    run->add_option("--repeat", experiment.repeat, "independent runs")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--p-insert", evo.mutation.p_insert)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    run->add_option("--p-modify", evo.mutation.p_modify)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    run->add_option("--p-delete", evo.mutation.p_delete)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    run->add_option("--p-swap", evo.mutation.p_swap)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    run->add_option("--sigma", evo.mutation.sigma_modify, "std. dev. of modify angle steps")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_dir, "output directory for records")->required();

    DataFlags oracle_flags;
    std::string oracle_out;
    auto* oracle = app.add_subcommand("oracle", "score every feature mask (n <= 20)");
    add_data_flags(*oracle, oracle_flags);
    oracle->add_option("--out", oracle_out, "output JSON file")->required();

    std::vector<std::string> report_paths;
    auto* report = app.add_subcommand("report", "summarize run records as CSV blocks");
    report->add_option("records", report_paths, "run record files")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (run->parsed()) {
            const auto spec = evaluator_spec(run_flags);
            try {
                eqfs::validate(evo.mutation);
                eqfs::validate(spec);
            } catch (const eqfs::ContractError& e) {
                std::cerr << "usage error: " << e.what() << '\n';
                return exit_usage;
            }
            experiment.evaluator = spec;
            experiment.threads = run_flags.threads;
            experiment.out_dir = out_dir;
            const auto prepared =
                eqfs::prepare_data(run_flags.path, run_flags.label, run_flags.test_fraction, run_flags.split_seed);
            const auto result = eqfs::run_experiment(experiment, prepared);
            std::cout << "wrote " << result.records.size() << " record(s) and aggregate.json to " << out_dir << '\n'
                      << "mean final best accuracy " << result.summary.mean_best_accuracy.back() << ", mean AUC "
                      << result.summary.mean_auc << " (predicted " << result.summary.predicted_auc << ")\n";
        } else if (oracle->parsed()) {
            const auto spec = evaluator_spec(oracle_flags);
            try {
                eqfs::validate(spec);
            } catch (const eqfs::ContractError& e) {
                std::cerr << "usage error: " << e.what() << '\n';
                return exit_usage;
            }
            const auto prepared = eqfs::prepare_data(oracle_flags.path, oracle_flags.label, oracle_flags.test_fraction,
                                                     oracle_flags.split_seed);
            const auto record = eqfs::run_oracle(prepared, spec, oracle_flags.threads);
            std::ofstream out(oracle_out, std::ios::binary | std::ios::trunc);
            out << eqfs::serialize(record);
            if (!out) throw eqfs::RecordError("failed writing " + oracle_out);
            std::cout << "argmax " << record.argmax.to_string() << " accuracy " << record.max_accuracy << " over "
                      << record.accuracies.size() << " masks\n";
        } else if (report->parsed()) {
            std::vector<eqfs::RunRecord> records;
            for (const auto& p : report_paths) records.push_back(eqfs::read_run_record(p));
            eqfs::render_report(records, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return 0;
}
