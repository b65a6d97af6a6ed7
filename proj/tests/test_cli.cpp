#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eqfs/experiment.hpp"
#include "eqfs/run_record.hpp"
#include "support.hpp"

using namespace eqfs;
namespace fs = std::filesystem;

namespace {

const std::string cli = EQFS_CLI_PATH;
const std::string wine_csv = std::string(EQFS_DATA_DIR) + "/wine.csv";

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    const auto capture = fs::temp_directory_path() / ("eqfs_cli_out_" + std::to_string(::getpid()));
    const int status = std::system((cli + " " + args + " >" + capture.string() + " 2>&1").c_str());
    std::ifstream in(capture);
    std::ostringstream ss;
    ss << in.rdbuf();
    fs::remove(capture);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_csv(const fs::path& p, const Dataset& d) {
    std::ofstream out(p);
    out << "label";
    for (const auto& n : d.feature_names) out << ',' << n;
    out << '\n';
    out.precision(17);
    for (std::size_t r = 0; r < d.rows(); ++r) {
        out << (d.labels[r] ? "yes" : "no");
        for (double v : d.features.row(r)) out << ',' << v;
        out << '\n';
    }
}

/// Splits report output into its '#'-headed blocks.
std::map<std::string, std::vector<std::string>> blocks(const std::string& text) {
    std::map<std::string, std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line, current;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            current = line.substr(2, line.find_first_of(" (", 2) - 2);
            continue;
        }
        out[current].push_back(line);
    }
    return out;
}

std::vector<double> fields(const std::string& row) {
    std::vector<double> v;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            v.push_back(std::stod(cell));
        } catch (...) {
            v.push_back(std::nan(""));
        }
    }
    return v;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    const auto dir = testing::scratch_dir("cli_usage");
    const std::string base = "run --data " + wine_csv + " --out " + dir.string();
    CHECK(run(base + " --shots 0").code == 2);
    CHECK(run(base + " --generations -1").code == 2);
    CHECK(run(base + " --evaluator rbf").code == 2);
    CHECK(run(base + " --test-fraction 1.0").code == 2);
    CHECK(run(base + " --p-insert 0.9").code == 2);
    CHECK(run(base + " --evaluator external").code == 2);
    CHECK(run("run --data /nonexistent.csv --out " + dir.string()).code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("--help").code == 0);
    fs::remove_all(dir);
}

TEST_CASE("run writes records and an aggregate; repeat runs are byte-identical") {
    const auto dir = testing::scratch_dir("cli_run");
    const std::string args = "run --data " + wine_csv +
                             " --label 0 --generations 12 --shots 64 --lambda 6 --mu 1 --seed 7 --repeat 10 --out ";
    REQUIRE(run(args + (dir / "a").string()).code == 0);
    REQUIRE(run(args + (dir / "b").string() + " --threads 3").code == 0);
    for (int i = 0; i < 10; ++i) {
        const auto name = "record_00" + std::to_string(i) + ".json";
        REQUIRE(fs::exists(dir / "a" / name));
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    }
    REQUIRE(fs::exists(dir / "a" / "aggregate.json"));

    SUBCASE("aggregate means are the arithmetic means of the records") {
        const auto agg = nlohmann::json::parse(slurp(dir / "a" / "aggregate.json"));
        std::vector<RunRecord> records;
        for (int i = 0; i < 10; ++i)
            records.push_back(read_run_record((dir / "a" / ("record_00" + std::to_string(i) + ".json")).string()));
        CHECK(records[3].evolution.seed == 10);
        for (std::size_t k = 0; k <= 12; ++k) {
            double sum = 0.0;
            for (const auto& r : records) sum += r.generations[k].best_accuracy;
            CHECK(std::abs(agg["mean_best_accuracy"][k].get<double>() - sum / 10.0) <= 1e-12);
            CHECK(agg["std_best_accuracy"][k].get<double>() >= 0.0);
        }
        double auc = 0.0;
        for (const auto& r : records) auc += r.totals.empirical_auc;
        CHECK(std::abs(agg["mean_auc"].get<double>() - auc / 10.0) <= 1e-12);
        CHECK(agg["wall_clock_seconds"].size() == 10);
    }

    SUBCASE("a single record reports a normalized final distribution") {
        const auto r = run("report " + (dir / "a" / "record_000.json").string());
        REQUIRE(r.code == 0);
        const auto b = blocks(r.out);
        REQUIRE(b.count("final-distribution"));
        double total = 0.0;
        for (std::size_t i = 1; i < b.at("final-distribution").size(); ++i)
            total += fields(b.at("final-distribution")[i])[1];
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("ten-record report: std column non-negative, predicted 384 beside the empirical AUC") {
        std::string paths;
        for (int i = 0; i < 10; ++i) paths += " " + (dir / "a" / ("record_00" + std::to_string(i) + ".json")).string();
        const auto r = run("report" + paths);
        REQUIRE(r.code == 0);
        const auto b = blocks(r.out);
        const auto& gens = b.at("per-generation");
        CHECK(gens.size() == 14);  // header + 13 generations
        for (std::size_t i = 1; i < gens.size(); ++i) CHECK(fields(gens[i])[2] >= 0.0);
        const auto& auc = b.at("auc");
        REQUIRE(auc.size() == 2);
        CHECK(auc[0].find("predicted_auc") != std::string::npos);
        CHECK(fields(auc[1])[3] == 384.0);
        CHECK(fields(auc[1])[1] > 0.0);
    }
    fs::remove_all(dir);
}

TEST_CASE("report refuses corrupt, foreign, or mismatched records") {
    const auto dir = testing::scratch_dir("cli_report");
    REQUIRE(run("run --data " + wine_csv + " --generations 3 --shots 16 --evaluator nearest-centroid --out " +
                (dir / "w").string())
                .code == 0);
    const auto good = (dir / "w" / "record_000.json").string();

    std::ofstream(dir / "corrupt.json") << "{ not json";
    CHECK(run("report " + (dir / "corrupt.json").string()).code == 1);

    auto j = nlohmann::json::parse(slurp(good));
    j["format_version"] = 99;
    std::ofstream(dir / "v99.json") << j.dump();
    CHECK(run("report " + (dir / "v99.json").string()).code == 1);

    j = nlohmann::json::parse(slurp(good));
    j["config"]["dataset"]["digest"] = "0000000000000000";
    std::ofstream(dir / "other.json") << j.dump();
    const auto mixed = run("report " + good + " " + (dir / "other.json").string());
    CHECK(mixed.code == 1);
    CHECK(mixed.out.find("different datasets") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("evaluator failures exit with 1") {
    const auto dir = testing::scratch_dir("cli_external");
    const std::string base = "run --data " + wine_csv + " --generations 2 --shots 8 --evaluator external --out " +
                             dir.string() + " --external-cmd ";
    const auto bad = run(base + "'" + std::string(EQFS_FAKE_EVALUATOR) + " err'");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("no such column") != std::string::npos);
    CHECK(run(base + "'" + std::string(EQFS_FAKE_EVALUATOR) + " ok'").code == 0);
    const auto r = read_run_record((dir / "record_000.json").string());
    CHECK(r.evaluator.kind == EvaluatorKind::external);
    for (const auto& d : r.final_distribution)
        CHECK(d.accuracy == doctest::Approx(static_cast<double>(d.mask.count()) / 13.0));
    fs::remove_all(dir);
}

TEST_CASE("oracle subcommand") {
    const auto dir = testing::scratch_dir("cli_oracle");
    SUBCASE("planted 4-feature set: argmax is exactly the informative pair") {
        write_csv(dir / "planted.csv", testing::planted_dataset(4, 120, {1, 3}, 5, 0.5));
        const auto r = run("oracle --data " + (dir / "planted.csv").string() +
                           " --evaluator nearest-centroid --out " + (dir / "o.json").string());
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(slurp(dir / "o.json"));
        CHECK(j["entries"].size() == 16);
        CHECK(j["argmax"] == "0101");
    }
    SUBCASE("one feature gives two entries") {
        std::ofstream(dir / "one.csv") << "y,x\na,1\nb,2\na,1.5\nb,2.5\na,0.5\nb,3\n";
        REQUIRE(run("oracle --data " + (dir / "one.csv").string() + " --test-fraction 0.34 --out " +
                    (dir / "o.json").string())
                    .code == 0);
        CHECK(nlohmann::json::parse(slurp(dir / "o.json"))["entries"].size() == 2);
    }
    SUBCASE("wine: 8192 entries, max at least the all-features score") {
        REQUIRE(run("oracle --data " + wine_csv + " --threads 4 --out " + (dir / "o.json").string()).code == 0);
        const auto j = nlohmann::json::parse(slurp(dir / "o.json"));
        REQUIRE(j["entries"].size() == 8192);
        CHECK(j["entries"][8191]["mask"] == "1111111111111");
        CHECK(j["max_accuracy"].get<double>() >= j["entries"][8191]["accuracy"].get<double>());
    }
    SUBCASE("more than 20 features is refused") {
        std::ofstream out(dir / "wide.csv");
        out << "y";
        for (int c = 0; c < 21; ++c) out << ",f" << c;
        out << '\n';
        for (int r = 0; r < 10; ++r) {
            out << (r % 2 ? "a" : "b");
            for (int c = 0; c < 21; ++c) out << ',' << r * c;
            out << '\n';
        }
        out.close();
        const auto r = run("oracle --data " + (dir / "wide.csv").string() + " --out " + (dir / "o.json").string());
        CHECK(r.code == 1);
        CHECK(r.out.find("refuses") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("property: run records survive write-then-read unchanged") {
    const auto data = testing::planted_dataset(7, 90, {0, 3}, 12, 0.3);
    const auto prepared = prepare_data(data, "planted", 0.2, 4);
    const auto dir = testing::scratch_dir("cli_roundtrip");
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        ExperimentConfig c;
        c.evolution.seed = seed * 1000003;
        c.evolution.generations = 6;
        c.evolution.shots = 40;
        c.evolution.mutation.sigma_modify = 0.1 + 0.7 * static_cast<double>(seed);
        c.evaluator = {EvaluatorKind::nearest_centroid, 1.0 / 3.0, 17};
        const auto rec = run_experiment(c, prepared).records.front();
        const auto path = (dir / "r.json").string();
        write_run_record(rec, path);
        const auto back = read_run_record(path);
        CHECK(back == rec);
        CHECK(serialize(back) == serialize(rec));
    }
    fs::remove_all(dir);
}
