#include "eqfs/run_record.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eqfs/error.hpp"

namespace eqfs {

using Json = nlohmann::ordered_json;

namespace {

Json gate_json(const Gate& g) {
    Json q = Json::array();
    for (int v : g.operands()) q.push_back(v);
    return {{"kind", std::string(to_string(g.kind))}, {"qubits", q}, {"angle", g.angle}};
}

Gate gate_from(const Json& j) {
    const auto kind = parse_gate_kind(j.at("kind").get<std::string>());
    const auto q = j.at("qubits").get<std::vector<int>>();
    if (q.size() != static_cast<std::size_t>(arity(kind))) throw RecordError("gate operand count mismatch");
    const double angle = j.at("angle").get<double>();
    return arity(kind) == 1 ? Gate::single(kind, q[0], angle) : Gate::pair(kind, q[0], q[1], angle);
}

Json to_json(const RunRecord& r) {
    const auto& e = r.evolution;
    Json evolution = {{"n", e.n},
                      {"mu", e.mu},
                      {"lambda", e.lambda},
                      {"generations", e.generations},
                      {"shots", e.shots},
                      {"seed", e.seed},
                      {"mutation",
                       {{"p_insert", e.mutation.p_insert},
                        {"p_modify", e.mutation.p_modify},
                        {"p_delete", e.mutation.p_delete},
                        {"p_swap", e.mutation.p_swap},
                        {"sigma_modify", e.mutation.sigma_modify}}}};
    Json evaluator = {{"kind", to_string(r.evaluator.kind)},
                      {"C", r.evaluator.C},
                      {"epochs", r.evaluator.epochs},
                      {"command", r.evaluator.command},
                      {"timeout_seconds", r.evaluator.timeout_seconds}};
    Json dataset = {{"path", r.dataset.path},         {"label", r.dataset.label},
                    {"digest", r.dataset.digest},     {"rows", r.dataset.rows},
                    {"features", r.dataset.features}, {"test_fraction", r.dataset.test_fraction},
                    {"split_seed", r.dataset.split_seed}};

    Json generations = Json::array();
    for (const auto& g : r.generations)
        generations.push_back({{"generation", g.generation},
                               {"best_fitness", g.best_fitness},
                               {"parent_fitness", g.parent_fitness},
                               {"support_count", g.support_count},
                               {"new_evaluations", g.new_evaluations},
                               {"best_mask", g.best_mask.to_string()},
                               {"best_accuracy", g.best_accuracy},
                               {"parent_depth", g.parent_depth}});
    Json gates = Json::array();
    for (const auto& g : r.final_circuit.gates) gates.push_back(gate_json(g));
    Json distribution = Json::array();
    for (const auto& d : r.final_distribution)
        distribution.push_back({{"mask", d.mask.to_string()},
                                {"count", d.count},
                                {"probability", d.probability},
                                {"accuracy", d.accuracy}});

    return {{"format_version", r.format_version},
            {"config", {{"evolution", evolution}, {"evaluator", evaluator}, {"dataset", dataset}}},
            {"generations", generations},
            {"final_circuit", {{"n", r.final_circuit.n}, {"depth", depth(r.final_circuit)}, {"gates", gates}}},
            {"final_fitness", r.final_fitness},
            {"final_distribution", distribution},
            {"totals",
             {{"cache_size", r.totals.cache_size},
              {"empirical_auc", r.totals.empirical_auc},
              {"predicted_auc", r.totals.predicted_auc},
              {"cumulative_evaluations", r.totals.cumulative_evaluations}}}};
}

RunRecord from_json(const Json& j) {
    RunRecord r;
    r.format_version = j.at("format_version").get<int>();
    if (r.format_version != run_record_version)
        throw RecordError("unsupported record version " + std::to_string(r.format_version));

    const auto& cfg = j.at("config");
    const auto& e = cfg.at("evolution");
    r.evolution.n = e.at("n").get<int>();
    r.evolution.mu = e.at("mu").get<int>();
    r.evolution.lambda = e.at("lambda").get<int>();
    r.evolution.generations = e.at("generations").get<int>();
    r.evolution.shots = e.at("shots").get<std::uint64_t>();
    r.evolution.seed = e.at("seed").get<std::uint64_t>();
    const auto& m = e.at("mutation");
    r.evolution.mutation = {m.at("p_insert").get<double>(), m.at("p_modify").get<double>(),
                            m.at("p_delete").get<double>(), m.at("p_swap").get<double>(),
                            m.at("sigma_modify").get<double>()};

    const auto& ev = cfg.at("evaluator");
    r.evaluator.kind = parse_evaluator_kind(ev.at("kind").get<std::string>());
    r.evaluator.C = ev.at("C").get<double>();
    r.evaluator.epochs = ev.at("epochs").get<int>();
    r.evaluator.command = ev.at("command").get<std::string>();
    r.evaluator.timeout_seconds = ev.at("timeout_seconds").get<double>();

    const auto& ds = cfg.at("dataset");
    r.dataset = {ds.at("path").get<std::string>(),         ds.at("label").get<std::string>(),
                 ds.at("digest").get<std::string>(),       ds.at("rows").get<std::uint64_t>(),
                 ds.at("features").get<int>(),             ds.at("test_fraction").get<double>(),
                 ds.at("split_seed").get<std::uint64_t>()};

    for (const auto& g : j.at("generations")) {
        GenerationEntry entry;
        entry.generation = g.at("generation").get<int>();
        entry.best_fitness = g.at("best_fitness").get<double>();
        entry.parent_fitness = g.at("parent_fitness").get<std::vector<double>>();
        entry.support_count = g.at("support_count").get<std::uint64_t>();
        entry.new_evaluations = g.at("new_evaluations").get<std::uint64_t>();
        entry.best_mask = FeatureMask::parse(g.at("best_mask").get<std::string>());
        entry.best_accuracy = g.at("best_accuracy").get<double>();
        entry.parent_depth = g.at("parent_depth").get<int>();
        r.generations.push_back(std::move(entry));
    }

    const auto& fc = j.at("final_circuit");
    r.final_circuit.n = fc.at("n").get<int>();
    for (const auto& g : fc.at("gates")) {
        r.final_circuit.gates.push_back(gate_from(g));
        validate(r.final_circuit.gates.back(), r.final_circuit.n);
    }
    r.final_fitness = j.at("final_fitness").get<double>();
    for (const auto& d : j.at("final_distribution"))
        r.final_distribution.push_back({FeatureMask::parse(d.at("mask").get<std::string>()),
                                        d.at("count").get<std::uint64_t>(), d.at("probability").get<double>(),
                                        d.at("accuracy").get<double>()});

    const auto& t = j.at("totals");
    r.totals = {t.at("cache_size").get<std::uint64_t>(), t.at("empirical_auc").get<double>(),
                t.at("predicted_auc").get<double>(), t.at("cumulative_evaluations").get<std::uint64_t>()};
    return r;
}

}  // namespace

std::string serialize(const RunRecord& record) { return to_json(record).dump(2) + "\n"; }

RunRecord parse_run_record(const std::string& text) {
    try {
        return from_json(Json::parse(text));
    } catch (const RecordError&) {
        throw;
    } catch (const std::exception& e) {
        throw RecordError(std::string("corrupt run record: ") + e.what());
    }
}

RunRecord read_run_record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RecordError("cannot open record '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_run_record(ss.str());
    } catch (const RecordError& e) {
        throw RecordError(path + ": " + e.what());
    }
}

void write_run_record(const RunRecord& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RecordError("cannot write record '" + path + "'");
    out << serialize(record);
    if (!out) throw RecordError("failed writing record '" + path + "'");
}

}  // namespace eqfs
