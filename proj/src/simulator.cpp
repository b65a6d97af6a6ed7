#include "eqfs/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eqfs/error.hpp"

namespace eqfs {

namespace {

constexpr Amplitude imag_unit{0.0, 1.0};

}  // namespace

std::string_view to_string(GateKind kind) noexcept {
    switch (kind) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::RXX: return "RXX";
        case GateKind::RYY: return "RYY";
        case GateKind::RZZ: return "RZZ";
    }
    return "?";
}

GateKind parse_gate_kind(std::string_view name) {
    for (GateKind k : all_gate_kinds)
        if (to_string(k) == name) return k;
    throw InvalidGateError("unknown gate kind '" + std::string(name) + "'");
}

Gate Gate::single(GateKind kind, int qubit, double angle) {
    if (arity(kind) != 1) throw InvalidGateError(std::string(to_string(kind)) + " takes two qubits");
    return Gate{kind, {qubit, qubit}, angle};
}

Gate Gate::pair(GateKind kind, int first, int second, double angle) {
    if (arity(kind) != 2) throw InvalidGateError(std::string(to_string(kind)) + " takes one qubit");
    return Gate{kind, {first, second}, angle};
}

void validate(const Gate& gate, int n) {
    for (int q : gate.operands())
        if (q < 0 || q >= n)
            throw InvalidGateError("qubit " + std::to_string(q) + " out of range for " +
                                   std::to_string(n) + " qubits");
    if (arity(gate.kind) == 2 && gate.qubits[0] == gate.qubits[1])
        throw InvalidGateError("two-qubit gate needs distinct operands");
}

Statevector::Statevector(int n) : n_(n) {
    if (n < 0 || n > FeatureMask::max_width) throw ContractError("qubit count out of range");
    amps_.assign(std::size_t{1} << n, Amplitude{});
    amps_[0] = 1.0;
}

Statevector::Statevector(int n, std::vector<Amplitude> amplitudes) : n_(n), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::size_t{1} << n)) throw ContractError("amplitude count must be 2^n");
}

double Statevector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

void Statevector::apply(const Gate& gate) {
    validate(gate, n_);
    const double c = std::cos(gate.angle / 2);
    const double s = std::sin(gate.angle / 2);
    const std::size_t dim = amps_.size();

    if (arity(gate.kind) == 1) {
        const std::size_t bit = std::size_t{1} << gate.qubits[0];
        if (gate.kind == GateKind::RZ) {
            const Amplitude p0{c, -s}, p1{c, s};
            for (std::size_t i = 0; i < dim; ++i) amps_[i] *= (i & bit) ? p1 : p0;
            return;
        }
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            Amplitude& a0 = amps_[i];
            Amplitude& a1 = amps_[i | bit];
            const Amplitude x = a0, y = a1;
            if (gate.kind == GateKind::RX) {
                a0 = c * x - imag_unit * s * y;
                a1 = c * y - imag_unit * s * x;
            } else {  // RY
                a0 = c * x - s * y;
                a1 = s * x + c * y;
            }
        }
        return;
    }

    const std::size_t ba = std::size_t{1} << gate.qubits[0];
    const std::size_t bb = std::size_t{1} << gate.qubits[1];
    if (gate.kind == GateKind::RZZ) {
        const Amplitude even{c, -s}, odd{c, s};
        for (std::size_t i = 0; i < dim; ++i)
            amps_[i] *= (((i & ba) != 0) != ((i & bb) != 0)) ? odd : even;
        return;
    }
    // XX and YY both swap |00>,|11> and |01>,|10>; YY flips the sign on the
    // |00>,|11> pair.
    const double same_sign = gate.kind == GateKind::RXX ? 1.0 : -1.0;
    const Amplitude same = -imag_unit * s * same_sign;
    const Amplitude diff = -imag_unit * s;
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & (ba | bb)) continue;
        Amplitude& a00 = amps_[i];
        Amplitude& a01 = amps_[i | bb];
        Amplitude& a10 = amps_[i | ba];
        Amplitude& a11 = amps_[i | ba | bb];
        const Amplitude v00 = a00, v01 = a01, v10 = a10, v11 = a11;
        a00 = c * v00 + same * v11;
        a11 = c * v11 + same * v00;
        a01 = c * v01 + diff * v10;
        a10 = c * v10 + diff * v01;
    }
}

Statevector apply_gate(Statevector state, const Gate& gate) {
    state.apply(gate);
    return state;
}

Statevector simulate(const Circuit& circuit) {
    Statevector state(circuit.n);
    for (const auto& g : circuit.gates) state.apply(g);
    return state;
}

SampledDistribution sample(const Statevector& state, std::uint64_t shots, Rng& rng) {
    if (shots == 0) throw ContractError("shots must be positive");
    std::vector<double> cumulative(state.size());
    double total = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        total += std::norm(state[i]);
        cumulative[i] = total;
    }
    std::uniform_real_distribution<double> uniform(0.0, total);
    SampledDistribution dist;
    dist.shots = shots;
    for (std::uint64_t k = 0; k < shots; ++k) {
        const double u = uniform(rng);
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            // u rounded up onto the total; land on the last cell with mass.
            do --it;
            while (it != cumulative.begin() && *it == *(it - 1));
        }
        auto index = static_cast<std::uint64_t>(it - cumulative.begin());
        ++dist.counts[FeatureMask(state.qubits(), index)];
    }
    return dist;
}

std::map<FeatureMask, double> quasi_probabilities(const SampledDistribution& dist) {
    if (dist.shots == 0) throw ContractError("distribution has no shots");
    std::map<FeatureMask, double> out;
    const auto shots = static_cast<double>(dist.shots);
    for (const auto& [mask, count] : dist.counts) out.emplace(mask, static_cast<double>(count) / shots);
    return out;
}

int depth(const Circuit& circuit) {
    std::vector<int> layer(static_cast<std::size_t>(std::max(circuit.n, 0)), 0);
    int deepest = 0;
    for (const auto& g : circuit.gates) {
        int at = 0;
        for (int q : g.operands()) at = std::max(at, layer.at(static_cast<std::size_t>(q)));
        ++at;
        for (int q : g.operands()) layer[static_cast<std::size_t>(q)] = at;
        deepest = std::max(deepest, at);
    }
    return deepest;
}

namespace {

using Pauli2 = std::array<Amplitude, 4>;

Pauli2 pauli_for(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
        case GateKind::RXX: return {0.0, 1.0, 1.0, 0.0};
        case GateKind::RY:
        case GateKind::RYY: return {0.0, -imag_unit, imag_unit, 0.0};
        case GateKind::RZ:
        case GateKind::RZZ: return {1.0, 0.0, 0.0, -1.0};
    }
    return {};
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out{a.dim * b.dim, std::vector<Amplitude>(a.dim * b.dim * a.dim * b.dim)};
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j)
            for (std::size_t k = 0; k < b.dim; ++k)
                for (std::size_t l = 0; l < b.dim; ++l)
                    out(i * b.dim + k, j * b.dim + l) = a(i, j) * b(k, l);
    return out;
}

}  // namespace

DenseMatrix dense_unitary(const Gate& gate, int n) {
    if (n > dense_oracle_max_qubits)
        throw OracleLimitError("dense oracle limited to " + std::to_string(dense_oracle_max_qubits) +
                               " qubits");
    validate(gate, n);
    const Pauli2 p = pauli_for(gate.kind);
    const DenseMatrix identity{2, {1.0, 0.0, 0.0, 1.0}};
    const DenseMatrix pauli{2, {p.begin(), p.end()}};

    DenseMatrix pstring{1, {1.0}};
    for (int q = n - 1; q >= 0; --q) {
        const auto ops = gate.operands();
        const bool acted = std::find(ops.begin(), ops.end(), q) != ops.end();
        pstring = kron(pstring, acted ? pauli : identity);
    }
    const double c = std::cos(gate.angle / 2);
    const double s = std::sin(gate.angle / 2);
    DenseMatrix u{pstring.dim, std::vector<Amplitude>(pstring.data.size())};
    for (std::size_t r = 0; r < u.dim; ++r)
        for (std::size_t col = 0; col < u.dim; ++col)
            u(r, col) = (r == col ? Amplitude{c} : Amplitude{}) - imag_unit * s * pstring(r, col);
    return u;
}

std::vector<Amplitude> multiply(const DenseMatrix& m, std::span<const Amplitude> v) {
    if (v.size() != m.dim) throw ContractError("dimension mismatch");
    std::vector<Amplitude> out(m.dim);
    for (std::size_t r = 0; r < m.dim; ++r) {
        Amplitude acc{};
        for (std::size_t c = 0; c < m.dim; ++c) acc += m(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

}  // namespace eqfs
