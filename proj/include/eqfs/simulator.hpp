#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "eqfs/feature_mask.hpp"
#include "eqfs/random.hpp"

namespace eqfs {

using Amplitude = std::complex<double>;

/// Gate basis: three single-qubit and three two-qubit Pauli rotations.
enum class GateKind : std::uint8_t { RX, RY, RZ, RXX, RYY, RZZ };

inline constexpr GateKind all_gate_kinds[] = {GateKind::RX,  GateKind::RY,  GateKind::RZ,
                                              GateKind::RXX, GateKind::RYY, GateKind::RZZ};

constexpr int arity(GateKind kind) noexcept {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ ? 1 : 2;
}

std::string_view to_string(GateKind kind) noexcept;
GateKind parse_gate_kind(std::string_view name);

/// exp(-i angle P / 2) for the Pauli string P named by kind, acting on
/// qubits[0] (and qubits[1] for two-qubit kinds). Angles are kept as drawn.
struct Gate {
    GateKind kind = GateKind::RX;
    std::array<int, 2> qubits{0, 0};
    double angle = 0.0;

    static Gate single(GateKind kind, int qubit, double angle);
    static Gate pair(GateKind kind, int first, int second, double angle);

    std::span<const int> operands() const noexcept {
        return {qubits.data(), static_cast<std::size_t>(arity(kind))};
    }

    bool operator==(const Gate&) const = default;
};

/// Throws InvalidGateError unless every operand is in [0, n) and distinct.
void validate(const Gate& gate, int n);

struct Circuit {
    int n = 0;
    std::vector<Gate> gates;

    bool operator==(const Circuit&) const = default;
};

class Statevector {
public:
    /// |0...0> on n qubits.
    explicit Statevector(int n);
    Statevector(int n, std::vector<Amplitude> amplitudes);

    int qubits() const noexcept { return n_; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    const Amplitude& operator[](std::size_t i) const noexcept { return amps_[i]; }
    double norm_squared() const noexcept;

    /// In-place stride update; O(2^n) per gate.
    void apply(const Gate& gate);

private:
    int n_;
    std::vector<Amplitude> amps_;
};

Statevector apply_gate(Statevector state, const Gate& gate);
Statevector simulate(const Circuit& circuit);

/// Shot histogram keyed by measured mask. Keys have count >= 1.
struct SampledDistribution {
    std::uint64_t shots = 0;
    std::map<FeatureMask, std::uint64_t> counts;

    std::size_t support() const noexcept { return counts.size(); }
    bool operator==(const SampledDistribution&) const = default;
};

SampledDistribution sample(const Statevector& state, std::uint64_t shots, Rng& rng);

std::map<FeatureMask, double> quasi_probabilities(const SampledDistribution& dist);

/// Wire-scheduling depth: a gate lands one layer above the latest layer of
/// any qubit it touches.
int depth(const Circuit& circuit);

/// Row-major 2^n x 2^n matrix.
struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<Amplitude> data;

    Amplitude& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
    const Amplitude& operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
};

inline constexpr int dense_oracle_max_qubits = 6;

/// Full unitary of one gate, cos(a/2) I - i sin(a/2) P with P a Kronecker
/// product of Paulis (qubit n-1 leftmost). Test oracle only.
DenseMatrix dense_unitary(const Gate& gate, int n);

std::vector<Amplitude> multiply(const DenseMatrix& m, std::span<const Amplitude> v);

}  // namespace eqfs
