#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eqfs/dataset.hpp"
#include "eqfs/random.hpp"
#include "eqfs/simulator.hpp"

namespace eqfs::testing {

inline Gate random_gate(Rng& rng, int n) {
    std::uniform_int_distribution<int> kind_pick(0, n >= 2 ? 5 : 2);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    std::uniform_real_distribution<double> angle(-2 * M_PI, 2 * M_PI);
    const GateKind kind = all_gate_kinds[kind_pick(rng)];
    if (arity(kind) == 1) return Gate::single(kind, qubit(rng), angle(rng));
    int a = qubit(rng), b = qubit(rng);
    while (b == a) b = qubit(rng);
    return Gate::pair(kind, a, b, angle(rng));
}

inline Circuit random_circuit(Rng& rng, int n, int max_gates) {
    Circuit c{n, {}};
    const int count = std::uniform_int_distribution<int>(0, max_gates)(rng);
    for (int i = 0; i < count; ++i) c.gates.push_back(random_gate(rng, n));
    return c;
}

/// Simulation through the dense Kronecker-product matrices.
inline std::vector<Amplitude> dense_simulate(const Circuit& c) {
    std::vector<Amplitude> v(std::size_t{1} << c.n);
    v[0] = 1.0;
    for (const auto& g : c.gates) v = multiply(dense_unitary(g, c.n), v);
    return v;
}

inline double max_abs_diff(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline Statevector random_state(Rng& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Amplitude> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& a : amps) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(norm);
    return Statevector(n, std::move(amps));
}

/// Two-class data: label = [sum of informative columns > 0]; rows whose sum
/// falls inside +-margin are redrawn. Other columns are pure noise.
inline Dataset planted_dataset(int n, std::size_t rows, const std::set<int>& informative, std::uint64_t seed,
                               double margin = 1.0) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix x(rows, static_cast<std::size_t>(n));
    std::vector<int> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        do {
            sum = 0.0;
            for (int c = 0; c < n; ++c) {
                x(r, static_cast<std::size_t>(c)) = g(rng);
                if (informative.count(c)) sum += x(r, static_cast<std::size_t>(c));
            }
        } while (std::abs(sum) < margin);
        y[r] = sum > 0.0 ? 1 : 0;
    }
    // First-appearance class order, matching the CSV loader.
    if (y.front() == 1)
        for (auto& v : y) v = 1 - v;
    return make_dataset(std::move(x), std::move(y));
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("eqfs_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace eqfs::testing
