#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eqfs/error.hpp"
#include "eqfs/simulator.hpp"
#include "support.hpp"

using namespace eqfs;
using eqfs::testing::dense_simulate;
using eqfs::testing::max_abs_diff;
using eqfs::testing::random_circuit;
using eqfs::testing::random_state;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("RX(pi) maps |0> to -i|1>") {
    const auto s = apply_gate(Statevector(1), Gate::single(GateKind::RX, 0, pi));
    CHECK(std::abs(s[0]) < 1e-15);
    CHECK(std::abs(s[1] - Amplitude{0.0, -1.0}) < 1e-15);
}

TEST_CASE("RZZ phases |00> by exp(-i theta/2)") {
    const double theta = 0.81;
    const auto s = apply_gate(Statevector(2), Gate::pair(GateKind::RZZ, 0, 1, theta));
    CHECK(std::abs(s[0] - std::polar(1.0, -theta / 2)) < 1e-15);
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(s[i]) == 0.0);
}

TEST_CASE("RYY on non-adjacent qubits matches the dense matrix") {
    Rng rng(3);
    const auto state = random_state(rng, 3);
    const auto gate = Gate::pair(GateKind::RYY, 0, 2, 0.37);
    const auto fast = apply_gate(state, gate);
    const auto dense = multiply(dense_unitary(gate, 3), state.amplitudes());
    CHECK(max_abs_diff(fast.amplitudes(), dense) < 1e-12);
}

TEST_CASE("every kind agrees with its dense matrix on a random 4-qubit state") {
    Rng rng(11);
    const auto state = random_state(rng, 4);
    for (GateKind kind : all_gate_kinds) {
        const Gate g = arity(kind) == 1 ? Gate::single(kind, 2, 1.3) : Gate::pair(kind, 3, 1, -2.1);
        CAPTURE(to_string(kind));
        CHECK(max_abs_diff(apply_gate(state, g).amplitudes(), multiply(dense_unitary(g, 4), state.amplitudes())) < 1e-12);
    }
}

TEST_CASE("invalid operands are rejected") {
    Statevector s(2);
    CHECK_THROWS_AS(s.apply(Gate::single(GateKind::RX, 2, 0.1)), InvalidGateError);
    CHECK_THROWS_AS(s.apply(Gate::single(GateKind::RY, -1, 0.1)), InvalidGateError);
    CHECK_THROWS_AS(s.apply(Gate::pair(GateKind::RXX, 1, 1, 0.1)), InvalidGateError);
    CHECK_THROWS_AS(Gate::single(GateKind::RZZ, 0, 0.1), InvalidGateError);
    CHECK_THROWS_AS(parse_gate_kind("CNOT"), InvalidGateError);
}

TEST_CASE("simulate") {
    SUBCASE("empty circuit leaves |00>") {
        const auto s = simulate(Circuit{2, {}});
        CHECK(s[0] == Amplitude{1.0});
        CHECK(s[1] == Amplitude{});
    }
    SUBCASE("RX(pi) on qubit 1 puts the mass on index 2, rendered 01") {
        const auto s = simulate(Circuit{2, {Gate::single(GateKind::RX, 1, pi)}});
        CHECK(std::norm(s[2]) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(FeatureMask(2, 2).to_string() == "01");
    }
    SUBCASE("five random gates match the composed dense product") {
        Rng rng(5);
        Circuit c{3, {}};
        for (int i = 0; i < 5; ++i) c.gates.push_back(eqfs::testing::random_gate(rng, 3));
        CHECK(max_abs_diff(simulate(c).amplitudes(), dense_simulate(c)) < 1e-10);
    }
}

TEST_CASE("property: norm is preserved for random circuits up to 10 qubits") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 10;
        const auto c = random_circuit(rng, n, 50);
        CHECK(std::abs(simulate(c).norm_squared() - 1.0) < 1e-10);
    }
}

TEST_CASE("property: two-qubit gates are operand-symmetric") {
    Rng rng(77);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (GateKind kind : {GateKind::RXX, GateKind::RYY, GateKind::RZZ}) {
        for (int trial = 0; trial < 10; ++trial) {
            const double a = angle(rng);
            const auto u = dense_unitary(Gate::pair(kind, 0, 2, a), 3);
            const auto v = dense_unitary(Gate::pair(kind, 2, 0, a), 3);
            double worst = 0.0;
            for (std::size_t i = 0; i < u.data.size(); ++i) worst = std::max(worst, std::abs(u.data[i] - v.data[i]));
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("angles are 2pi-periodic up to global phase") {
    const auto g1 = Gate::single(GateKind::RY, 0, 0.4);
    const auto g2 = Gate::single(GateKind::RY, 0, 0.4 + 2 * pi);
    const auto a = apply_gate(Statevector(1), g1);
    const auto b = apply_gate(Statevector(1), g2);
    CHECK(std::abs(a[0] + b[0]) < 1e-12);  // exp(-i pi P) = -I
    CHECK(std::abs(a[1] + b[1]) < 1e-12);
    CHECK(g2.angle == 0.4 + 2 * pi);
}

TEST_CASE("dense_unitary closed forms") {
    SUBCASE("RZ on one qubit is diagonal") {
        const double t = 0.9;
        const auto u = dense_unitary(Gate::single(GateKind::RZ, 0, t), 1);
        CHECK(std::abs(u(0, 0) - std::polar(1.0, -t / 2)) < 1e-15);
        CHECK(std::abs(u(1, 1) - std::polar(1.0, t / 2)) < 1e-15);
        CHECK(std::abs(u(0, 1)) == 0.0);
    }
    SUBCASE("RX(0) is the identity") {
        const auto u = dense_unitary(Gate::single(GateKind::RX, 1, 0.0), 2);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) CHECK(u(r, c) == Amplitude(r == c ? 1.0 : 0.0));
    }
    SUBCASE("RXX has cos on the diagonal and -i sin on the anti-diagonal") {
        const double t = 1.1;
        const auto u = dense_unitary(Gate::pair(GateKind::RXX, 0, 1, t), 2);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) {
                Amplitude want{};
                if (r == c) want = std::cos(t / 2);
                if (r + c == 3) want = Amplitude{0.0, -std::sin(t / 2)};
                CHECK(std::abs(u(r, c) - want) < 1e-15);
            }
    }
    SUBCASE("oracle refuses large registers") {
        CHECK_THROWS_AS(dense_unitary(Gate::single(GateKind::RX, 0, 1.0), 7), OracleLimitError);
    }
}

TEST_CASE("sample") {
    SUBCASE("delta distribution") {
        Rng rng(1);
        const auto d = sample(Statevector(4), 64, rng);
        REQUIRE(d.support() == 1);
        CHECK(d.counts.begin()->first == FeatureMask::all_zeros(4));
        CHECK(d.counts.begin()->second == 64);
    }
    SUBCASE("fair coin stays within three sigma") {
        Rng rng(99);
        const auto s = simulate(Circuit{1, {Gate::single(GateKind::RX, 0, pi / 2)}});
        const auto d = sample(s, 10000, rng);
        const auto zeros = d.counts.at(FeatureMask(1, 0));
        CHECK(zeros >= 4850);
        CHECK(zeros <= 5150);
    }
    SUBCASE("conservation and support bound") {
        Rng rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            const auto c = random_circuit(rng, 5, 12);
            const std::uint64_t shots = 1 + trial * 7;
            const auto d = sample(simulate(c), shots, rng);
            std::uint64_t total = 0;
            for (const auto& [m, k] : d.counts) {
                CHECK(k >= 1);
                total += k;
            }
            CHECK(total == shots);
            CHECK(d.support() <= std::min<std::uint64_t>(shots, 32));
        }
    }
    SUBCASE("zero-probability outcomes never appear") {
        Rng rng(8);
        // |0> or |1> on qubit 2 only: indices 0 and 4.
        const auto s = simulate(Circuit{3, {Gate::single(GateKind::RY, 2, 1.0)}});
        const auto d = sample(s, 5000, rng);
        for (const auto& [m, k] : d.counts) CHECK((m.bits() == 0 || m.bits() == 4));
    }
    SUBCASE("property: total variation shrinks with 1e5 shots") {
        Rng rng(31);
        for (int trial = 0; trial < 5; ++trial) {
            const auto s = random_state(rng, 3);
            const auto d = sample(s, 100000, rng);
            double tv = 0.0;
            for (std::size_t i = 0; i < 8; ++i) {
                const auto it = d.counts.find(FeatureMask(3, i));
                const double freq = it == d.counts.end() ? 0.0 : static_cast<double>(it->second) / 1e5;
                tv += std::abs(freq - std::norm(s[i]));
            }
            CHECK(tv / 2 <= 0.02);
        }
    }
}

TEST_CASE("quasi_probabilities divide exactly") {
    const auto a = FeatureMask::parse("10"), b = FeatureMask::parse("01");
    SampledDistribution d{64, {{a, 1}, {b, 63}}};
    const auto q = quasi_probabilities(d);
    CHECK(q.at(a) == 0.015625);
    CHECK(q.at(b) == 0.984375);

    SampledDistribution half{64, {{a, 32}, {b, 32}}};
    CHECK(quasi_probabilities(half).at(a) == 0.5);
    SampledDistribution one{64, {{a, 64}}};
    CHECK(quasi_probabilities(one).at(a) == 1.0);

    Rng rng(12);
    const auto sampled = sample(simulate(random_circuit(rng, 6, 20)), 97, rng);
    double total = 0.0;
    for (const auto& [m, p] : quasi_probabilities(sampled)) total += p;
    CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("depth") {
    Circuit c{2, {}};
    CHECK(depth(c) == 0);
    c.gates.push_back(Gate::single(GateKind::RX, 0, 0.1));
    c.gates.push_back(Gate::single(GateKind::RY, 1, 0.1));
    CHECK(depth(c) == 1);
    c.gates.push_back(Gate::pair(GateKind::RXX, 0, 1, 0.1));
    CHECK(depth(c) == 2);
    c.gates.push_back(Gate::single(GateKind::RY, 1, 0.1));
    CHECK(depth(c) == 3);
}

TEST_CASE("property: appending a gate never lowers depth and depth <= gate count") {
    Rng rng(50);
    for (int trial = 0; trial < 100; ++trial) {
        Circuit c{6, {}};
        int previous = 0;
        for (int i = 0; i < 15; ++i) {
            c.gates.push_back(eqfs::testing::random_gate(rng, 6));
            const int d = depth(c);
            CHECK(d >= previous);
            CHECK(d <= static_cast<int>(c.gates.size()));
            previous = d;
        }
    }
}

TEST_CASE("feature mask rendering is little-endian, x_0 first") {
    CHECK(FeatureMask(3, 1).to_string() == "100");
    const auto m = FeatureMask::parse("1010001100100");
    CHECK(m.selected() == std::vector<int>{0, 2, 6, 7, 10});
    CHECK(FeatureMask::parse(m.to_string()) == m);
    CHECK_THROWS_AS(FeatureMask::parse("10x"), ContractError);
    CHECK_THROWS_AS(FeatureMask(2, 4), ContractError);
}
