#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace eqfs {

/// Fixed-width bit vector selecting dataset columns. Bit i is feature i and
/// coincides with bit i of a statevector basis index.
class FeatureMask {
public:
    static constexpr int max_width = 62;

    FeatureMask() = default;
    FeatureMask(int width, std::uint64_t bits);

    static FeatureMask all_ones(int width);
    static FeatureMask all_zeros(int width) { return FeatureMask(width, 0); }
    /// Parses a bitstring written x_0 first, e.g. "1010001100100".
    static FeatureMask parse(std::string_view text);

    int width() const noexcept { return width_; }
    std::uint64_t bits() const noexcept { return bits_; }
    bool test(int i) const noexcept { return ((bits_ >> i) & 1U) != 0; }
    int count() const noexcept;
    bool none() const noexcept { return bits_ == 0; }
    std::vector<int> selected() const;

    /// Renders x_0 leftmost.
    std::string to_string() const;

    auto operator<=>(const FeatureMask&) const = default;

private:
    int width_ = 0;
    std::uint64_t bits_ = 0;
};

}  // namespace eqfs

template <>
struct std::hash<eqfs::FeatureMask> {
    std::size_t operator()(const eqfs::FeatureMask& m) const noexcept {
        return std::hash<std::uint64_t>{}(m.bits() ^ (static_cast<std::uint64_t>(m.width()) << 58));
    }
};
