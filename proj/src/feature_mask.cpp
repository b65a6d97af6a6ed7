#include "eqfs/feature_mask.hpp"

#include <bit>

#include "eqfs/error.hpp"

namespace eqfs {

FeatureMask::FeatureMask(int width, std::uint64_t bits) : width_(width), bits_(bits) {
    if (width < 0 || width > max_width)
        throw ContractError("feature mask width " + std::to_string(width) + " out of range");
    if (width < 64 && (bits >> width) != 0)
        throw ContractError("feature mask has bits beyond its width");
}

FeatureMask FeatureMask::all_ones(int width) {
    return FeatureMask(width, width == 0 ? 0 : (~std::uint64_t{0} >> (64 - width)));
}

FeatureMask FeatureMask::parse(std::string_view text) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1')
            bits |= std::uint64_t{1} << i;
        else if (text[i] != '0')
            throw ContractError("invalid bitstring '" + std::string(text) + "'");
    }
    return FeatureMask(static_cast<int>(text.size()), bits);
}

int FeatureMask::count() const noexcept { return std::popcount(bits_); }

std::vector<int> FeatureMask::selected() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (int i = 0; i < width_; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

std::string FeatureMask::to_string() const {
    std::string s(static_cast<std::size_t>(width_), '0');
    for (int i = 0; i < width_; ++i)
        if (test(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

}  // namespace eqfs
