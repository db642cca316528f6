#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace smpds {

// Dense index into one of the identifier tables of a system.
template <typename Tag>
struct Id {
    std::uint32_t value = std::numeric_limits<std::uint32_t>::max();

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}

    [[nodiscard]] constexpr bool valid() const { return value != std::numeric_limits<std::uint32_t>::max(); }
    [[nodiscard]] constexpr std::size_t index() const { return value; }

    friend constexpr auto operator<=>(Id, Id) = default;
};

struct StateTag;
struct SymbolTag;
struct RuleTag;

using StateId = Id<StateTag>;   // control point
using SymbolId = Id<SymbolTag>; // stack symbol
using RuleId = Id<RuleTag>;     // transition or self-modifying rule

inline void hash_combine(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

} // namespace smpds

template <typename Tag>
struct std::hash<smpds::Id<Tag>> {
    std::size_t operator()(smpds::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
