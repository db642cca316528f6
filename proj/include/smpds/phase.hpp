#pragma once

#include "smpds/ids.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace smpds {

// Interned set of rule identifiers: the set of rules currently enabled.
//
// All phases live in one process-wide table keyed by their sorted member
// list, so two phases with the same members share a handle and compare
// equal in O(1). Reads of published phases are lock-free; inserts are
// serialized.
class Phase {
public:
    Phase();

    static Phase of(std::vector<RuleId> members);
    static Phase of(std::initializer_list<RuleId> members) { return of(std::vector<RuleId>(members)); }
    static Phase empty() { return of(std::vector<RuleId>{}); }

    // Sorted, duplicate-free.
    [[nodiscard]] std::span<const RuleId> members() const;
    [[nodiscard]] std::size_t size() const { return members().size(); }
    [[nodiscard]] bool contains(RuleId r) const;

    // (θ \ {removed}) ∪ {added}
    [[nodiscard]] Phase updated(RuleId removed, RuleId added) const;
    [[nodiscard]] Phase with(RuleId r) const;
    [[nodiscard]] Phase without(RuleId r) const;
    [[nodiscard]] Phase united(std::span<const RuleId> extra) const;

    [[nodiscard]] std::uint32_t handle() const { return handle_; }

    friend bool operator==(Phase a, Phase b) { return a.handle_ == b.handle_; }
    // Orders by member list, not by handle, so printed output is independent
    // of interning order.
    friend bool operator<(Phase a, Phase b);

    // Number of distinct phases interned so far in this process.
    static std::size_t interned_count();

private:
    explicit Phase(std::uint32_t h) : handle_(h) {}
    std::uint32_t handle_;
};

} // namespace smpds

template <>
struct std::hash<smpds::Phase> {
    std::size_t operator()(smpds::Phase p) const noexcept { return std::hash<std::uint32_t>{}(p.handle()); }
};
