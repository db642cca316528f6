#pragma once

#include "smpds/budget.hpp"
#include "smpds/pautomaton.hpp"

#include <optional>

namespace smpds {

// ---------------------------------------------------------------------------
// Phase closure

enum class ClosureDirection {
    Forward,  // θ ↦ (θ \ {r1}) ∪ {r2} for every applicable p -(r1, r2)-> p' in θ
    Backward, // every θ' that the forward map sends into the set
    Both,
};

// Least set of phases containing `seeds` and closed in the given direction.
// Sorted by Phase::operator<.
std::vector<Phase> phase_closure(const Smpds& sys, const std::vector<Phase>& seeds,
                                 ClosureDirection direction = ClosureDirection::Forward, Budget* budget = nullptr);

// θ' = (θ \ {r1}) ∪ {r2} if the self-modifying rule m can fire in θ.
std::optional<Phase> fire(const Smpds& sys, RuleId m, Phase theta);

// ---------------------------------------------------------------------------
// Explicit PDS over paired control points (p, θ)

struct PdsState {
    StateId control;
    Phase phase;
    friend bool operator==(const PdsState&, const PdsState&) = default;
};

struct PairedRule {
    std::uint32_t lhs; // index into Pds::states
    SymbolId lhs_symbol;
    std::uint32_t rhs;
    StackWord rhs_word;
    RuleId origin;    // the SM-PDS rule it was built from
};

struct Pds {
    std::vector<PdsState> states;
    std::vector<PairedRule> rules;
    std::size_t num_symbols = 0;

    std::unordered_map<std::uint64_t, std::uint32_t> index; // (control, phase handle) -> state
    std::vector<std::vector<std::uint32_t>> out;             // state -> rules leaving it

    [[nodiscard]] std::optional<std::uint32_t> find(StateId p, Phase theta) const;
};

// One paired control point per (p, θ) with θ in `phases`; every rule r ∈ θ
// yields its paired copies. With require_closed, a self-modifying rule that
// leads out of `phases` is an error; otherwise such rules are dropped (this
// is the right thing for a backward-closed set used for pre*).
Pds to_pds(const Smpds& sys, const std::vector<Phase>& phases, bool require_closed = true, Budget* budget = nullptr);

// Successors of (<p, w>, θ) read through the paired PDS. A pair outside
// the translated set has none.
ConfigurationSet pds_step(const Pds& pds, const Configuration& c);

// Classical saturation on a paired PDS (rules must push at most two
// symbols). The automaton's initial state for pair i is
// aut.initial(states[i].control, states[i].phase), so results compare
// directly with the SM-PDS procedures.
PAutomaton pds_prestar(const Pds& pds, const PAutomaton& aut, Budget* budget = nullptr);
PAutomaton pds_poststar(const Pds& pds, const PAutomaton& aut, Budget* budget = nullptr);

// Text format:
//   state <p>@<phase>
//   rule <rid>@<phase>[/<gamma>]: <p>@<phase> <gamma> -> <p'>@<phase'> [<g1> ...]
std::string print_pds(const Smpds& sys, const Pds& pds);

// ---------------------------------------------------------------------------
// Symbolic PDS

struct PhaseRelation {
    enum class Kind : std::uint8_t { Identity, Modify };

    Kind kind = Kind::Identity;
    RuleId guard;   // must be enabled in the source phase
    RuleId removed; // Modify only
    RuleId added;   // Modify only

    // θ1 R θ2
    [[nodiscard]] bool relates(Phase from, Phase to) const;
    // The unique θ2 with θ1 R θ2, if any.
    [[nodiscard]] std::optional<Phase> image(Phase from) const;
};

struct SymbolicRule {
    StateId lhs_state;
    SymbolId lhs_symbol;
    StateId rhs_state;
    StackWord rhs_word;
    PhaseRelation relation;
};

struct SymbolicPds {
    std::size_t num_states = 0;
    std::size_t num_symbols = 0;
    std::vector<SymbolicRule> rules;
};

SymbolicPds to_symbolic_pds(const Smpds& sys);
ConfigurationSet symbolic_step(const SymbolicPds& spds, const Configuration& c);

// Text format:
//   srule: <p> <gamma> -> <p'> [<g1> ...] [id <rid>]
//   srule: <p> <gamma> -> <p'> <gamma> [modify <rid> <rid1> <rid2>]
std::string print_symbolic_pds(const Smpds& sys, const SymbolicPds& spds);

// ---------------------------------------------------------------------------

// The same program read as a plain PDS: every p -(r1, r2)-> p' becomes the
// |Γ| rules <p, γ> ↪ <p', γ>, enabled wherever the original rule was.
// Phases and configurations are carried over through `map`.
struct Erased {
    Smpds system;
    std::vector<std::vector<RuleId>> rule_map; // old RuleId -> new RuleIds

    [[nodiscard]] Phase map(Phase p) const;
};

Erased erase_self_modification(const Smpds& sys);

} // namespace smpds
