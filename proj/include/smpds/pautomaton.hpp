#pragma once

#include "smpds/model.hpp"

#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace smpds {

struct AutStateTag;
using AutStateId = Id<AutStateTag>;

// Label of an ε-transition.
inline constexpr SymbolId kEpsilon{};

struct AutState {
    enum class Kind : std::uint8_t { Initial, Plain, Generated };

    Kind kind = Kind::Plain;
    StateId control;   // Initial, Generated
    SymbolId symbol;   // Generated
    Phase phase;       // Initial, Generated
    std::string label; // Plain
};

struct Transition {
    AutStateId from;
    SymbolId label; // kEpsilon for ε
    AutStateId to;

    friend bool operator==(const Transition&, const Transition&) = default;
};

struct TransitionHash {
    std::size_t operator()(const Transition& t) const noexcept {
        std::size_t seed = t.from.value;
        hash_combine(seed, t.label.value);
        hash_combine(seed, t.to.value);
        return seed;
    }
};

// Finite automaton over Γ whose initial states are the pairs (p, θ); it
// accepts (<p, w>, θ) iff w labels a path from (p, θ) to a final state.
// Initial, plain and generated states share one table and are found by key.
class PAutomaton {
public:
    PAutomaton() = default;
    PAutomaton(const PAutomaton& other);
    PAutomaton& operator=(const PAutomaton& other);
    PAutomaton(PAutomaton&&) noexcept;
    PAutomaton& operator=(PAutomaton&&) noexcept;

    AutStateId initial(StateId p, Phase phase);
    AutStateId plain(std::string_view label);
    // q_{p γ}^θ of post* saturation.
    AutStateId generated(StateId p, SymbolId g, Phase phase);

    [[nodiscard]] std::optional<AutStateId> find_initial(StateId p, Phase phase) const;
    [[nodiscard]] std::optional<AutStateId> find_plain(std::string_view label) const;
    [[nodiscard]] std::optional<AutStateId> find_generated(StateId p, SymbolId g, Phase phase) const;

    [[nodiscard]] std::size_t num_states() const { return states_.size(); }
    [[nodiscard]] const AutState& state(AutStateId q) const { return states_.at(q.index()); }
    [[nodiscard]] bool is_initial(AutStateId q) const { return state(q).kind == AutState::Kind::Initial; }
    [[nodiscard]] std::vector<AutStateId> initial_states() const;

    void set_final(AutStateId q, bool final = true);
    [[nodiscard]] bool is_final(AutStateId q) const { return finals_.at(q.index()); }

    // Returns false if the transition was already present.
    bool add_transition(AutStateId from, SymbolId label, AutStateId to);
    [[nodiscard]] bool has_transition(AutStateId from, SymbolId label, AutStateId to) const;
    [[nodiscard]] const std::vector<Transition>& transitions() const { return transitions_; }
    [[nodiscard]] std::size_t num_transitions() const { return transitions_.size(); }
    [[nodiscard]] std::span<const Transition> out(AutStateId q) const;
    [[nodiscard]] bool has_epsilon() const { return epsilon_count_ > 0; }

    // States reachable from q by ε-moves, q included.
    [[nodiscard]] std::vector<AutStateId> epsilon_closure(AutStateId q) const;

private:
    struct PhaseKey {
        std::uint32_t control, symbol, phase;
        friend bool operator==(const PhaseKey&, const PhaseKey&) = default;
    };
    struct PhaseKeyHash {
        std::size_t operator()(const PhaseKey& k) const noexcept {
            std::size_t seed = k.control;
            hash_combine(seed, k.symbol);
            hash_combine(seed, k.phase);
            return seed;
        }
    };

    AutStateId push_state(AutState s);
    void invalidate_closures() const;

    std::vector<AutState> states_;
    std::vector<bool> finals_;
    std::unordered_map<PhaseKey, AutStateId, PhaseKeyHash> initial_index_;
    std::unordered_map<PhaseKey, AutStateId, PhaseKeyHash> generated_index_;
    std::unordered_map<std::string, AutStateId> plain_index_;

    std::vector<Transition> transitions_;
    std::unordered_set<Transition, TransitionHash> transition_set_;
    std::vector<std::vector<Transition>> out_;
    std::size_t epsilon_count_ = 0;

    mutable std::mutex closure_mutex_;
    mutable std::vector<std::vector<AutStateId>> closure_cache_;
    mutable std::vector<bool> closure_valid_;
};

// Accepts exactly the listed configurations: one chain of fresh plain
// states per configuration, all ending in one shared final state.
PAutomaton from_configs(const std::vector<Configuration>& configs);

bool accepts(const PAutomaton& aut, const Configuration& c);

// All states reachable from `from` reading `word`, ε-moves interleaved.
std::vector<AutStateId> reach_states(const PAutomaton& aut, AutStateId from, const StackWord& word);

// Accepted configurations with at most max_len stack symbols.
ConfigurationSet enumerate(const PAutomaton& aut, std::size_t max_len);

// True iff some configuration at control point p is accepted.
bool accepts_some_at(const PAutomaton& aut, StateId p);

// Automaton textual format:
//   initial <p> <phase>
//   final <state>
//   trans <state> <gamma|eps> <state>
// States are written "p@phase" (initial), "p/gamma@phase" (generated) or
// a bare label (plain).
PAutomaton parse_automaton(const Smpds& sys, std::string_view text);
std::string print_automaton(const Smpds& sys, const PAutomaton& aut);
std::string automaton_to_dot(const Smpds& sys, const PAutomaton& aut);

std::string format_aut_state(const Smpds& sys, const PAutomaton& aut, AutStateId q);

} // namespace smpds
