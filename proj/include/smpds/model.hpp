#pragma once

#include "smpds/ids.hpp"
#include "smpds/phase.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace smpds {

using StackWord = std::vector<SymbolId>; // leftmost symbol is the top of the stack

// <p, γ> ↪ <p', w>
struct PdsRule {
    StateId lhs_state;
    SymbolId lhs_symbol;
    StateId rhs_state;
    StackWord rhs_word;

    friend bool operator==(const PdsRule&, const PdsRule&) = default;
};

// p -(removed, added)-> p'
struct SelfModRule {
    StateId from_state;
    RuleId removed;
    RuleId added;
    StateId to_state;

    friend bool operator==(const SelfModRule&, const SelfModRule&) = default;
};

using Rule = std::variant<PdsRule, SelfModRule>;

struct Configuration {
    StateId state;
    StackWord stack;
    Phase phase;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const noexcept;
};

using ConfigurationSet = std::unordered_set<Configuration, ConfigurationHash>;

// A self-modifying pushdown system (P, Γ, Δ, Δc) together with its name
// tables, named phases and listed configurations. Rule identifiers are
// dense indices, assigned in insertion order and never reused.
class Smpds {
public:
    StateId add_state(std::string_view name);
    SymbolId add_symbol(std::string_view name);
    RuleId add_rule(std::string_view name, PdsRule rule);
    RuleId add_selfmod(std::string_view name, SelfModRule rule);
    void add_phase(std::string_view name, Phase phase);
    void add_config(Configuration c) { configs_.push_back(std::move(c)); }

    [[nodiscard]] std::size_t num_states() const { return state_names_.size(); }
    [[nodiscard]] std::size_t num_symbols() const { return symbol_names_.size(); }
    [[nodiscard]] std::size_t num_rules() const { return rules_.size(); }

    [[nodiscard]] const std::string& state_name(StateId s) const { return state_names_.at(s.index()); }
    [[nodiscard]] const std::string& symbol_name(SymbolId g) const { return symbol_names_.at(g.index()); }
    [[nodiscard]] const std::string& rule_name(RuleId r) const { return rule_names_.at(r.index()); }

    [[nodiscard]] std::optional<StateId> find_state(std::string_view name) const;
    [[nodiscard]] std::optional<SymbolId> find_symbol(std::string_view name) const;
    [[nodiscard]] std::optional<RuleId> find_rule(std::string_view name) const;
    [[nodiscard]] std::optional<Phase> find_phase(std::string_view name) const;
    [[nodiscard]] std::optional<std::string> phase_name(Phase p) const;

    [[nodiscard]] bool has_rule(RuleId r) const { return r.valid() && r.index() < rules_.size(); }
    [[nodiscard]] const Rule& rule(RuleId r) const { return rules_.at(r.index()); }
    [[nodiscard]] const PdsRule* pds_rule(RuleId r) const;
    [[nodiscard]] const SelfModRule* selfmod_rule(RuleId r) const;
    [[nodiscard]] bool is_selfmod(RuleId r) const { return selfmod_rule(r) != nullptr; }

    [[nodiscard]] const std::vector<RuleId>& delta() const { return delta_; }
    [[nodiscard]] const std::vector<RuleId>& delta_c() const { return delta_c_; }
    [[nodiscard]] const std::vector<std::pair<std::string, Phase>>& phases() const { return phases_; }
    [[nodiscard]] const std::vector<Configuration>& configs() const { return configs_; }

    // Every rule of Δ ∪ Δc.
    [[nodiscard]] Phase all_rules_phase() const;

    // A self-modifying rule p -(r, r)-> p that removes and re-adds itself
    // is inert; normalize_selfmod materializes one as r_⊥.
    [[nodiscard]] bool is_inert(RuleId r) const;

private:
    std::vector<std::string> state_names_;
    std::vector<std::string> symbol_names_;
    std::vector<std::string> rule_names_;
    std::unordered_map<std::string, StateId> state_index_;
    std::unordered_map<std::string, SymbolId> symbol_index_;
    std::unordered_map<std::string, RuleId> rule_index_;
    std::vector<Rule> rules_;
    std::vector<RuleId> delta_;
    std::vector<RuleId> delta_c_;
    std::vector<std::pair<std::string, Phase>> phases_;
    std::vector<Configuration> configs_;
};

// ---------------------------------------------------------------------------
// Validation

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity;
    std::string code; // "dangling RuleId", "needs normalize_push", ...
    std::string message;
};

struct ValidationReport {
    std::vector<Diagnostic> items;

    [[nodiscard]] bool empty() const { return items.empty(); }
    [[nodiscard]] bool has_errors() const;
    [[nodiscard]] std::size_t count(std::string_view code) const;
};

ValidationReport validate(const Smpds& sys);

// True iff no non-inert self-modifying rule removes itself.
bool is_selfmod_normal(const Smpds& sys);
// True iff every transition rule pushes at most two symbols.
bool is_push_normal(const Smpds& sys);

// ---------------------------------------------------------------------------
// Semantics

// Throws std::invalid_argument if c does not belong to sys.
void check_configuration(const Smpds& sys, const Configuration& c);

// Immediate successors of c.
ConfigurationSet step(const Smpds& sys, const Configuration& c);

struct BoundedReach {
    ConfigurationSet visited;
    bool hit_step_limit = false;  // the expansion budget ran out
    bool hit_stack_limit = false; // some successor was discarded for its height

    [[nodiscard]] bool truncated() const { return hit_step_limit || hit_stack_limit; }
};

// Breadth-first closure of step from the given starting configurations.
BoundedReach bounded_reach(const Smpds& sys, const std::vector<Configuration>& start, std::size_t max_stack,
                           std::size_t max_steps);
BoundedReach bounded_reach(const Smpds& sys, const Configuration& start, std::size_t max_stack,
                           std::size_t max_steps);

// ---------------------------------------------------------------------------
// Normalization
//
// Both normalizations keep every existing RuleId (and its meaning as a phase
// member) and append fresh rules. Fresh rules are only ever entered through a
// fresh control point, so they are added to every phase: `lift` does that for
// phases of the original system, `project` undoes it.

struct Normalized {
    Smpds system;
    std::vector<RuleId> always_on;               // fresh rules present in every phase
    std::vector<std::vector<RuleId>> rule_map;   // old RuleId -> new RuleIds (first is the old id)
    std::unordered_set<StateId> fresh_states;
    std::unordered_set<SymbolId> fresh_symbols;
    std::vector<std::string> warnings;

    [[nodiscard]] Phase lift(Phase p) const { return p.united(always_on); }
    [[nodiscard]] Configuration lift(const Configuration& c) const { return {c.state, c.stack, lift(c.phase)}; }

    // Maps a configuration of the normalized system back to the original
    // one, or nullopt if it mentions a fresh control point or symbol.
    [[nodiscard]] std::optional<Configuration> project(const Configuration& c) const;
};

// Replaces every p -(r, r2)-> p' (r removing itself) by
// p -(r_⊥, r_⊥)-> p_i and p_i -(r, r2)-> p' with a fresh p_i.
Normalized normalize_selfmod(const Smpds& sys);

// Splits every <p, γ> ↪ <p', γ1…γn> with n > 2 into n-1 rules through
// fresh control points and stack symbols.
Normalized normalize_push(const Smpds& sys);

// ---------------------------------------------------------------------------
// Printing helpers

std::string format_word(const Smpds& sys, const StackWord& w);
// Declared name if the phase is named, otherwise "{r1,r2,...}" in id order.
std::string format_phase(const Smpds& sys, Phase p);
// "<p> <phase> <g1> <g2> ..." (the body of a `config:` line)
std::string format_configuration(const Smpds& sys, const Configuration& c);

} // namespace smpds
