#include "smpds/model.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

namespace smpds {

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
    std::size_t seed = c.state.value;
    hash_combine(seed, c.phase.handle());
    for (SymbolId g : c.stack) hash_combine(seed, g.value);
    return seed;
}

// ---------------------------------------------------------------------------
// Smpds

StateId Smpds::add_state(std::string_view name) {
    std::string key(name);
    if (auto it = state_index_.find(key); it != state_index_.end()) return it->second;
    StateId id(static_cast<std::uint32_t>(state_names_.size()));
    state_names_.push_back(key);
    state_index_.emplace(std::move(key), id);
    return id;
}

SymbolId Smpds::add_symbol(std::string_view name) {
    std::string key(name);
    if (auto it = symbol_index_.find(key); it != symbol_index_.end()) return it->second;
    SymbolId id(static_cast<std::uint32_t>(symbol_names_.size()));
    symbol_names_.push_back(key);
    symbol_index_.emplace(std::move(key), id);
    return id;
}

RuleId Smpds::add_rule(std::string_view name, PdsRule rule) {
    std::string key(name);
    if (rule_index_.contains(key)) throw std::invalid_argument("duplicate rule id '" + key + "'");
    RuleId id(static_cast<std::uint32_t>(rules_.size()));
    rules_.emplace_back(std::move(rule));
    rule_names_.push_back(key);
    rule_index_.emplace(std::move(key), id);
    delta_.push_back(id);
    return id;
}

RuleId Smpds::add_selfmod(std::string_view name, SelfModRule rule) {
    std::string key(name);
    if (rule_index_.contains(key)) throw std::invalid_argument("duplicate rule id '" + key + "'");
    RuleId id(static_cast<std::uint32_t>(rules_.size()));
    rules_.emplace_back(rule);
    rule_names_.push_back(key);
    rule_index_.emplace(std::move(key), id);
    delta_c_.push_back(id);
    return id;
}

void Smpds::add_phase(std::string_view name, Phase phase) {
    if (find_phase(name)) throw std::invalid_argument("duplicate phase name '" + std::string(name) + "'");
    phases_.emplace_back(std::string(name), phase);
}

std::optional<StateId> Smpds::find_state(std::string_view name) const {
    if (auto it = state_index_.find(std::string(name)); it != state_index_.end()) return it->second;
    return std::nullopt;
}

std::optional<SymbolId> Smpds::find_symbol(std::string_view name) const {
    if (auto it = symbol_index_.find(std::string(name)); it != symbol_index_.end()) return it->second;
    return std::nullopt;
}

std::optional<RuleId> Smpds::find_rule(std::string_view name) const {
    if (auto it = rule_index_.find(std::string(name)); it != rule_index_.end()) return it->second;
    return std::nullopt;
}

std::optional<Phase> Smpds::find_phase(std::string_view name) const {
    for (const auto& [n, p] : phases_)
        if (n == name) return p;
    return std::nullopt;
}

std::optional<std::string> Smpds::phase_name(Phase p) const {
    for (const auto& [n, q] : phases_)
        if (q == p) return n;
    return std::nullopt;
}

const PdsRule* Smpds::pds_rule(RuleId r) const {
    if (!has_rule(r)) return nullptr;
    return std::get_if<PdsRule>(&rules_[r.index()]);
}

const SelfModRule* Smpds::selfmod_rule(RuleId r) const {
    if (!has_rule(r)) return nullptr;
    return std::get_if<SelfModRule>(&rules_[r.index()]);
}

Phase Smpds::all_rules_phase() const {
    std::vector<RuleId> all;
    all.reserve(rules_.size());
    for (std::uint32_t i = 0; i < rules_.size(); ++i) all.emplace_back(i);
    return Phase::of(std::move(all));
}

bool Smpds::is_inert(RuleId r) const {
    const SelfModRule* m = selfmod_rule(r);
    return m && m->removed == r && m->added == r && m->from_state == m->to_state;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::has_errors() const {
    for (const auto& d : items)
        if (d.severity == Diagnostic::Severity::Error) return true;
    return false;
}

std::size_t ValidationReport::count(std::string_view code) const {
    std::size_t n = 0;
    for (const auto& d : items)
        if (d.code == code) ++n;
    return n;
}

namespace {

bool valid_state(const Smpds& sys, StateId s) { return s.valid() && s.index() < sys.num_states(); }
bool valid_symbol(const Smpds& sys, SymbolId g) { return g.valid() && g.index() < sys.num_symbols(); }

std::string rule_label(const Smpds& sys, RuleId r) {
    return sys.has_rule(r) ? sys.rule_name(r) : "#" + std::to_string(r.value);
}

void check_phase(const Smpds& sys, Phase p, const std::string& where, ValidationReport& report) {
    for (RuleId r : p.members())
        if (!sys.has_rule(r))
            report.items.push_back({Diagnostic::Severity::Error, "dangling RuleId",
                                    where + " references undeclared rule " + rule_label(sys, r)});
}

} // namespace

ValidationReport validate(const Smpds& sys) {
    using Sev = Diagnostic::Severity;
    ValidationReport report;
    for (std::uint32_t i = 0; i < sys.num_rules(); ++i) {
        RuleId id(i);
        const std::string name = sys.rule_name(id);
        if (const PdsRule* r = sys.pds_rule(id)) {
            if (!valid_state(sys, r->lhs_state) || !valid_state(sys, r->rhs_state))
                report.items.push_back({Sev::Error, "state not in P", "rule " + name + " uses an undeclared state"});
            bool bad_symbol = !valid_symbol(sys, r->lhs_symbol);
            for (SymbolId g : r->rhs_word) bad_symbol = bad_symbol || !valid_symbol(sys, g);
            if (bad_symbol)
                report.items.push_back({Sev::Error, "symbol not in alphabet", "rule " + name + " uses an undeclared symbol"});
            if (r->rhs_word.size() > 2)
                report.items.push_back({Sev::Warning, "needs normalize_push",
                                        "rule " + name + " pushes " + std::to_string(r->rhs_word.size()) + " symbols"});
        } else {
            const SelfModRule* m = sys.selfmod_rule(id);
            if (!valid_state(sys, m->from_state) || !valid_state(sys, m->to_state))
                report.items.push_back({Sev::Error, "state not in P", "smrule " + name + " uses an undeclared state"});
            if (!sys.has_rule(m->removed))
                report.items.push_back({Sev::Error, "dangling RuleId",
                                        "smrule " + name + " removes undeclared rule " + rule_label(sys, m->removed)});
            if (!sys.has_rule(m->added))
                report.items.push_back({Sev::Error, "dangling RuleId",
                                        "smrule " + name + " adds undeclared rule " + rule_label(sys, m->added)});
            if (m->removed == id && !sys.is_inert(id))
                report.items.push_back({Sev::Warning, "needs normalize_selfmod", "smrule " + name + " removes itself"});
        }
    }
    for (const auto& [name, p] : sys.phases()) check_phase(sys, p, "phase " + name, report);
    for (const Configuration& c : sys.configs()) {
        check_phase(sys, c.phase, "config", report);
        bool ok = valid_state(sys, c.state);
        for (SymbolId g : c.stack) ok = ok && valid_symbol(sys, g);
        if (!ok)
            report.items.push_back({Sev::Error, "malformed configuration", "config uses an undeclared state or symbol"});
    }
    return report;
}

bool is_selfmod_normal(const Smpds& sys) {
    for (RuleId r : sys.delta_c()) {
        const SelfModRule* m = sys.selfmod_rule(r);
        if (m->removed == r && !sys.is_inert(r)) return false;
    }
    return true;
}

bool is_push_normal(const Smpds& sys) {
    for (RuleId r : sys.delta())
        if (sys.pds_rule(r)->rhs_word.size() > 2) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Semantics

void check_configuration(const Smpds& sys, const Configuration& c) {
    if (!valid_state(sys, c.state)) throw std::invalid_argument("configuration control point is not in P");
    for (SymbolId g : c.stack)
        if (!valid_symbol(sys, g)) throw std::invalid_argument("configuration stack symbol is not in the alphabet");
    for (RuleId r : c.phase.members())
        if (!sys.has_rule(r)) throw std::invalid_argument("configuration phase references an undeclared rule");
}

ConfigurationSet step(const Smpds& sys, const Configuration& c) {
    check_configuration(sys, c);
    ConfigurationSet out;
    // Every rule reads the top of the stack: transition rules replace it,
    // self-modifying rules leave it in place.
    if (c.stack.empty()) return out;
    for (RuleId r : c.phase.members()) {
        if (const PdsRule* pr = sys.pds_rule(r)) {
            if (pr->lhs_state != c.state || pr->lhs_symbol != c.stack.front()) continue;
            StackWord w = pr->rhs_word;
            w.insert(w.end(), c.stack.begin() + 1, c.stack.end());
            out.insert({pr->rhs_state, std::move(w), c.phase});
        } else {
            const SelfModRule* m = sys.selfmod_rule(r);
            if (m->from_state != c.state || !c.phase.contains(m->removed)) continue;
            out.insert({m->to_state, c.stack, c.phase.updated(m->removed, m->added)});
        }
    }
    return out;
}

BoundedReach bounded_reach(const Smpds& sys, const std::vector<Configuration>& start, std::size_t max_stack,
                           std::size_t max_steps) {
    BoundedReach result;
    std::deque<Configuration> queue;
    for (const Configuration& c : start) {
        if (c.stack.size() > max_stack) throw std::invalid_argument("start configuration exceeds the stack bound");
        if (result.visited.insert(c).second) queue.push_back(c);
    }
    std::size_t steps = 0;
    while (!queue.empty()) {
        if (steps == max_steps) {
            result.hit_step_limit = true;
            break;
        }
        ++steps;
        Configuration c = std::move(queue.front());
        queue.pop_front();
        for (const Configuration& next : step(sys, c)) {
            if (next.stack.size() > max_stack) {
                result.hit_stack_limit = true;
                continue;
            }
            if (result.visited.insert(next).second) queue.push_back(next);
        }
    }
    return result;
}

BoundedReach bounded_reach(const Smpds& sys, const Configuration& start, std::size_t max_stack, std::size_t max_steps) {
    return bounded_reach(sys, std::vector<Configuration>{start}, max_stack, max_steps);
}

// ---------------------------------------------------------------------------
// Printing helpers

std::string format_word(const Smpds& sys, const StackWord& w) {
    std::string out;
    for (SymbolId g : w) {
        if (!out.empty()) out += ' ';
        out += sys.symbol_name(g);
    }
    return out;
}

std::string format_phase(const Smpds& sys, Phase p) {
    if (auto name = sys.phase_name(p)) return *name;
    std::string out = "{";
    bool first = true;
    for (RuleId r : p.members()) {
        if (!first) out += ',';
        first = false;
        out += rule_label(sys, r);
    }
    return out + "}";
}

std::string format_configuration(const Smpds& sys, const Configuration& c) {
    std::string out = sys.state_name(c.state) + " " + format_phase(sys, c.phase);
    if (!c.stack.empty()) out += " " + format_word(sys, c.stack);
    return out;
}

} // namespace smpds
