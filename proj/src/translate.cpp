#include "smpds/translate.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace smpds {

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) { return (std::uint64_t(a) << 32) | b; }

// Phases θ' from which m leads to θ.
std::vector<Phase> predecessors(const Smpds& sys, RuleId m, Phase theta) {
    std::vector<Phase> out;
    const SelfModRule& sm = *sys.selfmod_rule(m);
    if (!theta.contains(sm.added)) return out;
    for (Phase cand : {theta.without(sm.added).with(sm.removed), theta.with(sm.removed)}) {
        auto next = fire(sys, m, cand);
        if (next && *next == theta && std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
    }
    return out;
}

} // namespace

std::optional<Phase> fire(const Smpds& sys, RuleId m, Phase theta) {
    const SelfModRule* sm = sys.selfmod_rule(m);
    if (!sm || !theta.contains(m) || !theta.contains(sm->removed)) return std::nullopt;
    return theta.updated(sm->removed, sm->added);
}

std::vector<Phase> phase_closure(const Smpds& sys, const std::vector<Phase>& seeds, ClosureDirection direction,
                                 Budget* budget) {
    std::unordered_set<Phase> seen;
    std::deque<Phase> work;
    auto visit = [&](Phase p) {
        if (seen.insert(p).second) work.push_back(p);
    };
    for (Phase p : seeds) visit(p);
    bool forward = direction != ClosureDirection::Backward;
    bool backward = direction != ClosureDirection::Forward;
    while (!work.empty()) {
        if (budget) budget->poll();
        Phase theta = work.front();
        work.pop_front();
        if (forward)
            for (RuleId r : theta.members())
                if (auto next = fire(sys, r, theta)) visit(*next);
        if (backward)
            for (RuleId m : sys.delta_c())
                for (Phase prev : predecessors(sys, m, theta)) visit(prev);
    }
    std::vector<Phase> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

std::optional<std::uint32_t> Pds::find(StateId p, Phase theta) const {
    if (auto it = index.find(pack(p.value, theta.handle())); it != index.end()) return it->second;
    return std::nullopt;
}

Pds to_pds(const Smpds& sys, const std::vector<Phase>& phases, bool require_closed, Budget* budget) {
    Pds pds;
    pds.num_symbols = sys.num_symbols();
    for (Phase theta : phases)
        for (std::uint32_t i = 0; i < sys.num_states(); ++i) {
            auto [it, fresh] = pds.index.emplace(pack(i, theta.handle()), std::uint32_t(pds.states.size()));
            if (fresh) pds.states.push_back({StateId(i), theta});
        }
    pds.out.resize(pds.states.size());
    auto add = [&](PairedRule r) {
        pds.out[r.lhs].push_back(std::uint32_t(pds.rules.size()));
        pds.rules.push_back(std::move(r));
    };
    std::unordered_set<Phase> done;
    for (Phase theta : phases) {
        if (!done.insert(theta).second) continue;
        for (RuleId r : theta.members()) {
            if (budget) budget->poll();
            if (const PdsRule* pr = sys.pds_rule(r)) {
                add({*pds.find(pr->lhs_state, theta), pr->lhs_symbol, *pds.find(pr->rhs_state, theta), pr->rhs_word, r});
                continue;
            }
            const SelfModRule& sm = *sys.selfmod_rule(r);
            auto next = fire(sys, r, theta);
            if (!next) continue;
            auto target = pds.find(sm.to_state, *next);
            if (!target) {
                if (require_closed) throw std::invalid_argument("phase set is not closed under self-modification");
                continue;
            }
            std::uint32_t source = *pds.find(sm.from_state, theta);
            for (std::uint32_t g = 0; g < sys.num_symbols(); ++g)
                add({source, SymbolId(g), *target, StackWord{SymbolId(g)}, r});
        }
    }
    return pds;
}

ConfigurationSet pds_step(const Pds& pds, const Configuration& c) {
    ConfigurationSet out;
    auto at = pds.find(c.state, c.phase);
    if (!at || c.stack.empty()) return out;
    for (std::uint32_t ri : pds.out[*at]) {
        const PairedRule& r = pds.rules[ri];
        if (r.lhs_symbol != c.stack.front()) continue;
        StackWord w = r.rhs_word;
        w.insert(w.end(), c.stack.begin() + 1, c.stack.end());
        out.insert({pds.states[r.rhs].control, std::move(w), pds.states[r.rhs].phase});
    }
    return out;
}

namespace {

// Automaton states standing for the pairs of a PDS.
class PairMap {
public:
    PairMap(const Pds& pds, PAutomaton& aut) : pds_(pds), aut_(aut), aut_of_(pds.states.size()) {
        for (AutStateId q : aut.initial_states()) {
            const AutState& s = aut.state(q);
            if (auto i = pds.find(s.control, s.phase)) {
                aut_of_[*i] = q;
                pair_of_.emplace(q.value, *i);
            }
        }
    }

    AutStateId aut(std::uint32_t pair) {
        if (!aut_of_[pair].valid()) {
            aut_of_[pair] = aut_.initial(pds_.states[pair].control, pds_.states[pair].phase);
            pair_of_.emplace(aut_of_[pair].value, pair);
        }
        return aut_of_[pair];
    }

    std::optional<std::uint32_t> pair(AutStateId q) const {
        if (auto it = pair_of_.find(q.value); it != pair_of_.end()) return it->second;
        return std::nullopt;
    }

private:
    const Pds& pds_;
    PAutomaton& aut_;
    std::vector<AutStateId> aut_of_;
    std::unordered_map<std::uint32_t, std::uint32_t> pair_of_;
};

void require_small_pushes(const Pds& pds) {
    for (const PairedRule& r : pds.rules)
        if (r.rhs_word.size() > 2) throw std::invalid_argument("PDS rule pushes more than two symbols");
}

} // namespace

PAutomaton pds_prestar(const Pds& pds, const PAutomaton& aut, Budget* budget) {
    require_small_pushes(pds);
    if (aut.has_epsilon()) throw std::invalid_argument("automaton has ε-transitions");
    PAutomaton out = aut;
    PairMap pairs(pds, out);

    struct Lhs {
        std::uint32_t pair;
        SymbolId symbol;
        SymbolId second; // invalid unless the rule pushes two symbols
    };
    std::unordered_map<std::uint64_t, std::vector<Lhs>> by_rhs; // (rhs pair, first pushed symbol)
    std::deque<Transition> trans;
    std::unordered_set<Transition, TransitionHash> queued;
    auto push = [&](AutStateId from, SymbolId g, AutStateId to) {
        if (queued.insert({from, g, to}).second) trans.push_back({from, g, to});
    };
    for (const Transition& t : aut.transitions()) push(t.from, t.label, t.to);
    for (const PairedRule& r : pds.rules) {
        if (r.rhs_word.empty()) push(pairs.aut(r.lhs), r.lhs_symbol, pairs.aut(r.rhs));
        else
            by_rhs[pack(r.rhs, r.rhs_word[0].value)].push_back(
                {r.lhs, r.lhs_symbol, r.rhs_word.size() == 2 ? r.rhs_word[1] : SymbolId()});
    }

    std::unordered_map<std::uint64_t, std::vector<std::pair<AutStateId, SymbolId>>> derived; // Δ' by (q, γ)
    std::unordered_map<std::uint64_t, std::vector<AutStateId>> rel;                          // (q, γ) -> targets
    while (!trans.empty()) {
        if (budget) budget->poll();
        Transition t = trans.front();
        trans.pop_front();
        out.add_transition(t.from, t.label, t.to);
        rel[pack(t.from.value, t.label.value)].push_back(t.to);
        if (auto pair = pairs.pair(t.from)) {
            auto it = by_rhs.find(pack(*pair, t.label.value));
            if (it != by_rhs.end()) {
                for (const Lhs& l : it->second) {
                    AutStateId p1 = pairs.aut(l.pair);
                    if (!l.second.valid()) {
                        push(p1, l.symbol, t.to);
                        continue;
                    }
                    derived[pack(t.to.value, l.second.value)].emplace_back(p1, l.symbol);
                    if (auto r = rel.find(pack(t.to.value, l.second.value)); r != rel.end()) {
                        std::vector<AutStateId> targets = r->second;
                        for (AutStateId q2 : targets) push(p1, l.symbol, q2);
                    }
                }
            }
        }
        if (auto it = derived.find(pack(t.from.value, t.label.value)); it != derived.end()) {
            std::vector<std::pair<AutStateId, SymbolId>> rules = it->second;
            for (auto [p1, g1] : rules) push(p1, g1, t.to);
        }
    }
    return out;
}

PAutomaton pds_poststar(const Pds& pds, const PAutomaton& aut, Budget* budget) {
    require_small_pushes(pds);
    if (aut.has_epsilon()) throw std::invalid_argument("automaton has ε-transitions");
    PAutomaton out = aut;
    PairMap pairs(pds, out);

    std::unordered_set<Transition, TransitionHash> rel;
    std::unordered_map<std::uint32_t, std::vector<std::pair<SymbolId, AutStateId>>> rel_out; // non-ε, by source
    std::unordered_map<std::uint32_t, std::vector<AutStateId>> eps_into;
    std::deque<Transition> trans;

    auto add_rel = [&](const Transition& t) {
        if (!rel.insert(t).second) return false;
        out.add_transition(t.from, t.label, t.to);
        if (t.label == kEpsilon) eps_into[t.to.value].push_back(t.from);
        else rel_out[t.from.value].emplace_back(t.label, t.to);
        return true;
    };
    for (const Transition& t : aut.transitions()) {
        if (pairs.pair(t.from)) trans.push_back(t);
        else add_rel(t);
    }

    while (!trans.empty()) {
        if (budget) budget->poll();
        Transition t = trans.front();
        trans.pop_front();
        if (!add_rel(t)) continue;
        if (t.label == kEpsilon) {
            auto it = rel_out.find(t.to.value);
            if (it == rel_out.end()) continue;
            std::vector<std::pair<SymbolId, AutStateId>> next = it->second;
            for (auto [g, q] : next) trans.push_back({t.from, g, q});
            continue;
        }
        std::uint32_t pair = *pairs.pair(t.from);
        for (std::uint32_t ri : pds.out[pair]) {
            const PairedRule& r = pds.rules[ri];
            if (r.lhs_symbol != t.label) continue;
            AutStateId target = pairs.aut(r.rhs);
            switch (r.rhs_word.size()) {
            case 0:
                trans.push_back({target, kEpsilon, t.to});
                break;
            case 1:
                trans.push_back({target, r.rhs_word[0], t.to});
                break;
            default: {
                const PdsState& s = pds.states[r.rhs];
                AutStateId mid = out.generated(s.control, r.rhs_word[0], s.phase);
                trans.push_back({target, r.rhs_word[0], mid});
                if (add_rel({mid, r.rhs_word[1], t.to})) {
                    if (auto it = eps_into.find(mid.value); it != eps_into.end()) {
                        std::vector<AutStateId> sources = it->second;
                        for (AutStateId p2 : sources) trans.push_back({p2, r.rhs_word[1], t.to});
                    }
                }
                break;
            }
            }
        }
    }
    return out;
}

std::string print_pds(const Smpds& sys, const Pds& pds) {
    auto name = [&](std::uint32_t i) {
        return sys.state_name(pds.states[i].control) + "@" + format_phase(sys, pds.states[i].phase);
    };
    std::ostringstream out;
    for (std::uint32_t i = 0; i < pds.states.size(); ++i) out << "state " << name(i) << '\n';
    for (const PairedRule& r : pds.rules) {
        out << "rule " << sys.rule_name(r.origin) << '@' << format_phase(sys, pds.states[r.lhs].phase);
        if (sys.is_selfmod(r.origin)) out << '/' << sys.symbol_name(r.lhs_symbol);
        out << ": " << name(r.lhs) << ' ' << sys.symbol_name(r.lhs_symbol) << " -> " << name(r.rhs);
        for (SymbolId g : r.rhs_word) out << ' ' << sys.symbol_name(g);
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------

bool PhaseRelation::relates(Phase from, Phase to) const {
    auto img = image(from);
    return img && *img == to;
}

std::optional<Phase> PhaseRelation::image(Phase from) const {
    if (!from.contains(guard)) return std::nullopt;
    if (kind == Kind::Identity) return from;
    if (!from.contains(removed)) return std::nullopt;
    return from.updated(removed, added);
}

SymbolicPds to_symbolic_pds(const Smpds& sys) {
    SymbolicPds spds;
    spds.num_states = sys.num_states();
    spds.num_symbols = sys.num_symbols();
    for (std::uint32_t i = 0; i < sys.num_rules(); ++i) {
        RuleId r(i);
        if (const PdsRule* pr = sys.pds_rule(r)) {
            spds.rules.push_back({pr->lhs_state, pr->lhs_symbol, pr->rhs_state, pr->rhs_word,
                                  {PhaseRelation::Kind::Identity, r, {}, {}}});
            continue;
        }
        const SelfModRule& sm = *sys.selfmod_rule(r);
        for (std::uint32_t g = 0; g < sys.num_symbols(); ++g)
            spds.rules.push_back({sm.from_state, SymbolId(g), sm.to_state, StackWord{SymbolId(g)},
                                  {PhaseRelation::Kind::Modify, r, sm.removed, sm.added}});
    }
    return spds;
}

ConfigurationSet symbolic_step(const SymbolicPds& spds, const Configuration& c) {
    ConfigurationSet out;
    if (c.stack.empty()) return out;
    for (const SymbolicRule& r : spds.rules) {
        if (r.lhs_state != c.state || r.lhs_symbol != c.stack.front()) continue;
        auto next = r.relation.image(c.phase);
        if (!next) continue;
        StackWord w = r.rhs_word;
        w.insert(w.end(), c.stack.begin() + 1, c.stack.end());
        out.insert({r.rhs_state, std::move(w), *next});
    }
    return out;
}

std::string print_symbolic_pds(const Smpds& sys, const SymbolicPds& spds) {
    std::ostringstream out;
    for (const SymbolicRule& r : spds.rules) {
        out << "srule: " << sys.state_name(r.lhs_state) << ' ' << sys.symbol_name(r.lhs_symbol) << " -> "
            << sys.state_name(r.rhs_state);
        for (SymbolId g : r.rhs_word) out << ' ' << sys.symbol_name(g);
        if (r.relation.kind == PhaseRelation::Kind::Identity)
            out << " [id " << sys.rule_name(r.relation.guard) << "]\n";
        else
            out << " [modify " << sys.rule_name(r.relation.guard) << ' ' << sys.rule_name(r.relation.removed) << ' '
                << sys.rule_name(r.relation.added) << "]\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------

Phase Erased::map(Phase p) const {
    std::vector<RuleId> members;
    for (RuleId r : p.members())
        if (r.index() < rule_map.size())
            members.insert(members.end(), rule_map[r.index()].begin(), rule_map[r.index()].end());
    return Phase::of(std::move(members));
}

Erased erase_self_modification(const Smpds& sys) {
    Erased e;
    Smpds& out = e.system;
    for (std::uint32_t i = 0; i < sys.num_states(); ++i) out.add_state(sys.state_name(StateId(i)));
    for (std::uint32_t i = 0; i < sys.num_symbols(); ++i) out.add_symbol(sys.symbol_name(SymbolId(i)));
    e.rule_map.resize(sys.num_rules());
    for (std::uint32_t i = 0; i < sys.num_rules(); ++i) {
        RuleId r(i);
        if (const PdsRule* pr = sys.pds_rule(r)) {
            e.rule_map[i].push_back(out.add_rule(sys.rule_name(r), *pr));
            continue;
        }
        const SelfModRule& sm = *sys.selfmod_rule(r);
        for (std::uint32_t g = 0; g < sys.num_symbols(); ++g) {
            std::string name = sys.rule_name(r) + "." + sys.symbol_name(SymbolId(g));
            while (sys.find_rule(name) || out.find_rule(name)) name += "_";
            e.rule_map[i].push_back(
                out.add_rule(name, PdsRule{sm.from_state, SymbolId(g), sm.to_state, StackWord{SymbolId(g)}}));
        }
    }
    for (const auto& [name, p] : sys.phases()) out.add_phase(name, e.map(p));
    for (const Configuration& c : sys.configs()) out.add_config({c.state, c.stack, e.map(c.phase)});
    return e;
}

} // namespace smpds
