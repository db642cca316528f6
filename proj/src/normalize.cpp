#include "smpds/model.hpp"

#include <algorithm>

namespace smpds {
namespace {

std::string fresh_name(std::string base, auto exists) {
    if (!exists(base)) return base;
    for (int k = 1;; ++k) {
        std::string candidate = base + "_" + std::to_string(k);
        if (!exists(candidate)) return candidate;
    }
}

// New system with the same states and symbols as `sys` (same ids).
Smpds copy_tables(const Smpds& sys) {
    Smpds out;
    for (std::uint32_t i = 0; i < sys.num_states(); ++i) out.add_state(sys.state_name(StateId(i)));
    for (std::uint32_t i = 0; i < sys.num_symbols(); ++i) out.add_symbol(sys.symbol_name(SymbolId(i)));
    return out;
}

void finish(const Smpds& sys, Normalized& n) {
    for (const auto& [name, p] : sys.phases()) n.system.add_phase(name, n.lift(p));
    for (const Configuration& c : sys.configs()) n.system.add_config(n.lift(c));
}

} // namespace

std::optional<Configuration> Normalized::project(const Configuration& c) const {
    if (fresh_states.contains(c.state)) return std::nullopt;
    for (SymbolId g : c.stack)
        if (fresh_symbols.contains(g)) return std::nullopt;
    std::vector<RuleId> kept;
    for (RuleId r : c.phase.members())
        if (std::find(always_on.begin(), always_on.end(), r) == always_on.end()) kept.push_back(r);
    return Configuration{c.state, c.stack, Phase::of(std::move(kept))};
}

Normalized normalize_selfmod(const Smpds& sys) {
    Normalized n;
    n.system = copy_tables(sys);
    Smpds& out = n.system;
    n.rule_map.resize(sys.num_rules());

    std::vector<RuleId> offending;
    for (RuleId r : sys.delta_c())
        if (sys.selfmod_rule(r)->removed == r && !sys.is_inert(r)) offending.push_back(r);

    auto state_exists = [&](const std::string& s) { return sys.find_state(s).has_value() || out.find_state(s).has_value(); };
    auto rule_exists = [&](const std::string& s) { return sys.find_rule(s).has_value() || out.find_rule(s).has_value(); };

    // r_⊥ is the first rule after the original ones, so its id is known
    // before the rewritten rules that reference it are added.
    const RuleId bottom_id(static_cast<std::uint32_t>(sys.num_rules()));
    std::optional<StateId> bottom_state;
    if (!offending.empty()) {
        bottom_state = out.add_state(fresh_name("__pbot", state_exists));
        n.fresh_states.insert(*bottom_state);
    }

    std::vector<std::pair<RuleId, StateId>> split; // offending rule -> its intermediate state
    for (std::uint32_t i = 0; i < sys.num_rules(); ++i) {
        RuleId id(i);
        n.rule_map[i].push_back(id);
        if (const PdsRule* r = sys.pds_rule(id)) {
            out.add_rule(sys.rule_name(id), *r);
            continue;
        }
        SelfModRule m = *sys.selfmod_rule(id);
        if (std::find(offending.begin(), offending.end(), id) != offending.end()) {
            StateId mid = out.add_state(fresh_name(sys.rule_name(id) + ".mid", state_exists));
            n.fresh_states.insert(mid);
            split.emplace_back(id, mid);
            out.add_selfmod(sys.rule_name(id), SelfModRule{m.from_state, bottom_id, bottom_id, mid});
        } else {
            out.add_selfmod(sys.rule_name(id), m);
        }
    }
    if (!offending.empty()) {
        RuleId b = out.add_selfmod(fresh_name("__rbot", rule_exists), SelfModRule{*bottom_state, bottom_id, bottom_id, *bottom_state});
        n.always_on.push_back(b);
        for (auto [id, mid] : split) {
            const SelfModRule& m = *sys.selfmod_rule(id);
            RuleId second = out.add_selfmod(fresh_name(sys.rule_name(id) + ".2", rule_exists),
                                            SelfModRule{mid, id, m.added, m.to_state});
            n.always_on.push_back(second);
            n.rule_map[id.index()].push_back(second);
        }
    }
    finish(sys, n);
    return n;
}

Normalized normalize_push(const Smpds& sys) {
    Normalized n;
    n.system = copy_tables(sys);
    Smpds& out = n.system;
    n.rule_map.resize(sys.num_rules());

    auto state_exists = [&](const std::string& s) { return sys.find_state(s).has_value() || out.find_state(s).has_value(); };
    auto symbol_exists = [&](const std::string& s) { return sys.find_symbol(s).has_value() || out.find_symbol(s).has_value(); };
    auto rule_exists = [&](const std::string& s) { return sys.find_rule(s).has_value() || out.find_rule(s).has_value(); };

    struct Pending {
        RuleId id;
        std::vector<StateId> states;   // p_1 .. p_{n-2}
        std::vector<SymbolId> symbols; // a_1 .. a_{n-2}
    };
    std::vector<Pending> pending;

    for (std::uint32_t i = 0; i < sys.num_rules(); ++i) {
        RuleId id(i);
        n.rule_map[i].push_back(id);
        if (const SelfModRule* m = sys.selfmod_rule(id)) {
            out.add_selfmod(sys.rule_name(id), *m);
            continue;
        }
        const PdsRule& r = *sys.pds_rule(id);
        const std::size_t len = r.rhs_word.size();
        if (len <= 2) {
            out.add_rule(sys.rule_name(id), r);
            continue;
        }
        Pending p{id, {}, {}};
        for (std::size_t k = 1; k + 2 <= len; ++k) {
            StateId s = out.add_state(fresh_name(sys.rule_name(id) + ".p" + std::to_string(k), state_exists));
            SymbolId a = out.add_symbol(fresh_name(sys.rule_name(id) + ".a" + std::to_string(k), symbol_exists));
            n.fresh_states.insert(s);
            n.fresh_symbols.insert(a);
            p.states.push_back(s);
            p.symbols.push_back(a);
        }
        // <p, γ> ↪ <p_1, a_1 γ_n>
        out.add_rule(sys.rule_name(id), PdsRule{r.lhs_state, r.lhs_symbol, p.states[0], {p.symbols[0], r.rhs_word[len - 1]}});
        pending.push_back(std::move(p));
    }

    for (const Pending& p : pending) {
        const PdsRule& r = *sys.pds_rule(p.id);
        const std::size_t len = r.rhs_word.size();
        const std::size_t inner = p.states.size(); // n - 2
        for (std::size_t k = 0; k < inner; ++k) {
            PdsRule next{p.states[k], p.symbols[k], {}, {}};
            if (k + 1 < inner) {
                // <p_k, a_k> ↪ <p_{k+1}, a_{k+1} γ_{n-k}>
                next.rhs_state = p.states[k + 1];
                next.rhs_word = {p.symbols[k + 1], r.rhs_word[len - 2 - k]};
            } else {
                // <p_{n-2}, a_{n-2}> ↪ <p', γ_1 γ_2>
                next.rhs_state = r.rhs_state;
                next.rhs_word = {r.rhs_word[0], r.rhs_word[1]};
            }
            RuleId added = out.add_rule(fresh_name(sys.rule_name(p.id) + "." + std::to_string(k + 2), rule_exists), next);
            n.always_on.push_back(added);
            n.rule_map[p.id.index()].push_back(added);
        }
    }

    for (RuleId r : sys.delta_c()) {
        const SelfModRule& m = *sys.selfmod_rule(r);
        for (RuleId target : {m.removed, m.added})
            if (sys.has_rule(target) && n.rule_map[target.index()].size() > 1)
                n.warnings.push_back("smrule " + sys.rule_name(r) + " references split rule " + sys.rule_name(target) +
                                     "; it now refers to the first rule of the split group");
    }
    finish(sys, n);
    return n;
}

} // namespace smpds
