#include "smpds/poststar.hpp"
#include "smpds/prestar.hpp"

#include <chrono>
#include <deque>
#include <stdexcept>

namespace smpds {

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) { return (std::uint64_t(a) << 32) | b; }

// Works on "facts" (s, γ, q): s is initial and reads γ to q, possibly
// through one ε-move first. ε-moves only ever leave initial states and
// land on non-initial ones, so one hop is enough.
class Poststar {
public:
    Poststar(const Smpds& sys, const PAutomaton& input, Budget* budget) : sys_(sys), aut_(input), budget_(budget) {
        for (RuleId r : sys.delta()) {
            const PdsRule& pr = *sys.pds_rule(r);
            if (pr.rhs_word.size() > 2)
                throw std::invalid_argument("rule " + sys.rule_name(r) + " pushes more than two symbols");
            by_lhs_[pack(pr.lhs_state.value, pr.lhs_symbol.value)].push_back(r);
        }
        by_source_.resize(sys.num_states());
        for (RuleId r : sys.delta_c()) by_source_[sys.selfmod_rule(r)->from_state.index()].push_back(r);
    }

    PAutomaton run() {
        std::vector<Transition> seed = aut_.transitions();
        for (const Transition& t : seed) on_new(t);
        while (!facts_.empty()) {
            if (budget_) budget_->poll();
            Transition f = facts_.front();
            facts_.pop_front();
            process(f);
        }
        return std::move(aut_);
    }

private:
    void add(AutStateId from, SymbolId label, AutStateId to) {
        if (aut_.add_transition(from, label, to)) on_new({from, label, to});
    }

    void on_new(const Transition& t) {
        if (t.label == kEpsilon) {
            eps_into_[t.to.value].push_back(t.from);
            std::vector<Transition> outgoing(aut_.out(t.to).begin(), aut_.out(t.to).end());
            for (const Transition& u : outgoing)
                if (u.label != kEpsilon) emit(t.from, u.label, u.to);
            return;
        }
        if (aut_.is_initial(t.from)) emit(t.from, t.label, t.to);
        if (auto it = eps_into_.find(t.from.value); it != eps_into_.end()) {
            std::vector<AutStateId> sources = it->second;
            for (AutStateId s : sources) emit(s, t.label, t.to);
        }
    }

    void emit(AutStateId s, SymbolId g, AutStateId q) {
        if (fact_seen_.insert({s, g, q}).second) facts_.push_back({s, g, q});
    }

    void process(const Transition& f) {
        StateId p = aut_.state(f.from).control;
        Phase theta = aut_.state(f.from).phase;
        SymbolId g = f.label;
        AutStateId q = f.to;

        if (auto it = by_lhs_.find(pack(p.value, g.value)); it != by_lhs_.end()) {
            for (RuleId r : it->second) {
                if (!theta.contains(r)) continue;
                const PdsRule& pr = *sys_.pds_rule(r);
                AutStateId target = aut_.initial(pr.rhs_state, theta);
                switch (pr.rhs_word.size()) {
                case 0:
                    add(target, kEpsilon, q);
                    break;
                case 1:
                    add(target, pr.rhs_word[0], q);
                    break;
                default: {
                    AutStateId mid = aut_.generated(pr.rhs_state, pr.rhs_word[0], theta);
                    add(target, pr.rhs_word[0], mid);
                    add(mid, pr.rhs_word[1], q);
                    break;
                }
                }
            }
        }
        for (RuleId m : by_source_[p.index()]) {
            const SelfModRule& sm = *sys_.selfmod_rule(m);
            if (!theta.contains(m) || !theta.contains(sm.removed)) continue;
            add(aut_.initial(sm.to_state, updated(theta, m)), g, q);
        }
    }

    Phase updated(Phase theta, RuleId m) {
        auto key = pack(theta.handle(), m.value);
        if (auto it = update_cache_.find(key); it != update_cache_.end()) return it->second;
        const SelfModRule& sm = *sys_.selfmod_rule(m);
        Phase next = theta.updated(sm.removed, sm.added);
        update_cache_.emplace(key, next);
        return next;
    }

    const Smpds& sys_;
    PAutomaton aut_;
    Budget* budget_;

    std::unordered_map<std::uint64_t, std::vector<RuleId>> by_lhs_;
    std::vector<std::vector<RuleId>> by_source_;
    std::unordered_map<std::uint32_t, std::vector<AutStateId>> eps_into_;
    std::unordered_set<Transition, TransitionHash> fact_seen_;
    std::deque<Transition> facts_;
    std::unordered_map<std::uint64_t, Phase> update_cache_;
};

} // namespace

PAutomaton poststar(const Smpds& sys, const PAutomaton& aut, const SaturationOptions& options,
                    SaturationStats* stats) {
    auto start = std::chrono::steady_clock::now();
    if (options.check_input) {
        check_saturation_input(sys, aut, false);
        if (!is_push_normal(sys))
            throw std::invalid_argument("system has rules pushing more than two symbols; run normalize_push first");
    }
    Poststar engine(sys, aut, options.budget);
    PAutomaton out = engine.run();
    if (stats) {
        stats->transitions_added = out.num_transitions() - aut.num_transitions();
        std::unordered_set<Phase> phases;
        for (AutStateId q : out.initial_states()) phases.insert(out.state(q).phase);
        stats->phases_materialized = phases.size();
        stats->wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return out;
}

} // namespace smpds
