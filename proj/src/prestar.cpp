#include "smpds/prestar.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <stdexcept>

namespace smpds {

void check_saturation_input(const Smpds& sys, const PAutomaton& aut, bool allow_epsilon) {
    ValidationReport report = validate(sys);
    for (const Diagnostic& d : report.items)
        if (d.severity == Diagnostic::Severity::Error) throw std::invalid_argument("invalid system: " + d.message);
    if (!is_selfmod_normal(sys))
        throw std::invalid_argument("system has self-removing rules; run normalize_selfmod first");
    for (std::uint32_t i = 0; i < aut.num_states(); ++i) {
        const AutState& s = aut.state(AutStateId(i));
        if (s.kind == AutState::Kind::Plain) continue;
        if (!s.control.valid() || s.control.index() >= sys.num_states())
            throw std::invalid_argument("automaton state refers to an unknown control point");
        for (RuleId r : s.phase.members())
            if (!sys.has_rule(r)) throw std::invalid_argument("automaton state refers to an unknown rule");
    }
    for (const Transition& t : aut.transitions()) {
        if (t.label == kEpsilon) {
            if (!allow_epsilon) throw std::invalid_argument("automaton has ε-transitions");
        } else if (t.label.index() >= sys.num_symbols()) {
            throw std::invalid_argument("automaton transition reads an unknown stack symbol");
        }
        if (aut.is_initial(t.to)) throw std::invalid_argument("automaton has a transition into an initial state");
    }
}

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) { return (std::uint64_t(a) << 32) | b; }

struct PendingKey {
    std::uint32_t at, rule, phase, pos;
    friend bool operator==(const PendingKey&, const PendingKey&) = default;
};

struct PendingKeyHash {
    std::size_t operator()(const PendingKey& k) const noexcept {
        std::size_t seed = k.at;
        hash_combine(seed, k.rule);
        hash_combine(seed, k.phase);
        hash_combine(seed, k.pos);
        return seed;
    }
};

class Prestar {
public:
    Prestar(const Smpds& sys, const PAutomaton& input, Budget* budget) : sys_(sys), aut_(input), budget_(budget) {
        by_rhs_head_.resize(sys.num_states());
        by_target_.resize(sys.num_states());
        is_pop_.assign(sys.num_rules(), false);
        for (RuleId r : sys.delta()) {
            const PdsRule& pr = *sys.pds_rule(r);
            if (pr.rhs_word.empty()) is_pop_[r.index()] = true;
            else by_rhs_head_[pr.rhs_state.index()].emplace(pr.rhs_word.front().value, r);
        }
        for (RuleId r : sys.delta_c()) by_target_[sys.selfmod_rule(r)->to_state.index()].push_back(r);

        if (aut_.has_epsilon()) {
            eps_pred_.resize(aut_.num_states());
            for (std::uint32_t i = 0; i < aut_.num_states(); ++i)
                for (AutStateId q : aut_.epsilon_closure(AutStateId(i))) eps_pred_[q.index()].emplace_back(i);
            closure_.resize(aut_.num_states());
            for (std::uint32_t i = 0; i < aut_.num_states(); ++i) closure_[i] = aut_.epsilon_closure(AutStateId(i));
        }
        for (const Transition& t : aut_.transitions()) {
            if (t.label != kEpsilon) {
                succ_[pack(t.from.value, t.label.value)].push_back(t.to);
                work_.push_back(t);
            }
        }
        for (std::uint32_t i = 0; i < aut_.num_states(); ++i)
            if (aut_.is_initial(AutStateId(i))) seed_phases_.push_back(aut_.state(AutStateId(i)).phase);
    }

    PAutomaton run() {
        for (Phase p : seed_phases_) learn_phase(p);
        while (!work_.empty()) {
            if (budget_) budget_->poll();
            Transition t = work_.front();
            work_.pop_front();
            process(t);
        }
        return std::move(aut_);
    }

    [[nodiscard]] std::size_t phases_known() const { return known_.size(); }

private:
    void add(AutStateId from, SymbolId label, AutStateId to) {
        if (!aut_.add_transition(from, label, to)) return;
        succ_[pack(from.value, label.value)].push_back(to);
        work_.push_back({from, label, to});
        if (aut_.is_initial(from)) learn_phase(aut_.state(from).phase);
    }

    // Pop rules enabled in θ contribute (p, θ) -γ-> (p', θ) regardless of
    // the automaton contents; they are emitted the first time θ shows up.
    void learn_phase(Phase theta) {
        if (!known_.insert(theta).second) return;
        for (RuleId r : theta.members()) {
            if (!is_pop_[r.index()]) continue;
            const PdsRule& pr = *sys_.pds_rule(r);
            AutStateId to = aut_.initial(pr.rhs_state, theta);
            add(aut_.initial(pr.lhs_state, theta), pr.lhs_symbol, to);
        }
    }

    std::vector<AutStateId> preds_of(AutStateId q) const {
        if (q.index() < eps_pred_.size()) return eps_pred_[q.index()];
        return {q};
    }

    std::vector<AutStateId> closure_of(AutStateId q) const {
        if (q.index() < closure_.size()) return closure_[q.index()];
        return {q};
    }

    void process(const Transition& t) {
        for (AutStateId s : preds_of(t.from)) {
            // (s, label, t.to) is a virtual transition: s reaches t.from by ε.
            const AutState& st = aut_.state(s);
            if (st.kind == AutState::Kind::Initial) {
                StateId p1 = st.control;
                Phase theta = st.phase;
                auto [lo, hi] = by_rhs_head_[p1.index()].equal_range(t.label.value);
                for (auto it = lo; it != hi; ++it)
                    if (theta.contains(it->second)) advance(it->second, theta, 1, t.to);
                for (RuleId m : by_target_[p1.index()]) {
                    const SelfModRule& sm = *sys_.selfmod_rule(m);
                    for (Phase before : predecessors(theta, m))
                        add(aut_.initial(sm.from_state, before), t.label, t.to);
                }
            }
            auto it = pending_.find(pack(s.value, t.label.value));
            if (it == pending_.end()) continue;
            // Entries appended while iterating are harmless: they already
            // saw t through succ_ and advance() is idempotent.
            std::vector<Pending>& waiting = it->second;
            for (std::size_t i = 0; i < waiting.size(); ++i) {
                Pending w = waiting[i];
                advance(w.rule, w.phase, w.pos + 1, t.to);
            }
        }
    }

    // Rule r has matched the first `pos` symbols of its right-hand side,
    // ending in `at`.
    void advance(RuleId r, Phase theta, std::uint32_t pos, AutStateId at) {
        const PdsRule& pr = *sys_.pds_rule(r);
        if (pos == pr.rhs_word.size()) {
            add(aut_.initial(pr.lhs_state, theta), pr.lhs_symbol, at);
            return;
        }
        SymbolId next = pr.rhs_word[pos];
        if (!pending_seen_.insert({at.value, r.value, theta.handle(), pos}).second) return;
        pending_[pack(at.value, next.value)].push_back({r, theta, pos});
        for (AutStateId q : closure_of(at)) {
            auto it = succ_.find(pack(q.value, next.value));
            if (it == succ_.end()) continue;
            std::vector<AutStateId>& targets = it->second;
            for (std::size_t i = 0; i < targets.size(); ++i) advance(r, theta, pos + 1, targets[i]);
        }
    }

    // Phases θ' with r, r1 ∈ θ' and (θ' \ {r1}) ∪ {r2} = θ, where m is
    // p -(r1, r2)-> p'.
    const std::vector<Phase>& predecessors(Phase theta, RuleId m) {
        auto key = pack(theta.handle(), m.value);
        if (auto it = pred_cache_.find(key); it != pred_cache_.end()) return it->second;
        std::vector<Phase> out;
        const SelfModRule& sm = *sys_.selfmod_rule(m);
        if (theta.contains(sm.added)) {
            for (Phase cand : {theta.without(sm.added).with(sm.removed), theta.with(sm.removed)}) {
                if (!cand.contains(m) || !cand.contains(sm.removed)) continue;
                if (cand.updated(sm.removed, sm.added) != theta) continue;
                if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
            }
        }
        return pred_cache_.emplace(key, std::move(out)).first->second;
    }

    struct Pending {
        RuleId rule;
        Phase phase;
        std::uint32_t pos;
    };

    const Smpds& sys_;
    PAutomaton aut_;
    Budget* budget_;

    std::vector<std::unordered_multimap<std::uint32_t, RuleId>> by_rhs_head_; // rhs state -> (first symbol, rule)
    std::vector<std::vector<RuleId>> by_target_;                              // p' -> p -(r1, r2)-> p'
    std::vector<bool> is_pop_;

    std::vector<std::vector<AutStateId>> eps_pred_;
    std::vector<std::vector<AutStateId>> closure_;
    std::unordered_map<std::uint64_t, std::vector<AutStateId>> succ_;
    std::deque<Transition> work_;
    std::vector<Phase> seed_phases_;

    std::unordered_map<std::uint64_t, std::vector<Pending>> pending_;
    std::unordered_set<PendingKey, PendingKeyHash> pending_seen_;
    std::unordered_set<Phase> known_;
    std::unordered_map<std::uint64_t, std::vector<Phase>> pred_cache_;
};

} // namespace

PAutomaton prestar(const Smpds& sys, const PAutomaton& aut, const SaturationOptions& options, SaturationStats* stats) {
    auto start = std::chrono::steady_clock::now();
    if (options.check_input) check_saturation_input(sys, aut, true);
    Prestar engine(sys, aut, options.budget);
    PAutomaton out = engine.run();
    if (stats) {
        stats->transitions_added = out.num_transitions() - aut.num_transitions();
        stats->phases_materialized = engine.phases_known();
        stats->wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return out;
}

} // namespace smpds
