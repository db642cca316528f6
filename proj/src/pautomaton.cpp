#include "smpds/pautomaton.hpp"

#include <algorithm>
#include <stdexcept>

namespace smpds {

PAutomaton::PAutomaton(const PAutomaton& other)
    : states_(other.states_),
      finals_(other.finals_),
      initial_index_(other.initial_index_),
      generated_index_(other.generated_index_),
      plain_index_(other.plain_index_),
      transitions_(other.transitions_),
      transition_set_(other.transition_set_),
      out_(other.out_),
      epsilon_count_(other.epsilon_count_) {}

PAutomaton& PAutomaton::operator=(const PAutomaton& other) {
    if (this != &other) {
        PAutomaton copy(other);
        *this = std::move(copy);
    }
    return *this;
}

PAutomaton::PAutomaton(PAutomaton&& other) noexcept
    : states_(std::move(other.states_)),
      finals_(std::move(other.finals_)),
      initial_index_(std::move(other.initial_index_)),
      generated_index_(std::move(other.generated_index_)),
      plain_index_(std::move(other.plain_index_)),
      transitions_(std::move(other.transitions_)),
      transition_set_(std::move(other.transition_set_)),
      out_(std::move(other.out_)),
      epsilon_count_(other.epsilon_count_) {}

PAutomaton& PAutomaton::operator=(PAutomaton&& other) noexcept {
    states_ = std::move(other.states_);
    finals_ = std::move(other.finals_);
    initial_index_ = std::move(other.initial_index_);
    generated_index_ = std::move(other.generated_index_);
    plain_index_ = std::move(other.plain_index_);
    transitions_ = std::move(other.transitions_);
    transition_set_ = std::move(other.transition_set_);
    out_ = std::move(other.out_);
    epsilon_count_ = other.epsilon_count_;
    invalidate_closures();
    return *this;
}

AutStateId PAutomaton::push_state(AutState s) {
    AutStateId id(static_cast<std::uint32_t>(states_.size()));
    states_.push_back(std::move(s));
    finals_.push_back(false);
    out_.emplace_back();
    return id;
}

AutStateId PAutomaton::initial(StateId p, Phase phase) {
    PhaseKey key{p.value, 0, phase.handle()};
    if (auto it = initial_index_.find(key); it != initial_index_.end()) return it->second;
    AutStateId id = push_state({AutState::Kind::Initial, p, {}, phase, {}});
    initial_index_.emplace(key, id);
    return id;
}

AutStateId PAutomaton::plain(std::string_view label) {
    std::string key(label);
    if (auto it = plain_index_.find(key); it != plain_index_.end()) return it->second;
    AutStateId id = push_state({AutState::Kind::Plain, {}, {}, Phase(), key});
    plain_index_.emplace(std::move(key), id);
    return id;
}

AutStateId PAutomaton::generated(StateId p, SymbolId g, Phase phase) {
    PhaseKey key{p.value, g.value, phase.handle()};
    if (auto it = generated_index_.find(key); it != generated_index_.end()) return it->second;
    AutStateId id = push_state({AutState::Kind::Generated, p, g, phase, {}});
    generated_index_.emplace(key, id);
    return id;
}

std::optional<AutStateId> PAutomaton::find_initial(StateId p, Phase phase) const {
    if (auto it = initial_index_.find({p.value, 0, phase.handle()}); it != initial_index_.end()) return it->second;
    return std::nullopt;
}

std::optional<AutStateId> PAutomaton::find_plain(std::string_view label) const {
    if (auto it = plain_index_.find(std::string(label)); it != plain_index_.end()) return it->second;
    return std::nullopt;
}

std::optional<AutStateId> PAutomaton::find_generated(StateId p, SymbolId g, Phase phase) const {
    if (auto it = generated_index_.find({p.value, g.value, phase.handle()}); it != generated_index_.end())
        return it->second;
    return std::nullopt;
}

std::vector<AutStateId> PAutomaton::initial_states() const {
    std::vector<AutStateId> out;
    for (std::uint32_t i = 0; i < states_.size(); ++i)
        if (states_[i].kind == AutState::Kind::Initial) out.emplace_back(i);
    return out;
}

void PAutomaton::set_final(AutStateId q, bool final) { finals_.at(q.index()) = final; }

bool PAutomaton::add_transition(AutStateId from, SymbolId label, AutStateId to) {
    if (from.index() >= states_.size() || to.index() >= states_.size())
        throw std::out_of_range("transition endpoint is not a state of the automaton");
    Transition t{from, label, to};
    if (!transition_set_.insert(t).second) return false;
    transitions_.push_back(t);
    out_[from.index()].push_back(t);
    if (label == kEpsilon) {
        ++epsilon_count_;
        invalidate_closures();
    }
    return true;
}

bool PAutomaton::has_transition(AutStateId from, SymbolId label, AutStateId to) const {
    return transition_set_.contains({from, label, to});
}

std::span<const Transition> PAutomaton::out(AutStateId q) const { return out_.at(q.index()); }

void PAutomaton::invalidate_closures() const {
    std::lock_guard lock(closure_mutex_);
    closure_cache_.clear();
    closure_valid_.clear();
}

std::vector<AutStateId> PAutomaton::epsilon_closure(AutStateId q) const {
    if (epsilon_count_ == 0) return {q};
    std::lock_guard lock(closure_mutex_);
    if (closure_cache_.size() < states_.size()) {
        closure_cache_.resize(states_.size());
        closure_valid_.resize(states_.size(), false);
    }
    if (closure_valid_[q.index()]) return closure_cache_[q.index()];
    std::vector<AutStateId> result{q};
    std::vector<bool> seen(states_.size(), false);
    seen[q.index()] = true;
    for (std::size_t i = 0; i < result.size(); ++i)
        for (const Transition& t : out_[result[i].index()])
            if (t.label == kEpsilon && !seen[t.to.index()]) {
                seen[t.to.index()] = true;
                result.push_back(t.to);
            }
    std::sort(result.begin(), result.end());
    closure_cache_[q.index()] = result;
    closure_valid_[q.index()] = true;
    return result;
}

// ---------------------------------------------------------------------------

PAutomaton from_configs(const std::vector<Configuration>& configs) {
    PAutomaton aut;
    std::size_t intermediates = 0;
    for (const Configuration& c : configs)
        if (c.stack.size() > 1) intermediates += c.stack.size() - 1;
    if (configs.empty()) return aut;

    std::optional<AutStateId> final_state;
    auto shared_final = [&] {
        if (!final_state) {
            final_state = aut.plain("s" + std::to_string(intermediates + 1));
            aut.set_final(*final_state);
        }
        return *final_state;
    };

    std::size_t next_label = 1;
    for (const Configuration& c : configs) {
        AutStateId cur = aut.initial(c.state, c.phase);
        if (c.stack.empty()) {
            aut.set_final(cur);
            continue;
        }
        for (std::size_t i = 0; i < c.stack.size(); ++i) {
            AutStateId next = i + 1 == c.stack.size() ? shared_final() : aut.plain("s" + std::to_string(next_label++));
            aut.add_transition(cur, c.stack[i], next);
            cur = next;
        }
    }
    return aut;
}

std::vector<AutStateId> reach_states(const PAutomaton& aut, AutStateId from, const StackWord& word) {
    std::vector<AutStateId> current = aut.epsilon_closure(from);
    for (SymbolId g : word) {
        std::vector<AutStateId> next;
        for (AutStateId q : current)
            for (const Transition& t : aut.out(q))
                if (t.label == g) {
                    auto cl = aut.epsilon_closure(t.to);
                    next.insert(next.end(), cl.begin(), cl.end());
                }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        current = std::move(next);
        if (current.empty()) break;
    }
    return current;
}

bool accepts(const PAutomaton& aut, const Configuration& c) {
    auto init = aut.find_initial(c.state, c.phase);
    if (!init) return false;
    for (AutStateId q : reach_states(aut, *init, c.stack))
        if (aut.is_final(q)) return true;
    return false;
}

ConfigurationSet enumerate(const PAutomaton& aut, std::size_t max_len) {
    std::vector<SymbolId> alphabet;
    for (const Transition& t : aut.transitions())
        if (t.label != kEpsilon) alphabet.push_back(t.label);
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

    ConfigurationSet out;
    for (AutStateId init : aut.initial_states()) {
        const AutState& s = aut.state(init);
        // Depth-first over the subset construction, one word at a time.
        struct Frame {
            std::vector<AutStateId> states;
            StackWord word;
        };
        std::vector<Frame> stack{{aut.epsilon_closure(init), {}}};
        while (!stack.empty()) {
            Frame f = std::move(stack.back());
            stack.pop_back();
            if (std::any_of(f.states.begin(), f.states.end(), [&](AutStateId q) { return aut.is_final(q); }))
                out.insert({s.control, f.word, s.phase});
            if (f.word.size() == max_len) continue;
            for (SymbolId g : alphabet) {
                std::vector<AutStateId> next;
                for (AutStateId q : f.states)
                    for (const Transition& t : aut.out(q))
                        if (t.label == g) {
                            auto cl = aut.epsilon_closure(t.to);
                            next.insert(next.end(), cl.begin(), cl.end());
                        }
                if (next.empty()) continue;
                std::sort(next.begin(), next.end());
                next.erase(std::unique(next.begin(), next.end()), next.end());
                StackWord w = f.word;
                w.push_back(g);
                stack.push_back({std::move(next), std::move(w)});
            }
        }
    }
    return out;
}

bool accepts_some_at(const PAutomaton& aut, StateId p) {
    for (AutStateId init : aut.initial_states()) {
        if (aut.state(init).control != p) continue;
        std::vector<bool> seen(aut.num_states(), false);
        std::vector<AutStateId> work{init};
        seen[init.index()] = true;
        while (!work.empty()) {
            AutStateId q = work.back();
            work.pop_back();
            if (aut.is_final(q)) return true;
            for (const Transition& t : aut.out(q))
                if (!seen[t.to.index()]) {
                    seen[t.to.index()] = true;
                    work.push_back(t.to);
                }
        }
    }
    return false;
}

} // namespace smpds
