#pragma once

// Reference implementations used to check the library. They only read the
// rule tables of a system and never call the library's semantics.

#include "smpds/model.hpp"
#include "smpds/pautomaton.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <vector>

namespace oracle {

using namespace smpds;

inline Phase swap_rule(Phase theta, RuleId removed, RuleId added) {
    std::set<RuleId> m(theta.members().begin(), theta.members().end());
    m.erase(removed);
    m.insert(added);
    return Phase::of(std::vector<RuleId>(m.begin(), m.end()));
}

inline bool has(Phase theta, RuleId r) {
    auto m = theta.members();
    return std::find(m.begin(), m.end(), r) != m.end();
}

// One step of the SM-PDS semantics, written out rule by rule.
inline std::vector<Configuration> successors(const Smpds& sys, const Configuration& c) {
    std::vector<Configuration> out;
    if (c.stack.empty()) return out;
    for (RuleId r : c.phase.members()) {
        const Rule& rule = sys.rule(r);
        if (auto* pr = std::get_if<PdsRule>(&rule)) {
            if (pr->lhs_state != c.state || pr->lhs_symbol != c.stack[0]) continue;
            Configuration next{pr->rhs_state, pr->rhs_word, c.phase};
            for (std::size_t i = 1; i < c.stack.size(); ++i) next.stack.push_back(c.stack[i]);
            out.push_back(std::move(next));
        } else {
            auto& m = std::get<SelfModRule>(rule);
            if (m.from_state != c.state || !has(c.phase, m.removed)) continue;
            out.push_back({m.to_state, c.stack, swap_rule(c.phase, m.removed, m.added)});
        }
    }
    std::sort(out.begin(), out.end(), [](const Configuration& a, const Configuration& b) {
        return std::tie(a.state, a.stack, a.phase) < std::tie(b.state, b.stack, b.phase);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Configurations c' with c' => c.
inline std::vector<Configuration> predecessors(const Smpds& sys, const Configuration& c) {
    std::vector<Configuration> out;
    for (RuleId r : c.phase.members()) {
        auto* pr = sys.pds_rule(r);
        if (!pr || pr->rhs_state != c.state) continue;
        const StackWord& w = pr->rhs_word;
        if (w.size() > c.stack.size() || !std::equal(w.begin(), w.end(), c.stack.begin())) continue;
        Configuration prev{pr->lhs_state, {pr->lhs_symbol}, c.phase};
        prev.stack.insert(prev.stack.end(), c.stack.begin() + static_cast<std::ptrdiff_t>(w.size()), c.stack.end());
        out.push_back(std::move(prev));
    }
    if (!c.stack.empty()) {
        for (RuleId r : sys.delta_c()) {
            auto* m = sys.selfmod_rule(r);
            if (m->to_state != c.state || !has(c.phase, m->added)) continue;
            std::vector<RuleId> keep;
            for (RuleId x : c.phase.members())
                if (x != m->added) keep.push_back(x);
            keep.push_back(m->removed);
            Phase a = Phase::of(keep);
            Phase b = Phase::of(keep).with(m->added);
            for (Phase theta : {a, b}) {
                if (!has(theta, r) || !has(theta, m->removed)) continue;
                if (swap_rule(theta, m->removed, m->added) == c.phase) out.push_back({m->from_state, c.stack, theta});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Configuration& a, const Configuration& b) {
        return std::tie(a.state, a.stack, a.phase) < std::tie(b.state, b.stack, b.phase);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Explicit configuration graph explored from a set of roots, forwards or
// backwards, with configurations above max_stack discarded.
struct Graph {
    std::vector<Configuration> nodes;
    std::unordered_map<Configuration, std::size_t, ConfigurationHash> index;
    std::vector<std::vector<std::size_t>> edges; // in exploration direction
    std::vector<bool> open;                      // lost a neighbour or never expanded
    std::size_t roots = 0;
    bool truncated = false;

    [[nodiscard]] bool contains(const Configuration& c) const { return index.count(c) != 0; }
};

inline Graph explore(const Smpds& sys, const std::vector<Configuration>& roots, bool forward, std::size_t max_stack,
                     std::size_t max_expansions) {
    Graph g;
    auto add = [&](const Configuration& c) {
        auto [it, fresh] = g.index.emplace(c, g.nodes.size());
        if (fresh) {
            g.nodes.push_back(c);
            g.edges.emplace_back();
            g.open.push_back(true);
        }
        return it->second;
    };
    for (const Configuration& c : roots) add(c);
    g.roots = g.nodes.size();
    std::size_t next = 0, expansions = 0;
    while (next < g.nodes.size() && expansions < max_expansions) {
        std::size_t u = next++;
        ++expansions;
        Configuration c = g.nodes[u];
        bool lost = false;
        for (const Configuration& d : forward ? successors(sys, c) : predecessors(sys, c)) {
            if (d.stack.size() > max_stack) {
                lost = true;
                continue;
            }
            std::size_t v = add(d);
            g.edges[u].push_back(v);
        }
        g.open[u] = lost;
        if (lost) g.truncated = true;
    }
    if (next < g.nodes.size()) g.truncated = true;
    return g;
}

struct Verdict {
    bool reaches = false;
    bool conclusive = false;
};

// For every root: does it reach a goal node, and is the answer certain?
// A negative answer is certain only if nothing reachable from the root was
// cut off by the bounds.
template <typename Goal>
std::vector<Verdict> decide(const Graph& g, Goal&& is_goal) {
    std::size_t n = g.nodes.size();
    std::vector<std::vector<std::size_t>> rev(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v : g.edges[u]) rev[v].push_back(u);
    auto backwards = [&](std::vector<bool> mark) {
        std::deque<std::size_t> q;
        for (std::size_t u = 0; u < n; ++u)
            if (mark[u]) q.push_back(u);
        while (!q.empty()) {
            std::size_t v = q.front();
            q.pop_front();
            for (std::size_t u : rev[v])
                if (!mark[u]) {
                    mark[u] = true;
                    q.push_back(u);
                }
        }
        return mark;
    };
    std::vector<bool> goal(n);
    for (std::size_t u = 0; u < n; ++u) goal[u] = is_goal(g.nodes[u]);
    std::vector<bool> hit = backwards(goal);
    std::vector<bool> taint = backwards(g.open);
    std::vector<Verdict> out(g.roots);
    for (std::size_t u = 0; u < g.roots; ++u) out[u] = {hit[u], hit[u] || !taint[u]};
    return out;
}

// ---------------------------------------------------------------------------
// Automaton membership by subset simulation, with its own ε handling.

inline std::set<std::uint32_t> eps_close(const PAutomaton& aut, std::set<std::uint32_t> s) {
    std::vector<std::uint32_t> work(s.begin(), s.end());
    while (!work.empty()) {
        std::uint32_t q = work.back();
        work.pop_back();
        for (const Transition& t : aut.transitions())
            if (t.from.value == q && !t.label.valid() && s.insert(t.to.value).second) work.push_back(t.to.value);
    }
    return s;
}

inline bool nfa_accepts(const PAutomaton& aut, const Configuration& c) {
    std::set<std::uint32_t> cur;
    for (std::size_t i = 0; i < aut.num_states(); ++i) {
        const AutState& s = aut.state(AutStateId(static_cast<std::uint32_t>(i)));
        if (s.kind == AutState::Kind::Initial && s.control == c.state && s.phase == c.phase)
            cur.insert(static_cast<std::uint32_t>(i));
    }
    cur = eps_close(aut, cur);
    for (SymbolId g : c.stack) {
        std::set<std::uint32_t> next;
        for (const Transition& t : aut.transitions())
            if (t.label == g && cur.count(t.from.value)) next.insert(t.to.value);
        cur = eps_close(aut, next);
    }
    return std::any_of(cur.begin(), cur.end(), [&](std::uint32_t q) { return aut.is_final(AutStateId(q)); });
}

// Reachable states by boolean matrix products, one matrix per symbol.
inline std::vector<AutStateId> matrix_reach(const PAutomaton& aut, std::size_t num_symbols, AutStateId from,
                                            const StackWord& word) {
    auto n = static_cast<Eigen::Index>(aut.num_states());
    auto clamp = [](Eigen::MatrixXi m) { return m.unaryExpr([](int x) { return x > 0 ? 1 : 0; }).eval(); };
    Eigen::MatrixXi eps = Eigen::MatrixXi::Identity(n, n);
    std::vector<Eigen::MatrixXi> step(num_symbols, Eigen::MatrixXi::Zero(n, n));
    for (const Transition& t : aut.transitions()) {
        auto i = static_cast<Eigen::Index>(t.from.index()), j = static_cast<Eigen::Index>(t.to.index());
        if (t.label.valid())
            step[t.label.index()](i, j) = 1;
        else
            eps(i, j) = 1;
    }
    for (Eigen::Index k = 1; k < n; k *= 2) eps = clamp(eps * eps);
    Eigen::RowVectorXi v = Eigen::RowVectorXi::Zero(n);
    v(static_cast<Eigen::Index>(from.index())) = 1;
    v = (v * eps).unaryExpr([](int x) { return x > 0 ? 1 : 0; });
    for (SymbolId g : word) v = (v * step[g.index()] * eps).unaryExpr([](int x) { return x > 0 ? 1 : 0; });
    std::vector<AutStateId> out;
    for (Eigen::Index i = 0; i < n; ++i)
        if (v(i)) out.push_back(AutStateId(static_cast<std::uint32_t>(i)));
    return out;
}

} // namespace oracle
