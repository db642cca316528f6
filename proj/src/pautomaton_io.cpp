#include "smpds/pautomaton.hpp"
#include "smpds/text.hpp"

#include <algorithm>
#include <sstream>

namespace smpds {

std::string format_aut_state(const Smpds& sys, const PAutomaton& aut, AutStateId q) {
    const AutState& s = aut.state(q);
    switch (s.kind) {
    case AutState::Kind::Initial:
        return sys.state_name(s.control) + "@" + format_phase(sys, s.phase);
    case AutState::Kind::Generated:
        return sys.state_name(s.control) + "/" + sys.symbol_name(s.symbol) + "@" + format_phase(sys, s.phase);
    case AutState::Kind::Plain:
        break;
    }
    return s.label;
}

namespace {

std::string format_label(const Smpds& sys, SymbolId g) { return g == kEpsilon ? "eps" : sys.symbol_name(g); }

StateId lookup_state(const Smpds& sys, std::string_view name) {
    auto s = sys.find_state(name);
    if (!s) throw ParseError(0, "unknown control point '" + std::string(name) + "'");
    return *s;
}

SymbolId lookup_symbol(const Smpds& sys, std::string_view name) {
    auto g = sys.find_symbol(name);
    if (!g) throw ParseError(0, "unknown stack symbol '" + std::string(name) + "'");
    return *g;
}

AutStateId resolve_state(const Smpds& sys, PAutomaton& aut, std::string_view token) {
    std::size_t at = token.find('@');
    if (at == std::string_view::npos) {
        if (!is_identifier(token)) throw ParseError(0, "invalid state name '" + std::string(token) + "'");
        return aut.plain(token);
    }
    std::string_view head = token.substr(0, at);
    Phase phase = parse_phase(sys, token.substr(at + 1));
    std::size_t slash = head.find('/');
    if (slash == std::string_view::npos) return aut.initial(lookup_state(sys, head), phase);
    return aut.generated(lookup_state(sys, head.substr(0, slash)), lookup_symbol(sys, head.substr(slash + 1)), phase);
}

} // namespace

PAutomaton parse_automaton(const Smpds& sys, std::string_view text) {
    PAutomaton aut;
    std::size_t ln = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++ln;
        try {
            auto t = tokenize_line(line);
            if (t.empty()) continue;
            if (t[0] == "initial") {
                if (t.size() != 3) throw ParseError(0, "expected 'initial <p> <phase>'");
                aut.initial(lookup_state(sys, t[1]), parse_phase(sys, t[2]));
            } else if (t[0] == "final") {
                if (t.size() != 2) throw ParseError(0, "expected 'final <state>'");
                aut.set_final(resolve_state(sys, aut, t[1]));
            } else if (t[0] == "trans") {
                if (t.size() != 4) throw ParseError(0, "expected 'trans <state> <gamma|eps> <state>'");
                AutStateId from = resolve_state(sys, aut, t[1]);
                SymbolId label = t[2] == "eps" ? kEpsilon : lookup_symbol(sys, t[2]);
                AutStateId to = resolve_state(sys, aut, t[3]);
                aut.add_transition(from, label, to);
            } else {
                throw ParseError(0, "unknown directive '" + t[0] + "'");
            }
        } catch (const ParseError& e) {
            if (e.line()) throw;
            throw ParseError(ln, e.what());
        }
        if (end == text.size()) break;
    }
    return aut;
}

std::string print_automaton(const Smpds& sys, const PAutomaton& aut) {
    std::vector<std::string> initials, finals, trans;
    for (std::uint32_t i = 0; i < aut.num_states(); ++i) {
        AutStateId q(i);
        const AutState& s = aut.state(q);
        if (s.kind == AutState::Kind::Initial)
            initials.push_back("initial " + sys.state_name(s.control) + " " + format_phase(sys, s.phase));
        if (aut.is_final(q)) finals.push_back("final " + format_aut_state(sys, aut, q));
    }
    for (const Transition& t : aut.transitions())
        trans.push_back("trans " + format_aut_state(sys, aut, t.from) + " " + format_label(sys, t.label) + " " +
                        format_aut_state(sys, aut, t.to));
    std::sort(initials.begin(), initials.end());
    std::sort(finals.begin(), finals.end());
    std::sort(trans.begin(), trans.end());
    std::ostringstream out;
    for (const auto* group : {&initials, &finals, &trans})
        for (const std::string& line : *group) out << line << '\n';
    return out.str();
}

std::string automaton_to_dot(const Smpds& sys, const PAutomaton& aut) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s) {
            if (ch == '"' || ch == '\\') out += '\\';
            out += ch;
        }
        return out + "\"";
    };
    std::ostringstream out;
    out << "digraph pautomaton {\n  rankdir=LR;\n";
    for (std::uint32_t i = 0; i < aut.num_states(); ++i) {
        AutStateId q(i);
        out << "  n" << i << " [label=" << quote(format_aut_state(sys, aut, q));
        if (aut.is_final(q)) out << ", shape=doublecircle";
        else if (aut.is_initial(q)) out << ", shape=box";
        out << "];\n";
    }
    for (const Transition& t : aut.transitions())
        out << "  n" << t.from.value << " -> n" << t.to.value << " [label=" << quote(format_label(sys, t.label))
            << "];\n";
    out << "}\n";
    return out.str();
}

} // namespace smpds
