#include "smpds/text.hpp"

#include <cctype>
#include <sstream>
#include <unordered_map>

namespace smpds {

bool is_identifier(std::string_view s) {
    if (s.empty() || s == "->") return false;
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch))) return false;
        switch (ch) {
        case '#': case ':': case '(': case ')': case '{': case '}': case ',': case '@': case '/':
            return false;
        default:
            break;
        }
    }
    return s.find("->") == std::string_view::npos;
}

std::vector<std::string> tokenize_line(std::string_view line) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            flush();
        } else if (ch == ':' || ch == '(' || ch == ')') {
            flush();
            tokens.emplace_back(1, ch);
        } else if (ch == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            flush();
            tokens.emplace_back("->");
            ++i;
        } else if (ch == '{') {
            // Brace groups may be glued to a prefix ("p@{r1,r2}").
            std::size_t close = line.find('}', i);
            if (close == std::string_view::npos) throw ParseError(0, "unterminated '{'");
            for (std::size_t j = i; j <= close; ++j)
                if (!std::isspace(static_cast<unsigned char>(line[j]))) current += line[j];
            i = close;
        } else {
            current += ch;
        }
    }
    flush();
    return tokens;
}

namespace {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

void expect(const std::vector<std::string>& t, std::size_t i, std::string_view tok, std::size_t line) {
    if (i >= t.size() || t[i] != tok)
        throw ParseError(line, "expected '" + std::string(tok) + "'" + (i < t.size() ? " before '" + t[i] + "'" : ""));
}

const std::string& ident(const std::vector<std::string>& t, std::size_t i, std::size_t line, std::string_view what) {
    if (i >= t.size()) throw ParseError(line, "missing " + std::string(what));
    if (!is_identifier(t[i])) throw ParseError(line, "invalid " + std::string(what) + " '" + t[i] + "'");
    return t[i];
}

Phase phase_from_list(std::string_view token, auto resolve) {
    std::vector<RuleId> members;
    std::string_view body = token.substr(1, token.size() - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string_view part = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        if (!part.empty()) members.push_back(resolve(part));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Phase::of(std::move(members));
}

} // namespace

Phase parse_phase(const Smpds& sys, std::string_view token) {
    if (!token.empty() && token.front() == '{') {
        if (token.back() != '}') throw ParseError(0, "malformed phase '" + std::string(token) + "'");
        return phase_from_list(token, [&](std::string_view name) {
            auto r = sys.find_rule(name);
            if (!r) throw ParseError(0, "unknown rule '" + std::string(name) + "'");
            return *r;
        });
    }
    if (auto p = sys.find_phase(token)) return *p;
    throw ParseError(0, "unknown phase '" + std::string(token) + "'");
}

Configuration parse_configuration(const Smpds& sys, std::string_view text) {
    auto t = tokenize_line(text);
    if (t.size() < 2) throw ParseError(0, "configuration needs a control point and a phase");
    auto s = sys.find_state(t[0]);
    if (!s) throw ParseError(0, "unknown control point '" + t[0] + "'");
    Configuration c{*s, {}, parse_phase(sys, t[1])};
    for (std::size_t i = 2; i < t.size(); ++i) {
        auto g = sys.find_symbol(t[i]);
        if (!g) throw ParseError(0, "unknown stack symbol '" + t[i] + "'");
        c.stack.push_back(*g);
    }
    return c;
}

Smpds parse_smpds(std::string_view text) {
    auto lines = split_lines(text);
    std::vector<std::vector<std::string>> toks(lines.size());

    // Pass 1: tokenize and number the rules in order of definition.
    std::unordered_map<std::string, RuleId> rule_ids;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            toks[i] = tokenize_line(lines[i]);
        } catch (const ParseError& e) {
            throw ParseError(i + 1, e.what());
        }
        const auto& t = toks[i];
        if (t.empty()) continue;
        if (t[0] == "rule" || t[0] == "smrule") {
            const std::string& id = ident(t, 1, i + 1, "rule id");
            RuleId rid(static_cast<std::uint32_t>(rule_ids.size()));
            if (!rule_ids.emplace(id, rid).second) throw ParseError(i + 1, "duplicate rule id '" + id + "'");
        }
    }
    auto resolve_rule = [&](std::string_view name, std::size_t line) {
        auto it = rule_ids.find(std::string(name));
        if (it == rule_ids.end()) throw ParseError(line, "unknown rule '" + std::string(name) + "'");
        return it->second;
    };

    Smpds sys;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& t = toks[i];
        const std::size_t ln = i + 1;
        if (t.empty()) continue;
        const std::string& kw = t[0];
        if (kw == "state") {
            sys.add_state(ident(t, 1, ln, "state name"));
            if (t.size() > 2) throw ParseError(ln, "trailing tokens after state");
        } else if (kw == "symbol") {
            sys.add_symbol(ident(t, 1, ln, "symbol name"));
            if (t.size() > 2) throw ParseError(ln, "trailing tokens after symbol");
        } else if (kw == "rule") {
            const std::string& id = ident(t, 1, ln, "rule id");
            expect(t, 2, ":", ln);
            PdsRule r;
            r.lhs_state = sys.add_state(ident(t, 3, ln, "control point"));
            r.lhs_symbol = sys.add_symbol(ident(t, 4, ln, "stack symbol"));
            expect(t, 5, "->", ln);
            r.rhs_state = sys.add_state(ident(t, 6, ln, "control point"));
            for (std::size_t k = 7; k < t.size(); ++k) r.rhs_word.push_back(sys.add_symbol(ident(t, k, ln, "stack symbol")));
            sys.add_rule(id, std::move(r));
        } else if (kw == "smrule") {
            const std::string& id = ident(t, 1, ln, "rule id");
            expect(t, 2, ":", ln);
            SelfModRule m;
            m.from_state = sys.add_state(ident(t, 3, ln, "control point"));
            expect(t, 4, "(", ln);
            m.removed = resolve_rule(ident(t, 5, ln, "rule id"), ln);
            expect(t, 6, "->", ln);
            m.added = resolve_rule(ident(t, 7, ln, "rule id"), ln);
            expect(t, 8, ")", ln);
            m.to_state = sys.add_state(ident(t, 9, ln, "control point"));
            if (t.size() > 10) throw ParseError(ln, "trailing tokens after smrule");
            sys.add_selfmod(id, m);
        } else if (kw == "phase") {
            // handled below, once all rules exist
        } else if (kw == "config") {
            // idem
        } else {
            throw ParseError(ln, "unknown directive '" + kw + "'");
        }
    }

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& t = toks[i];
        const std::size_t ln = i + 1;
        if (t.empty()) continue;
        try {
            if (t[0] == "phase") {
                const std::string& name = ident(t, 1, ln, "phase name");
                expect(t, 2, ":", ln);
                std::vector<RuleId> members;
                for (std::size_t k = 3; k < t.size(); ++k) members.push_back(resolve_rule(ident(t, k, ln, "rule id"), ln));
                sys.add_phase(name, Phase::of(std::move(members)));
            } else if (t[0] == "config") {
                expect(t, 1, ":", ln);
                if (t.size() < 4) throw ParseError(ln, "config needs a control point and a phase");
                Configuration c;
                c.state = sys.add_state(ident(t, 2, ln, "control point"));
                c.phase = parse_phase(sys, t[3]);
                for (std::size_t k = 4; k < t.size(); ++k) c.stack.push_back(sys.add_symbol(ident(t, k, ln, "stack symbol")));
                sys.add_config(std::move(c));
            }
        } catch (const ParseError& e) {
            if (e.line()) throw;
            throw ParseError(ln, e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(ln, e.what());
        }
    }
    return sys;
}

std::string print_smpds(const Smpds& sys) {
    std::ostringstream out;
    for (std::uint32_t i = 0; i < sys.num_states(); ++i) out << "state " << sys.state_name(StateId(i)) << '\n';
    for (std::uint32_t i = 0; i < sys.num_symbols(); ++i) out << "symbol " << sys.symbol_name(SymbolId(i)) << '\n';
    for (std::uint32_t i = 0; i < sys.num_rules(); ++i) {
        RuleId id(i);
        if (const PdsRule* r = sys.pds_rule(id)) {
            out << "rule " << sys.rule_name(id) << ": " << sys.state_name(r->lhs_state) << ' '
                << sys.symbol_name(r->lhs_symbol) << " -> " << sys.state_name(r->rhs_state);
            for (SymbolId g : r->rhs_word) out << ' ' << sys.symbol_name(g);
            out << '\n';
        } else {
            const SelfModRule& m = *sys.selfmod_rule(id);
            out << "smrule " << sys.rule_name(id) << ": " << sys.state_name(m.from_state) << " ("
                << sys.rule_name(m.removed) << " -> " << sys.rule_name(m.added) << ") " << sys.state_name(m.to_state)
                << '\n';
        }
    }
    for (const auto& [name, p] : sys.phases()) {
        out << "phase " << name << ':';
        for (RuleId r : p.members()) out << ' ' << sys.rule_name(r);
        out << '\n';
    }
    for (const Configuration& c : sys.configs()) out << "config: " << format_configuration(sys, c) << '\n';
    return out.str();
}

} // namespace smpds
