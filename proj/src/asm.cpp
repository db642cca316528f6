#include "smpds/asm.hpp"
#include "smpds/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace smpds {

bool operator==(const Instruction& a, const Instruction& b) {
    if (a.op != b.op || a.operand != b.operand) return false;
    if (!a.replacement || !b.replacement) return !a.replacement && !b.replacement;
    return *a.replacement == *b.replacement;
}

std::size_t operand_count(const Instruction& i) {
    switch (i.op) {
    case Instruction::Op::Push:
    case Instruction::Op::Jmp:
    case Instruction::Op::Call:
        return 1;
    case Instruction::Op::Selfmod:
        return 2;
    default:
        return 0;
    }
}

const Line* Program::find(std::string_view label) const {
    for (const Line& l : lines)
        if (l.label == label) return &l;
    return nullptr;
}

bool operator==(const Program& a, const Program& b) {
    if (a.entry != b.entry || a.values != b.values || a.lines.size() != b.lines.size()) return false;
    for (std::size_t i = 0; i < a.lines.size(); ++i)
        if (a.lines[i].label != b.lines[i].label || !(a.lines[i].instruction == b.lines[i].instruction)) return false;
    return true;
}

namespace {

const char* op_name(Instruction::Op op) {
    switch (op) {
    case Instruction::Op::Push: return "push";
    case Instruction::Op::Pop: return "pop";
    case Instruction::Op::Jmp: return "jmp";
    case Instruction::Op::Call: return "call";
    case Instruction::Op::Ret: return "ret";
    case Instruction::Op::Nop: return "nop";
    case Instruction::Op::Selfmod: return "selfmod";
    }
    return "?";
}

bool is_name(std::string_view s) {
    if (s.empty() || s.starts_with("__")) return false;
    return std::all_of(s.begin(), s.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
}

Instruction parse_instruction(const std::vector<std::string>& t, std::size_t& i, std::size_t ln) {
    if (i >= t.size()) throw ParseError(ln, "missing instruction");
    const std::string& op = t[i++];
    Instruction ins;
    auto operand = [&](const char* what) {
        if (i >= t.size()) throw ParseError(ln, op + " needs " + what);
        if (!is_name(t[i])) throw ParseError(ln, "invalid " + std::string(what) + " '" + t[i] + "'");
        return t[i++];
    };
    if (op == "push") {
        ins.op = Instruction::Op::Push;
        ins.operand = operand("a value");
    } else if (op == "pop") {
        ins.op = Instruction::Op::Pop;
    } else if (op == "jmp") {
        ins.op = Instruction::Op::Jmp;
        ins.operand = operand("a label");
    } else if (op == "call") {
        ins.op = Instruction::Op::Call;
        ins.operand = operand("a label");
    } else if (op == "ret") {
        ins.op = Instruction::Op::Ret;
    } else if (op == "nop") {
        ins.op = Instruction::Op::Nop;
    } else if (op == "selfmod") {
        ins.op = Instruction::Op::Selfmod;
        ins.operand = operand("a label");
        ins.replacement = std::make_shared<Instruction>(parse_instruction(t, i, ln));
    } else {
        throw ParseError(ln, "unknown opcode '" + op + "'");
    }
    return ins;
}

void collect_values(const Instruction& ins, std::vector<std::string>& out) {
    if (ins.op == Instruction::Op::Push && std::find(out.begin(), out.end(), ins.operand) == out.end())
        out.push_back(ins.operand);
    if (ins.replacement) collect_values(*ins.replacement, out);
}

void check_instruction(const Program& prog, const Instruction& ins, std::size_t ln, const AsmOptions& options,
                       bool declared_values) {
    switch (ins.op) {
    case Instruction::Op::Jmp:
    case Instruction::Op::Call:
        if (!prog.find(ins.operand)) throw ParseError(ln, "unresolved label '" + ins.operand + "'");
        break;
    case Instruction::Op::Push:
        if (declared_values && std::find(prog.values.begin(), prog.values.end(), ins.operand) == prog.values.end())
            throw ParseError(ln, "value '" + ins.operand + "' is not declared");
        break;
    case Instruction::Op::Selfmod: {
        const Line* target = prog.find(ins.operand);
        if (!target) throw ParseError(ln, "unresolved label '" + ins.operand + "'");
        if (target->instruction.op == Instruction::Op::Selfmod && !options.allow_meta_selfmod)
            throw ParseError(ln, "selfmod targets the selfmod at '" + ins.operand + "' (see --allow-meta-selfmod)");
        if (operand_count(target->instruction) != operand_count(*ins.replacement))
            throw ParseError(ln, "replacement takes " + std::to_string(operand_count(*ins.replacement)) +
                                     " operands but the instruction at '" + ins.operand + "' takes " +
                                     std::to_string(operand_count(target->instruction)));
        check_instruction(prog, *ins.replacement, ln, options, declared_values);
        break;
    }
    default:
        break;
    }
}

void print_instruction(std::ostream& out, const Instruction& ins) {
    out << op_name(ins.op);
    if (!ins.operand.empty()) out << ' ' << ins.operand;
    if (ins.replacement) {
        out << ' ';
        print_instruction(out, *ins.replacement);
    }
}

} // namespace

Program parse_program(std::string_view text, const AsmOptions& options) {
    Program prog;
    bool declared_values = false;
    std::size_t entry_line = 0;
    std::size_t ln = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++ln;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::vector<std::string> t;
        try {
            t = tokenize_line(raw);
        } catch (const ParseError& e) {
            throw ParseError(ln, e.what());
        }
        if (t.empty()) continue;
        if (t[0] == "entry") {
            if (!prog.entry.empty()) throw ParseError(ln, "duplicate entry");
            if (t.size() != 2 || !is_name(t[1])) throw ParseError(ln, "expected 'entry <label>'");
            prog.entry = t[1];
            entry_line = ln;
        } else if (t[0] == "values") {
            if (declared_values) throw ParseError(ln, "duplicate values declaration");
            declared_values = true;
            for (std::size_t i = 1; i < t.size(); ++i) {
                if (!is_name(t[i])) throw ParseError(ln, "invalid value '" + t[i] + "'");
                if (std::find(prog.values.begin(), prog.values.end(), t[i]) != prog.values.end())
                    throw ParseError(ln, "duplicate value '" + t[i] + "'");
                prog.values.push_back(t[i]);
            }
        } else {
            if (t.size() < 3 || t[1] != ":") throw ParseError(ln, "expected '<label>: <instruction>'");
            if (!is_name(t[0])) throw ParseError(ln, "invalid label '" + t[0] + "'");
            if (prog.find(t[0])) throw ParseError(ln, "duplicate label '" + t[0] + "'");
            std::size_t i = 2;
            Instruction ins = parse_instruction(t, i, ln);
            if (i != t.size()) throw ParseError(ln, "unexpected '" + t[i] + "'");
            prog.lines.push_back({t[0], std::move(ins), ln});
        }
    }
    if (prog.entry.empty()) throw ParseError(0, "no entry");
    if (!prog.find(prog.entry)) throw ParseError(entry_line, "unresolved label '" + prog.entry + "'");
    for (const Line& l : prog.lines) check_instruction(prog, l.instruction, l.line, options, declared_values);
    if (declared_values && prog.values.empty()) throw ParseError(0, "empty values declaration");
    return prog;
}

std::string print_program(const Program& prog) {
    std::ostringstream out;
    out << "entry " << prog.entry << '\n';
    if (!prog.values.empty()) {
        out << "values";
        for (const std::string& v : prog.values) out << ' ' << v;
        out << '\n';
    }
    for (const Line& l : prog.lines) {
        out << l.label << ": ";
        print_instruction(out, l.instruction);
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------

namespace {

class Compiler {
public:
    explicit Compiler(const Program& prog) : prog_(prog) {}

    Compiled run() {
        Smpds& sys = out_.system;
        for (const Line& l : prog_.lines) sys.add_state(l.label);
        out_.exit = sys.add_state("__exit");
        for (std::size_t i = 0; i < prog_.lines.size(); ++i)
            next_[prog_.lines[i].label] = i + 1 < prog_.lines.size() ? prog_.lines[i + 1].label : "__exit";

        top_ = sys.add_symbol("top");
        std::vector<std::string> values = prog_.values;
        if (values.empty())
            for (const Line& l : prog_.lines) collect_values(l.instruction, values);
        for (const std::string& v : values) sys.add_symbol("v_" + v);
        for (const Line& l : prog_.lines) collect_return_sites(l.label, l.instruction);
        for (const std::string& site : sites_) sys.add_symbol("ret_" + site);

        // Ids are handed out before any rule is built so that a selfmod can
        // refer to instructions further down and to its replacement.
        for (const Line& l : prog_.lines) out_.rule_of[l.label] = reserve("i_" + l.label);
        for (const Line& l : prog_.lines) build(l.instruction, l.label, out_.rule_of[l.label]);

        std::vector<RuleId> initial;
        for (std::size_t i = 0; i < planned_.size(); ++i)
            if (!planned_[i].replacement) initial.emplace_back(std::uint32_t(i));
        for (Planned& p : planned_) {
            if (auto* r = std::get_if<PdsRule>(&p.rule)) sys.add_rule(p.name, *r);
            else sys.add_selfmod(p.name, std::get<SelfModRule>(p.rule));
        }
        Phase init = Phase::of(std::move(initial));
        sys.add_phase("init", init);
        sys.add_config({*sys.find_state(prog_.entry), {top_}, init});
        return std::move(out_);
    }

private:
    struct Planned {
        std::string name;
        Rule rule;
        bool replacement = false;
    };

    RuleId reserve(std::string name, bool replacement = false) {
        planned_.push_back({std::move(name), PdsRule{}, replacement});
        return RuleId(std::uint32_t(planned_.size() - 1));
    }

    StateId state(const std::string& name) { return out_.system.add_state(name); }
    SymbolId symbol(const std::string& name) { return *out_.system.find_symbol(name); }

    void collect_return_sites(const std::string& at, const Instruction& ins) {
        if (ins.op == Instruction::Op::Call) {
            const std::string& site = next_.at(at);
            if (std::find(sites_.begin(), sites_.end(), site) == sites_.end()) sites_.push_back(site);
        }
        if (ins.replacement) collect_return_sites(ins.operand, *ins.replacement);
    }

    void aux(const std::string& name, PdsRule rule) {
        if (!aux_names_.insert(name).second) return;
        reserve(name);
        planned_.back().rule = std::move(rule);
    }

    // Fills the rule reserved as `id` for `ins` placed at label `at`.
    void build(const Instruction& ins, const std::string& at, RuleId id) {
        StateId here = state(at);
        StateId next = state(next_.at(at));
        Rule rule;
        switch (ins.op) {
        case Instruction::Op::Push:
            rule = PdsRule{here, top_, next, {top_, symbol("v_" + ins.operand)}};
            break;
        case Instruction::Op::Pop: {
            StateId mid = state(at + ".pop");
            rule = PdsRule{here, top_, mid, {}};
            for (std::uint32_t g = 0; g < out_.system.num_symbols(); ++g)
                if (SymbolId(g) != top_)
                    aux("a_" + at + "_pop_" + out_.system.symbol_name(SymbolId(g)), PdsRule{mid, SymbolId(g), next, {top_}});
            break;
        }
        case Instruction::Op::Jmp:
            rule = PdsRule{here, top_, state(ins.operand), {top_}};
            break;
        case Instruction::Op::Call:
            rule = PdsRule{here, top_, state(ins.operand), {top_, symbol("ret_" + next_.at(at))}};
            break;
        case Instruction::Op::Ret: {
            StateId mid = state(at + ".ret");
            rule = PdsRule{here, top_, mid, {}};
            for (const std::string& site : sites_)
                aux("a_" + at + "_ret_" + site, PdsRule{mid, symbol("ret_" + site), state(site), {top_}});
            break;
        }
        case Instruction::Op::Nop:
            rule = PdsRule{here, top_, next, {top_}};
            break;
        case Instruction::Op::Selfmod: {
            RuleId removed = out_.rule_of.at(ins.operand);
            std::string name = "i_" + ins.operand + "_by_" + at;
            while (std::any_of(planned_.begin(), planned_.end(), [&](const Planned& p) { return p.name == name; }))
                name += "_";
            RuleId added = reserve(name, true);
            planned_[id.index()].rule = SelfModRule{here, removed, added, next};
            build(*ins.replacement, ins.operand, added);
            return;
        }
        }
        planned_[id.index()].rule = std::move(rule);
    }

    const Program& prog_;
    Compiled out_;
    SymbolId top_;
    std::unordered_map<std::string, std::string> next_;
    std::vector<std::string> sites_;
    std::vector<Planned> planned_;
    std::unordered_set<std::string> aux_names_;
};

} // namespace

Compiled compile(const Program& prog) { return Compiler(prog).run(); }

} // namespace smpds
