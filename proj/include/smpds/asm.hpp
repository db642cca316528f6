#pragma once

#include "smpds/model.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace smpds {

// Mini self-modifying assembly (.sasm):
//
//   entry <label>
//   values <v> <v> ...           optional; defaults to every pushed value
//   <label>: push <v> | pop | jmp <L> | call <L> | ret | nop
//   <label>: selfmod <L> <instruction>
//
// Instructions run in file order; falling off the last one reaches the
// exit point. `selfmod L i` overwrites the instruction originally at L
// with i, which must take as many operands as the original.

struct Instruction {
    enum class Op { Push, Pop, Jmp, Call, Ret, Nop, Selfmod };

    Op op = Op::Nop;
    std::string operand;                             // value (push) or label (jmp, call, selfmod)
    std::shared_ptr<const Instruction> replacement; // selfmod only

    friend bool operator==(const Instruction& a, const Instruction& b);
};

// Number of operands, counting a selfmod's target and replacement.
std::size_t operand_count(const Instruction& i);

struct Line {
    std::string label;
    Instruction instruction;
    std::size_t line = 0;
};

struct Program {
    std::string entry;
    std::vector<std::string> values; // declared value set, empty if none declared
    std::vector<Line> lines;

    [[nodiscard]] const Line* find(std::string_view label) const;

    // Line numbers are not compared.
    friend bool operator==(const Program& a, const Program& b);
};

struct AsmOptions {
    // Let a selfmod overwrite another selfmod instruction.
    bool allow_meta_selfmod = false;
};

// Throws ParseError with the offending line number.
Program parse_program(std::string_view text, const AsmOptions& options = {});
std::string print_program(const Program& prog);

struct Compiled {
    Smpds system;
    std::unordered_map<std::string, RuleId> rule_of; // label -> rule of the instruction there
    StateId exit;
};

// Every instruction reads the marker symbol `top`, which always sits on
// top of the stack; pushed values and return addresses live below it.
// The system has one phase, "init", holding the rules of the unmodified
// program, and one configuration: the entry point with stack `top`.
Compiled compile(const Program& prog);

} // namespace smpds
