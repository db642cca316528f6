#pragma once

#include "smpds/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smpds {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Splits one line of the line-oriented formats into tokens. '#' starts a
// comment; ':', '(', ')' and "->" are tokens of their own; a brace group
// "{a, b}" is one token with the whitespace removed.
std::vector<std::string> tokenize_line(std::string_view line);

// SM-PDS textual format:
//   state <name>
//   symbol <name>
//   rule <id>: <p> <gamma> -> <p'> [<g1> [<g2> ...]]
//   smrule <id>: <p> (<rid1> -> <rid2>) <p'>
//   phase <name>: <rid> <rid> ...
//   config: <p> <phase> <g1> <g2> ...
// States and symbols are declared on first use. Rules may be referenced
// before their definition line.
Smpds parse_smpds(std::string_view text);

// Canonical form: states, symbols, rules (by id), phases, configs.
std::string print_smpds(const Smpds& sys);

// A phase reference: a declared phase name or "{r1,r2,...}".
Phase parse_phase(const Smpds& sys, std::string_view token);

// "<p> <phase> <g1> ..." against an existing system (nothing is declared).
Configuration parse_configuration(const Smpds& sys, std::string_view text);

bool is_identifier(std::string_view s);

} // namespace smpds
