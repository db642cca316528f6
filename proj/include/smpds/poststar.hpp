#pragma once

#include "smpds/budget.hpp"
#include "smpds/pautomaton.hpp"

namespace smpds {

// Saturates a copy of `aut` so that it accepts post*(L(aut)).
//
// Requires rules pushing at most two symbols (see normalize_push), no
// self-removing rules, and an ε-free automaton with no transition into an
// initial state. Violations throw std::invalid_argument.
PAutomaton poststar(const Smpds& sys, const PAutomaton& aut, const SaturationOptions& options = {},
                    SaturationStats* stats = nullptr);

} // namespace smpds
