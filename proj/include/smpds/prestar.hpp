#pragma once

#include "smpds/budget.hpp"
#include "smpds/pautomaton.hpp"

namespace smpds {

// Saturates a copy of `aut` so that it accepts pre*(L(aut)).
//
// Requires a system without self-removing rules (see normalize_selfmod) and
// an automaton with no transition into an initial state. Violations throw
// std::invalid_argument before any work is done. Transitions are only ever
// added from initial states; no state is created except initial ones.
PAutomaton prestar(const Smpds& sys, const PAutomaton& aut, const SaturationOptions& options = {},
                   SaturationStats* stats = nullptr);

// Shared by both saturation procedures.
void check_saturation_input(const Smpds& sys, const PAutomaton& aut, bool allow_epsilon);

} // namespace smpds
