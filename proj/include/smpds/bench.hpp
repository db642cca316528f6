#pragma once

#include "smpds/budget.hpp"
#include "smpds/model.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace smpds {

struct GenParams {
    std::size_t num_states = 4;
    std::size_t num_symbols = 3;
    std::size_t num_rules = 8;   // |Δ|
    std::size_t num_smrules = 2; // |Δc|
    std::size_t max_rhs_len = 2;
    std::uint64_t seed = 1;
};

struct Generated {
    Smpds system;
    Configuration initial;
};

// Uniform random system: every rule picks its control points and symbols
// uniformly and its right-hand side length uniformly in [0, max_rhs_len];
// every self-modifying rule swaps two uniformly chosen Δ rules. The phase
// "init" holds all rules; the initial configuration has two stack symbols.
// Throws std::invalid_argument for infeasible parameters.
Generated generate(const GenParams& params);

enum class BenchMode { Pre, Post };

struct BenchLimits {
    std::optional<std::chrono::milliseconds> time;
    std::optional<std::size_t> memory_bytes;
};

struct ReportRow {
    std::size_t rules = 0;
    std::size_t smrules = 0;
    double direct_ms = 0;
    double direct_mb = 0;
    double pds_ms = 0;          // phase closure + translation
    double pds_saturate_ms = 0; // classical saturation
    double total_ms = 0;        // pds_ms + pds_saturate_ms
    std::string status;         // ok | timeout | memout | direct-timeout | direct-memout
    std::size_t phases = 0;     // phases translated by the explicit path
    std::optional<bool> agree;  // sampled membership agreement when both paths finished
};

// Direct saturation against closure + to_pds + classical saturation on one
// generated instance. Each path gets its own budget.
ReportRow run_comparison(const GenParams& params, const BenchLimits& limits, BenchMode mode = BenchMode::Pre,
                         std::size_t samples = 200);

std::string csv_header();
std::string csv_row(const ReportRow& row);

} // namespace smpds
