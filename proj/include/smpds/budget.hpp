#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace smpds {

class BudgetExceeded : public std::runtime_error {
public:
    enum class Kind { Time, Memory };
    BudgetExceeded(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Resident set size of this process, in bytes (0 if unavailable).
std::size_t current_rss_bytes();
// Peak resident set size of this process, in bytes.
std::size_t peak_rss_bytes();

// Wall-time and memory caps for one analysis. Long-running loops call
// poll(); every few thousand calls it checks the clock and the resident
// set growth since construction and throws BudgetExceeded.
class Budget {
public:
    Budget(std::optional<std::chrono::milliseconds> time_cap, std::optional<std::size_t> memory_cap_bytes);

    static Budget unlimited() { return Budget(std::nullopt, std::nullopt); }

    void poll() {
        if (++ticks_ % 4096 == 0) check();
    }
    void check() const;

private:
    std::chrono::steady_clock::time_point start_;
    std::optional<std::chrono::milliseconds> time_cap_;
    std::optional<std::size_t> memory_cap_;
    std::size_t base_rss_;
    std::size_t ticks_ = 0;
};

struct SaturationOptions {
    // Reject inputs that violate the saturation preconditions. Turning this
    // off lets a saturated automaton be fed back in (idempotence checks).
    bool check_input = true;
    Budget* budget = nullptr;
};

struct SaturationStats {
    std::size_t transitions_added = 0;
    std::size_t phases_materialized = 0;
    double wall_ms = 0;
};

} // namespace smpds
