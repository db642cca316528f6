#include "smpds/budget.hpp"

#include <sys/resource.h>
#include <unistd.h>

#include <fstream>

namespace smpds {

std::size_t current_rss_bytes() {
    std::ifstream statm("/proc/self/statm");
    std::size_t pages_total = 0, pages_resident = 0;
    if (!(statm >> pages_total >> pages_resident)) return 0;
    return pages_resident * static_cast<std::size_t>(sysconf(_SC_PAGESIZE));
}

std::size_t peak_rss_bytes() {
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
    return static_cast<std::size_t>(usage.ru_maxrss) * 1024; // Linux reports KiB
}

Budget::Budget(std::optional<std::chrono::milliseconds> time_cap, std::optional<std::size_t> memory_cap_bytes)
    : start_(std::chrono::steady_clock::now()),
      time_cap_(time_cap),
      memory_cap_(memory_cap_bytes),
      base_rss_(memory_cap_bytes ? current_rss_bytes() : 0) {}

void Budget::check() const {
    if (time_cap_ && std::chrono::steady_clock::now() - start_ > *time_cap_)
        throw BudgetExceeded(BudgetExceeded::Kind::Time, "time budget exhausted");
    if (memory_cap_) {
        std::size_t rss = current_rss_bytes();
        if (rss > base_rss_ && rss - base_rss_ > *memory_cap_)
            throw BudgetExceeded(BudgetExceeded::Kind::Memory, "memory budget exhausted");
    }
}

} // namespace smpds
