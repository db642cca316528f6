#include "smpds/phase.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

namespace smpds {
namespace {

constexpr std::size_t kChunkBits = 12;
constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

struct Key {
    const std::vector<RuleId>* members;
};

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::size_t seed = k.members->size();
        for (RuleId r : *k.members) hash_combine(seed, r.value);
        return seed;
    }
};

struct KeyEq {
    bool operator()(const Key& a, const Key& b) const noexcept { return *a.members == *b.members; }
};

class PhaseTable {
public:
    static PhaseTable& instance() {
        static PhaseTable table;
        return table;
    }

    std::uint32_t intern(std::vector<RuleId> members) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());

        std::lock_guard lock(insert_mutex_);
        if (auto it = index_.find(Key{&members}); it != index_.end()) return it->second;

        std::size_t h = count_.load(std::memory_order_relaxed);
        std::size_t chunk = h >> kChunkBits;
        if (chunk >= kMaxChunks) throw std::length_error("phase table exhausted");
        if (!chunks_[chunk].load(std::memory_order_relaxed)) {
            owned_[chunk] = std::make_unique<std::vector<RuleId>[]>(kChunkSize);
            chunks_[chunk].store(owned_[chunk].get(), std::memory_order_release);
        }
        std::vector<RuleId>& slot = chunks_[chunk].load(std::memory_order_relaxed)[h & (kChunkSize - 1)];
        slot = std::move(members);
        index_.emplace(Key{&slot}, static_cast<std::uint32_t>(h));
        count_.store(h + 1, std::memory_order_release);
        return static_cast<std::uint32_t>(h);
    }

    const std::vector<RuleId>& get(std::uint32_t h) const {
        return chunks_[h >> kChunkBits].load(std::memory_order_acquire)[h & (kChunkSize - 1)];
    }

    std::size_t size() const { return count_.load(std::memory_order_acquire); }

private:
    PhaseTable() { owned_.resize(kMaxChunks); }

    std::mutex insert_mutex_;
    std::unordered_map<Key, std::uint32_t, KeyHash, KeyEq> index_;
    std::array<std::atomic<std::vector<RuleId>*>, kMaxChunks> chunks_{};
    std::vector<std::unique_ptr<std::vector<RuleId>[]>> owned_;
    std::atomic<std::size_t> count_{0};
};

} // namespace

Phase::Phase() : handle_(PhaseTable::instance().intern({})) {}

Phase Phase::of(std::vector<RuleId> members) { return Phase(PhaseTable::instance().intern(std::move(members))); }

std::span<const RuleId> Phase::members() const { return PhaseTable::instance().get(handle_); }

bool Phase::contains(RuleId r) const {
    auto m = members();
    return std::binary_search(m.begin(), m.end(), r);
}

Phase Phase::updated(RuleId removed, RuleId added) const {
    if (removed == added) return contains(removed) ? *this : with(added);
    auto m = members();
    std::vector<RuleId> out;
    out.reserve(m.size() + 1);
    for (RuleId r : m)
        if (r != removed) out.push_back(r);
    out.push_back(added);
    return of(std::move(out));
}

Phase Phase::with(RuleId r) const {
    if (contains(r)) return *this;
    auto m = members();
    std::vector<RuleId> out(m.begin(), m.end());
    out.push_back(r);
    return of(std::move(out));
}

Phase Phase::without(RuleId r) const {
    if (!contains(r)) return *this;
    auto m = members();
    std::vector<RuleId> out;
    out.reserve(m.size());
    for (RuleId x : m)
        if (x != r) out.push_back(x);
    return of(std::move(out));
}

Phase Phase::united(std::span<const RuleId> extra) const {
    if (extra.empty()) return *this;
    auto m = members();
    std::vector<RuleId> out(m.begin(), m.end());
    out.insert(out.end(), extra.begin(), extra.end());
    return of(std::move(out));
}

bool operator<(Phase a, Phase b) {
    if (a == b) return false;
    auto x = a.members();
    auto y = b.members();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

std::size_t Phase::interned_count() { return PhaseTable::instance().size(); }

} // namespace smpds
