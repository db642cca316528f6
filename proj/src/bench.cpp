#include "smpds/bench.hpp"
#include "smpds/poststar.hpp"
#include "smpds/prestar.hpp"
#include "smpds/translate.hpp"

#include <cstdio>
#include <random>
#include <stdexcept>

namespace smpds {

Generated generate(const GenParams& params) {
    if (params.num_states < 1 || params.num_symbols < 1 || params.num_rules < 1)
        throw std::invalid_argument("generate: states, symbols and rules must all be at least 1");
    if (params.num_rules + params.num_smrules >= std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("generate: too many rules");

    std::mt19937_64 rng(params.seed);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    Generated g;
    Smpds& sys = g.system;
    for (std::size_t i = 0; i < params.num_states; ++i) sys.add_state("p" + std::to_string(i));
    for (std::size_t i = 0; i < params.num_symbols; ++i) sys.add_symbol("g" + std::to_string(i));
    for (std::size_t i = 0; i < params.num_rules; ++i) {
        PdsRule r;
        r.lhs_state = StateId(std::uint32_t(pick(params.num_states)));
        r.lhs_symbol = SymbolId(std::uint32_t(pick(params.num_symbols)));
        r.rhs_state = StateId(std::uint32_t(pick(params.num_states)));
        std::size_t len = pick(params.max_rhs_len + 1);
        for (std::size_t k = 0; k < len; ++k) r.rhs_word.emplace_back(std::uint32_t(pick(params.num_symbols)));
        sys.add_rule("r" + std::to_string(i), std::move(r));
    }
    for (std::size_t i = 0; i < params.num_smrules; ++i) {
        SelfModRule m;
        m.from_state = StateId(std::uint32_t(pick(params.num_states)));
        m.removed = RuleId(std::uint32_t(pick(params.num_rules)));
        m.added = RuleId(std::uint32_t(pick(params.num_rules)));
        m.to_state = StateId(std::uint32_t(pick(params.num_states)));
        sys.add_selfmod("m" + std::to_string(i), m);
    }
    Phase init = sys.all_rules_phase();
    sys.add_phase("init", init);
    g.initial.state = StateId(std::uint32_t(pick(params.num_states)));
    for (int k = 0; k < 2; ++k) g.initial.stack.emplace_back(std::uint32_t(pick(params.num_symbols)));
    g.initial.phase = init;
    sys.add_config(g.initial);
    return g;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
}

Budget make_budget(const BenchLimits& limits) { return Budget(limits.time, limits.memory_bytes); }

std::string failure(const BudgetExceeded& e) { return e.kind() == BudgetExceeded::Kind::Time ? "timeout" : "memout"; }

} // namespace

// Runs both paths once on a small instance so that the first timed row
// does not pay for cold caches and allocator growth.
void warm_up() {
    static const bool done = [] {
        Generated g = generate(GenParams{});
        PAutomaton in = from_configs({g.initial});
        Pds pds = to_pds(g.system, phase_closure(g.system, {g.initial.phase}));
        prestar(g.system, in);
        poststar(g.system, in);
        pds_prestar(pds, in);
        pds_poststar(pds, in);
        return true;
    }();
    (void)done;
}

ReportRow run_comparison(const GenParams& params, const BenchLimits& limits, BenchMode mode, std::size_t samples) {
    warm_up();
    Generated gen = generate(params);
    Smpds sys = std::move(gen.system);
    Configuration initial = gen.initial;
    if (!is_push_normal(sys)) {
        Normalized n = normalize_push(sys);
        initial = n.lift(initial);
        sys = std::move(n.system);
    }

    ReportRow row;
    row.rules = params.num_rules;
    row.smrules = params.num_smrules;

    std::mt19937_64 rng(params.seed ^ 0x5bd1e995u);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    // Query: pre* of a configuration a few self-modifications away from the
    // initial phase, or post* of the initial configuration.
    Configuration query = initial;
    if (mode == BenchMode::Pre) {
        Phase theta = initial.phase;
        for (int k = 0; k < 3; ++k) {
            std::vector<Phase> options;
            for (RuleId m : sys.delta_c())
                if (auto next = fire(sys, m, theta)) options.push_back(*next);
            if (options.empty()) break;
            theta = options[pick(options.size())];
        }
        query.state = StateId(std::uint32_t(pick(sys.num_states())));
        query.stack = {SymbolId(std::uint32_t(pick(sys.num_symbols()))), SymbolId(std::uint32_t(pick(sys.num_symbols())))};
        query.phase = theta;
    }
    PAutomaton input = from_configs({query});

    std::optional<PAutomaton> direct;
    check_saturation_input(sys, input, mode == BenchMode::Pre);
    {
        Budget budget = make_budget(limits);
        std::size_t rss = current_rss_bytes();
        auto start = std::chrono::steady_clock::now();
        try {
            SaturationOptions opts;
            opts.check_input = false;
            opts.budget = &budget;
            direct = mode == BenchMode::Pre ? prestar(sys, input, opts) : poststar(sys, input, opts);
        } catch (const BudgetExceeded& e) {
            row.status = "direct-" + failure(e);
        }
        row.direct_ms = ms_since(start);
        std::size_t after = current_rss_bytes();
        row.direct_mb = after > rss ? double(after - rss) / (1024.0 * 1024.0) : 0.0;
    }

    std::optional<PAutomaton> explicit_result;
    std::vector<Phase> phases;
    {
        Budget budget = make_budget(limits);
        auto start = std::chrono::steady_clock::now();
        try {
            // The translation covers the phases reachable from the initial
            // phase, whatever the query.
            bool pre = mode == BenchMode::Pre;
            phases = phase_closure(sys, {initial.phase}, ClosureDirection::Forward, &budget);
            row.phases = phases.size();
            Pds pds = to_pds(sys, phases, true, &budget);
            row.pds_ms = ms_since(start);
            auto sat = std::chrono::steady_clock::now();
            explicit_result = pre ? pds_prestar(pds, input, &budget) : pds_poststar(pds, input, &budget);
            row.pds_saturate_ms = ms_since(sat);
        } catch (const BudgetExceeded& e) {
            if (row.status.empty()) row.status = failure(e);
            if (row.pds_ms == 0) row.pds_ms = ms_since(start);
            else row.pds_saturate_ms = ms_since(start) - row.pds_ms;
        }
        row.total_ms = row.pds_ms + row.pds_saturate_ms;
    }
    if (row.status.empty()) row.status = "ok";

    if (direct && explicit_result) {
        bool agree = accepts(*direct, query) == accepts(*explicit_result, query);
        for (std::size_t i = 0; i < samples && agree; ++i) {
            Configuration c;
            c.state = StateId(std::uint32_t(pick(sys.num_states())));
            std::size_t len = pick(4);
            for (std::size_t k = 0; k < len; ++k) c.stack.emplace_back(std::uint32_t(pick(sys.num_symbols())));
            c.phase = phases[pick(phases.size())];
            agree = accepts(*direct, c) == accepts(*explicit_result, c);
        }
        row.agree = agree;
    }
    return row;
}

std::string csv_header() { return "rules,smrules,direct_ms,direct_mb,pds_ms,pds_saturate_ms,total_ms,status"; }

std::string csv_row(const ReportRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.3f,%.3f,%.3f,%.3f,%.3f,", row.rules, row.smrules, row.direct_ms,
                  row.direct_mb, row.pds_ms, row.pds_saturate_ms, row.total_ms);
    return buf + row.status;
}

} // namespace smpds
