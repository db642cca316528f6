#include "doctest.h"

#include "smpds/bench.hpp"
#include "smpds/prestar.hpp"
#include "smpds/text.hpp"
#include "smpds/translate.hpp"

using namespace smpds;

TEST_CASE("generation is deterministic") {
    GenParams p;
    p.seed = 42;
    CHECK(print_smpds(generate(p).system) == print_smpds(generate(p).system));
    p.seed = 43;
    GenParams q = p;
    q.seed = 44;
    CHECK(print_smpds(generate(p).system) != print_smpds(generate(q).system));
}

TEST_CASE("rule counts") {
    GenParams p;
    p.num_states = 10;
    p.num_symbols = 5;
    p.num_rules = 43;
    p.num_smrules = 7;
    Generated g = generate(p);
    CHECK(g.system.delta().size() == 43);
    CHECK(g.system.delta_c().size() == 7);
    CHECK(g.system.num_rules() == 50);
    CHECK(g.initial.stack.size() == 2);
    CHECK(g.initial.phase == g.system.all_rules_phase());
    for (RuleId m : g.system.delta_c()) {
        CHECK_FALSE(g.system.is_selfmod(g.system.selfmod_rule(m)->removed));
        CHECK_FALSE(g.system.is_selfmod(g.system.selfmod_rule(m)->added));
    }
}

TEST_CASE("generated systems are well formed") {
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        GenParams p;
        p.num_states = 1 + seed % 5;
        p.num_symbols = 1 + seed % 4;
        p.num_rules = 1 + seed % 12;
        p.num_smrules = seed % 4;
        p.seed = seed;
        Generated g = generate(p);
        CHECK_FALSE(validate(g.system).has_errors());
        Budget b(std::chrono::milliseconds(5000), std::nullopt);
        CHECK_NOTHROW(phase_closure(g.system, {g.initial.phase}, ClosureDirection::Forward, &b));
    }
}

TEST_CASE("infeasible parameters") {
    GenParams p;
    p.num_states = 0;
    CHECK_THROWS_AS(generate(p), std::invalid_argument);
    p = {};
    p.num_rules = 0;
    CHECK_THROWS_AS(generate(p), std::invalid_argument);
    p = {};
    p.num_smrules = 0;
    CHECK_NOTHROW(generate(p));
}

TEST_CASE("tiny instance") {
    GenParams p;
    p.num_states = 5;
    p.num_symbols = 4;
    p.num_rules = 10;
    p.num_smrules = 3;
    for (BenchMode mode : {BenchMode::Pre, BenchMode::Post}) {
        ReportRow row = run_comparison(p, {std::chrono::milliseconds(30000), std::nullopt}, mode);
        CHECK(row.status == "ok");
        CHECK(row.rules == 10);
        CHECK(row.smrules == 3);
        CHECK(row.total_ms == doctest::Approx(row.pds_ms + row.pds_saturate_ms));
        CHECK(row.direct_ms >= 0);
        REQUIRE(row.agree.has_value());
        CHECK(*row.agree);
    }
}

TEST_CASE("tiny instance ordering") {
    GenParams p;
    p.num_states = 5;
    p.num_symbols = 4;
    p.num_rules = 10;
    p.num_smrules = 3;
    for (BenchMode mode : {BenchMode::Pre, BenchMode::Post}) {
        CAPTURE(mode == BenchMode::Pre ? "pre" : "post");
        ReportRow row = run_comparison(p, {std::chrono::milliseconds(30000), std::nullopt}, mode);
        REQUIRE(row.status == "ok");
        CHECK(row.direct_ms <= row.total_ms);
    }
}

TEST_CASE("without self-modification both paths agree") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GenParams p;
        p.num_smrules = 0;
        p.seed = seed;
        ReportRow row = run_comparison(p, {}, seed % 2 ? BenchMode::Pre : BenchMode::Post, 500);
        CHECK(row.status == "ok");
        CHECK(row.phases == 1);
        REQUIRE(row.agree.has_value());
        CHECK(*row.agree);
    }
}

TEST_CASE("budget exhaustion is reported") {
    GenParams p;
    p.num_states = 100;
    p.num_symbols = 20;
    p.num_rules = 1009;
    p.num_smrules = 10;
    ReportRow row = run_comparison(p, {std::chrono::milliseconds(1), std::nullopt});
    CHECK((row.status == "direct-timeout" || row.status == "timeout"));
    CHECK_FALSE(row.agree.has_value());
}

TEST_CASE("csv") {
    CHECK(csv_header() == "rules,smrules,direct_ms,direct_mb,pds_ms,pds_saturate_ms,total_ms,status");
    ReportRow row;
    row.rules = 10;
    row.smrules = 3;
    row.status = "ok";
    std::string line = csv_row(row);
    CHECK(line.rfind("10,3,", 0) == 0);
    CHECK(line.substr(line.size() - 3) == ",ok");
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
}
