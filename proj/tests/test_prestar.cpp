#include "doctest.h"

#include "corpus.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

#include "smpds/prestar.hpp"

using namespace smpds;

namespace {

bool has_edge(const Smpds& sys, const PAutomaton& aut, const char* from, const char* label, const char* to) {
    for (const Transition& t : aut.transitions())
        if (format_aut_state(sys, aut, t.from) == from && sys.symbol_name(t.label) == label &&
            format_aut_state(sys, aut, t.to) == to)
            return true;
    return false;
}

} // namespace

TEST_CASE("four-point system start reaches the end of the trace") {
    Smpds sys = fixtures::four_points();
    Configuration target = fixtures::config(sys, "p3 t1 g3 g1");
    PAutomaton pre = prestar(sys, from_configs({target}));
    CHECK(accepts(pre, fixtures::config(sys, "p1 t0 g1 g1")));
    CHECK(accepts(pre, target));
    CHECK_FALSE(accepts(pre, fixtures::config(sys, "p1 t1 g1 g1")));
}

TEST_CASE("pre* contains its target set") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        corpus::Case c = corpus::make_case(seed);
        std::mt19937_64 rng(seed);
        auto goal = corpus::targets(c, rng);
        PAutomaton pre = prestar(c.gen.system, from_configs(goal));
        for (const Configuration& t : goal) CHECK(accepts(pre, t));
    }
}

TEST_CASE("swapped-in rule fixture") {
    Smpds sys = fixtures::pre_fixture();
    PAutomaton input = from_configs(sys.configs());
    SaturationStats stats;
    PAutomaton pre = prestar(sys, input, {}, &stats);
    CHECK(has_edge(sys, pre, "p4@t0", "g0", "p0@t0"));
    CHECK(has_edge(sys, pre, "p1@t0", "g1", "p0@t0"));
    CHECK(has_edge(sys, pre, "p3@t1", "g0", "p0@t0"));
    CHECK(has_edge(sys, pre, "p2@t1", "g2", "p3@t1"));
    CHECK(has_edge(sys, pre, "p5@t1", "g1", "p0@t0"));
    CHECK(stats.transitions_added == pre.num_transitions() - input.num_transitions());

    // (<p5, g1 g0 g0>, t1) -> (<p2, g2 g0 g0 g0>, t1) -> (<p3, g0 g0 g0>, t1)
    //   -> (<p4, g0 g0 g0>, t0) -> (<p0, g0 g0>, t0)
    CHECK(accepts(pre, fixtures::config(sys, "p5 t1 g1 g0 g0")));
    CHECK_FALSE(accepts(pre, fixtures::config(sys, "p5 t1 g1 g0")));
    CHECK_FALSE(accepts(pre, fixtures::config(sys, "p5 t0 g1 g0 g0")));

    std::vector<Configuration> all;
    for (const Configuration& x : enumerate(pre, 4)) all.push_back(x);
    for (const char* s : {"p5 t1 g1 g1", "p1 t1 g1 g0", "p2 t0 g2 g0 g0", "p0 t1 g0 g0", "p3 t0 g0 g0"})
        all.push_back(fixtures::config(sys, s));
    auto answers = corpus::reachability(sys, all, sys.configs());
    for (std::size_t i = 0; i < all.size(); ++i) {
        REQUIRE(answers[i].conclusive);
        CHECK(accepts(pre, all[i]) == answers[i].reaches);
    }
}

TEST_CASE("added transitions leave initial states") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        corpus::Case c = corpus::make_case(seed);
        std::mt19937_64 rng(seed);
        PAutomaton in = from_configs(corpus::targets(c, rng));
        PAutomaton pre = prestar(c.gen.system, in);
        for (std::size_t i = in.num_transitions(); i < pre.num_transitions(); ++i)
            CHECK(pre.is_initial(pre.transitions()[i].from));
        for (std::size_t i = in.num_states(); i < pre.num_states(); ++i)
            CHECK(pre.is_initial(AutStateId(static_cast<std::uint32_t>(i))));
        CHECK_FALSE(pre.has_epsilon());
    }
}

TEST_CASE("input preconditions") {
    Smpds sys = fixtures::four_points();
    Configuration c = sys.configs()[0];
    PAutomaton into_initial = from_configs({c});
    into_initial.add_transition(*into_initial.find_initial(c.state, c.phase), SymbolId(0),
                                into_initial.initial(c.state, c.phase));
    CHECK_THROWS_AS(prestar(sys, into_initial), std::invalid_argument);

    PAutomaton eps = from_configs({c});
    eps.add_transition(eps.plain("x"), kEpsilon, eps.plain("y"));
    CHECK_NOTHROW(prestar(sys, eps));

    Smpds bad = parse_smpds("rule r: p g -> p\nsmrule m: p (m -> r) p\nphase a: r m\n");
    CHECK_THROWS_AS(prestar(bad, PAutomaton{}), std::invalid_argument);
}

TEST_CASE("pre* agrees with the bounded oracle") {
    corpus::Tally total;
    for (std::uint64_t seed = 1; seed <= 40; ++seed)
        total.add(corpus::pre_case(seed, [](const Smpds& s, const PAutomaton& a) { return prestar(s, a); }));
    CHECK(total.mismatches == 0);
    CHECK(total.contradictions == 0);
    CHECK(total.checked > 600);
    CHECK(total.positives > 100);
}

TEST_CASE("saturating twice adds nothing") {
    SaturationOptions again;
    again.check_input = false;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        corpus::Case c = corpus::make_case(seed);
        std::mt19937_64 rng(seed);
        PAutomaton pre = prestar(c.gen.system, from_configs(corpus::targets(c, rng)));
        SaturationStats stats;
        PAutomaton twice = prestar(c.gen.system, pre, again, &stats);
        CHECK(stats.transitions_added == 0);
        CHECK(twice.num_transitions() == pre.num_transitions());
    }
}
