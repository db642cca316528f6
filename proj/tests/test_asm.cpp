#include "doctest.h"

#include "fixtures.hpp"
#include "oracle.hpp"

#include "smpds/asm.hpp"
#include "smpds/poststar.hpp"
#include "smpds/translate.hpp"

using namespace smpds;

namespace {

bool hidden_reachable(const Compiled& c) {
    PAutomaton post = poststar(c.system, from_configs(c.system.configs()));
    return accepts_some_at(post, *c.system.find_state("hidden"));
}

bool hidden_reachable_erased(const Compiled& c) {
    Erased e = erase_self_modification(c.system);
    std::vector<Configuration> start;
    for (const Configuration& x : c.system.configs()) start.push_back({x.state, x.stack, e.map(x.phase)});
    std::vector<Phase> seeds;
    for (const Configuration& x : start) seeds.push_back(x.phase);
    Pds pds = to_pds(e.system, phase_closure(e.system, seeds));
    PAutomaton post = pds_poststar(pds, from_configs(start));
    return accepts_some_at(post, *c.system.find_state("hidden"));
}

} // namespace

TEST_CASE("rewritten push program") {
    Program prog = parse_program(fixtures::data("patched_push.sasm"));
    CHECK(prog.entry == "start");
    std::size_t selfmods = 0;
    for (const Line& l : prog.lines)
        if (l.instruction.op == Instruction::Op::Selfmod) ++selfmods;
    CHECK(selfmods == 1);
    const Line* start = prog.find("start");
    REQUIRE(start);
    REQUIRE(start->instruction.replacement);
    CHECK(start->instruction.replacement->op == Instruction::Op::Jmp);
    CHECK(operand_count(*start->instruction.replacement) == operand_count(prog.find("patch")->instruction));
}

TEST_CASE("push replaced by jmp") {
    Program prog = parse_program("entry a\na: selfmod b jmp c\nb: push v0\nc: nop\n");
    CHECK(prog.lines.size() == 3);
    CHECK(prog.find("a")->instruction.replacement->operand == "c");
}

TEST_CASE("program errors") {
    auto line_of = [](const char* text) -> std::size_t {
        try {
            parse_program(text);
        } catch (const ParseError& e) {
            return e.line() ? e.line() : 1000;
        }
        return 0;
    };
    try {
        parse_program("");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("no entry") != std::string::npos);
    }
    CHECK(line_of("entry a\na: frob\n") == 2);
    CHECK(line_of("entry a\na: jmp nowhere\n") == 2);
    CHECK(line_of("entry a\na: nop\na: nop\n") == 3);
    CHECK(line_of("entry a\nvalues x\na: push y\n") == 3);
    CHECK(line_of("entry a\na: selfmod b nop\nb: push v\n") == 2);
    CHECK(line_of("entry a\na: selfmod b selfmod a nop\nb: selfmod a nop\n") == 2);
    CHECK(line_of("entry a\na: push\n") == 2);
    CHECK(line_of("entry a\n__x: nop\n") == 2);
}

TEST_CASE("meta self-modification needs the flag") {
    std::string text = fixtures::data("meta.sasm");
    CHECK_THROWS_AS(parse_program(text), ParseError);
    AsmOptions opt;
    opt.allow_meta_selfmod = true;
    Program prog = parse_program(text, opt);
    Compiled c = compile(prog);
    CHECK(validate(c.system).empty());
    CHECK(c.system.delta_c().size() == 3);
}

TEST_CASE("program round trip") {
    AsmOptions opt;
    opt.allow_meta_selfmod = true;
    for (const char* f : {"patched_push.sasm", "call_patch.sasm", "two_stage.sasm", "loop_decrypt.sasm", "ret_patch.sasm", "meta.sasm"}) {
        Program prog = parse_program(fixtures::data(f), opt);
        std::string printed = print_program(prog);
        Program back = parse_program(printed, opt);
        CHECK(back == prog);
        CHECK(print_program(back) == printed);
    }
}

TEST_CASE("the hidden block needs the rewrite") {
    Compiled c = compile(parse_program(fixtures::data("patched_push.sasm")));
    CHECK(validate(c.system).empty());
    CHECK(hidden_reachable(c));
    CHECK_FALSE(hidden_reachable_erased(c));

    // the rewrite happens exactly once, before `patch` is reached
    Configuration c0 = c.system.configs()[0];
    BoundedReach r = bounded_reach(c.system, c0, 6, 10000);
    CHECK_FALSE(r.truncated());
    StateId hidden = *c.system.find_state("hidden");
    RuleId patched = c.rule_of.at("patch");
    bool seen = false;
    for (const Configuration& x : r.visited) {
        if (x.state != hidden) continue;
        seen = true;
        CHECK_FALSE(x.phase.contains(patched));
    }
    CHECK(seen);
}

TEST_CASE("straight-line program is a plain PDS") {
    Compiled c = compile(parse_program("entry a\na: push x\nb: push y\nc: pop\nd: nop\n"));
    CHECK(c.system.delta_c().empty());
    CHECK(validate(c.system).empty());
    PAutomaton post = poststar(c.system, from_configs(c.system.configs()));
    CHECK(accepts_some_at(post, c.exit));
    Configuration done{c.exit, {*c.system.find_symbol("top"), *c.system.find_symbol("v_x")}, c.system.configs()[0].phase};
    CHECK(accepts(post, done));
}

TEST_CASE("call and return") {
    Compiled c = compile(parse_program("entry m\nm: push a\nm1: call f\nm2: nop\nf: push b\nf1: pop\nf2: ret\n"));
    Phase init = c.system.configs()[0].phase;
    PAutomaton post = poststar(c.system, from_configs(c.system.configs()));
    SymbolId top = *c.system.find_symbol("top"), va = *c.system.find_symbol("v_a");
    Configuration back{*c.system.find_state("m2"), {top, va}, init};
    CHECK(accepts(post, back));
    BoundedReach r = bounded_reach(c.system, c.system.configs()[0], 6, 10000);
    CHECK_FALSE(r.truncated());
    CHECK(r.visited.count(back) == 1);
    for (const Configuration& x : enumerate(post, 4)) CHECK(r.visited.count(x) == 1);
    for (const Configuration& x : r.visited) CHECK(accepts(post, x));
}

TEST_CASE("corpus programs hide their block") {
    for (const char* f : {"patched_push.sasm", "call_patch.sasm", "two_stage.sasm", "loop_decrypt.sasm", "ret_patch.sasm"}) {
        CAPTURE(f);
        Compiled c = compile(parse_program(fixtures::data(f)));
        CHECK(hidden_reachable(c));
        CHECK_FALSE(hidden_reachable_erased(c));
    }
}
