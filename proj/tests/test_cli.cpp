#include "doctest.h"

#include "cli.hpp"
#include "fixtures.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = smpds::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("smpds_cli_" + name)).string();
}

} // namespace

TEST_CASE("check on four-point system") {
    std::string model = fixtures::data_path("four_points.smpds");
    std::string aut = temp("e1.aut");
    Result post = run({"poststar", "--model", model, "--from-model-configs", "--out", aut});
    REQUIRE(post.code == 0);
    Result yes = run({"check", "--model", model, "--aut", aut, "--config", "p3 t1 g3 g1"});
    CHECK(yes.code == 0);
    CHECK(yes.out == "Yes\n");
    Result no = run({"check", "--model", model, "--aut", aut, "--config", "p3 t1 g3 g3"});
    CHECK(no.code == 1);
    CHECK(no.out == "No\n");
    Result missing = run({"check", "--model", temp("does_not_exist"), "--aut", aut, "--config", "p3 t1 g3 g1"});
    CHECK(missing.code == 2);
    CHECK_FALSE(missing.err.empty());
    std::remove(aut.c_str());
}

TEST_CASE("pre* from the command line") {
    std::string model = fixtures::data_path("four_points.smpds");
    Result pre = run({"prestar", "--model", model, "--config", "p3 t1 g3 g1"});
    REQUIRE(pre.code == 0);
    std::string aut = temp("pre.aut");
    {
        std::ofstream f(aut);
        f << pre.out;
    }
    CHECK(run({"check", "--model", model, "--aut", aut, "--config", "p1 t0 g1 g1"}).code == 0);
    Result listed = run({"enumerate", "--model", model, "--aut", aut, "--max-len", "2"});
    CHECK(listed.code == 0);
    CHECK(listed.out.find("p1 t0 g1 g1\n") != std::string::npos);
    std::remove(aut.c_str());
}

TEST_CASE("outputs are deterministic") {
    std::string model = fixtures::data_path("post_fixture.smpds");
    for (std::vector<std::string> args : std::vector<std::vector<std::string>>{
             {"poststar", "--model", model, "--from-model-configs"},
             {"prestar", "--model", model, "--from-model-configs"},
             {"translate", "--model", model, "--to", "pds"},
             {"translate", "--model", model, "--to", "sympds"},
             {"normalize", "--model", model},
             {"asm2smpds", fixtures::data_path("patched_push.sasm")},
             {"bench", "--rules", "10", "--smrules", "3", "--count", "2"},
         }) {
        Result a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK_FALSE(a.out.empty());
        if (args[0] != "bench") CHECK(a.out == b.out);
    }
}

TEST_CASE("validate") {
    CHECK(run({"validate", "--model", fixtures::data_path("four_points.smpds")}).code == 0);
    std::string bad = temp("bad.smpds");
    {
        std::ofstream f(bad);
        f << "rule r: p g -> p\nsmrule m: p (r -> r) p\nphase a: r m nosuch\n";
    }
    Result r = run({"validate", "--model", bad});
    CHECK(r.code != 0);
    std::remove(bad.c_str());
}

TEST_CASE("bench writes csv") {
    Result r = run({"--seed", "3", "bench", "--rules", "10", "--smrules", "3", "--count", "2", "--mode", "post"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "rules,smrules,direct_ms,direct_mb,pds_ms,pds_saturate_ms,total_ms,status");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"translate", "--model", fixtures::data_path("four_points.smpds"), "--to", "nfa"}).code == 2);
}
