#pragma once

#include "smpds/text.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef SMPDS_TEST_DATA
#error "SMPDS_TEST_DATA must point at tests/data"
#endif

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(SMPDS_TEST_DATA) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data(const std::string& name) { return read_file(data_path(name)); }

// Four control points, three transition rules and one self-modifying rule;
// the listed configuration is (<p1, g1 g1>, t0).
inline smpds::Smpds four_points() { return smpds::parse_smpds(data("four_points.smpds")); }
// Target automaton: (<p0, g0 g0>, t0).
inline smpds::Smpds pre_fixture() { return smpds::parse_smpds(data("pre_fixture.smpds")); }
inline smpds::Smpds post_fixture() { return smpds::parse_smpds(data("post_fixture.smpds")); }

inline smpds::Configuration config(const smpds::Smpds& sys, const std::string& text) {
    return smpds::parse_configuration(sys, text);
}

} // namespace fixtures
