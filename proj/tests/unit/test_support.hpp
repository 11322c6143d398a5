#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "leafmatch/errors.hpp"

namespace test_support {

inline std::string fixture_path(const std::string& name) { return std::string(LEAFMATCH_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw leafmatch::InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }

/// Relative closeness with an absolute floor for values near zero.
inline bool near_rel(double a, double b, double rel, double abs_floor = 0.0) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= std::max(rel * scale, abs_floor);
}

}  // namespace test_support
