#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "xpathsat/dtd.hpp"

#ifndef XPATHSAT_FIXTURE_DIR
#error "XPATHSAT_FIXTURE_DIR must be defined"
#endif

namespace xpathsat::testing {

inline std::string fixture_path(const std::string& name) { return std::string(XPATHSAT_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Dtd example_dtd() { return parse_dtd(read_fixture("example.dtd"), DtdFormat::Native); }

// Seven-node tree conforming to the example DTD.
inline constexpr const char* kExampleTree = "r(r(c),a,a,b(a))";

}  // namespace xpathsat::testing
