#pragma once

#include "stripfold/model.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace testsupport {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

inline std::string fixture_text(const std::string& name) { return read_file(fixture_path(name)); }

inline stripfold::StripModel load_fixture(const std::string& name) {
  return stripfold::parse_model(fixture_text(name));
}

}  // namespace testsupport
