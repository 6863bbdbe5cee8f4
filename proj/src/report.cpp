#include "stripfold/report.hpp"

#include "json.hpp"

#include <sstream>

namespace stripfold {

void record_failure(CheckResult& c, const std::string& msg) {
  c.pass = false;
  ++c.failure_count;
  if (static_cast<int>(c.failures.size()) < kMaxRecordedFailures) c.failures.push_back(msg);
}

bool GridReport::pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* GridReport::find(const std::string& name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string GridReport::to_json() const {
  nlohmann::ordered_json j;
  j["pass"] = pass();
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["samples"] = c.samples;
    jc["worst_residual"] = c.worst_residual;
    jc["failure_count"] = c.failure_count;
    jc["failures"] = c.failures;
    j["checks"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

std::string GridReport::summary() const {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    out << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  (" << c.samples << " samples";
    if (c.failure_count > 0) out << ", " << c.failure_count << " failures";
    out << ")\n";
  }
  return out.str();
}

}  // namespace stripfold
