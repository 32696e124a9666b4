#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbgeo/suites.hpp"

namespace tbg {

inline constexpr const char* kToolName = "tbgeo";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportVersion = 1;

struct Report {
  std::string spec_name;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<SuiteResult> suites;
  bool pass = false;
};

Report make_report(const VerifySpec& spec, std::vector<SuiteResult> suites);

// Deterministic: byte-identical output for identical inputs.
std::string to_json(const Report& r);
std::string to_text(const Report& r);

} // namespace tbg
