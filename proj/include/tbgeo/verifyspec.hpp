#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tbgeo/metrics_tm.hpp"

namespace tbg {

// Error in a verification spec file; offset is the byte position in the file
// text that the diagnostic points at.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string msg, size_t offset)
      : std::runtime_error(std::move(msg)), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Fully resolved run configuration: chart, torsion, weights and sampling.
struct VerifySpec {
  RiemannianChart chart;
  WeightSpec weights;
  int samples = 100;
  std::uint64_t seed = 42;
  std::vector<std::string> suites;  // empty means all
  std::string name;                 // label used in reports
};

// Line-oriented `key = value` format; see the README for the key list.
VerifySpec parse_verify_spec(std::string_view text, std::string name);
VerifySpec load_verify_spec(const std::string& path);

const std::vector<std::string>& suite_names();

} // namespace tbg
