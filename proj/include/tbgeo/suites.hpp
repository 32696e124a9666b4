#pragma once

#include <map>
#include <string>
#include <vector>

#include "tbgeo/verifyspec.hpp"

namespace tbg {

// How a check's aggregated residual is judged. MaxLeq: the max over samples
// must stay below the threshold. MinGeq: every sample must stay above it.
// MaxGeq: some sample must reach it (non-vanishing direction of an iff).
enum class CheckMode { MaxLeq, MinGeq, MaxGeq };

struct CheckResult {
  std::string name;
  CheckMode mode = CheckMode::MaxLeq;
  double residual = 0.0;  // max over samples, or min for MinGeq
  double threshold = 0.0;
  bool pass = false;
  int samples = 0;
  Vec worst_point;        // (x, v) coordinates of the extremal sample
  std::string note;       // hypothesis flags for the gated iff checks
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool pass = false;
};

struct RunConfig {
  std::map<std::string, double> tol;  // threshold overrides by check name
  double nonvanish = 0.0;             // overrides every *.nonvanish default when > 0
  int threads = 0;                    // 0 picks the hardware count
};

// Default thresholds; iff-style checks also own a "<name>.nonvanish" entry
// used when their hypotheses fail.
const std::map<std::string, double>& default_tolerances();

std::vector<SuiteResult> run_suites(const VerifySpec& spec,
                                    const std::vector<std::string>& suites,
                                    const RunConfig& cfg);

bool all_pass(const std::vector<SuiteResult>& results);

const char* to_string(CheckMode mode);

} // namespace tbg
