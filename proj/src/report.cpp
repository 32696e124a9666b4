#include "tbgeo/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace tbg {

Report make_report(const VerifySpec& spec, std::vector<SuiteResult> suites) {
  Report r;
  r.spec_name = spec.name;
  r.seed = spec.seed;
  r.samples = spec.samples;
  r.suites = std::move(suites);
  r.pass = all_pass(r.suites);
  return r;
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json root;
  root["report_version"] = kReportVersion;
  root["tool"] = kToolName;
  root["tool_version"] = kToolVersion;
  root["spec"] = r.spec_name;
  root["seed"] = r.seed;
  root["samples"] = r.samples;
  root["verdict"] = r.pass ? "pass" : "fail";
  auto& suites = root["suites"] = nlohmann::ordered_json::array();
  for (const SuiteResult& s : r.suites) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["pass"] = s.pass;
    auto& checks = js["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : s.checks) {
      nlohmann::ordered_json jc;
      jc["name"] = c.name;
      jc["mode"] = to_string(c.mode);
      jc["residual"] = c.residual;
      jc["threshold"] = c.threshold;
      jc["pass"] = c.pass;
      jc["samples"] = c.samples;
      auto& wp = jc["worst_point"] = nlohmann::ordered_json::array();
      for (int i = 0; i < c.worst_point.size(); ++i) wp.push_back(c.worst_point[i]);
      jc["note"] = c.note;
      checks.push_back(std::move(jc));
    }
    suites.push_back(std::move(js));
  }
  return root.dump(2) + "\n";
}

std::string to_text(const Report& r) {
  std::ostringstream out;
  char buf[128];
  out << kToolName << " " << kToolVersion << "  spec=" << r.spec_name << "  seed=" << r.seed
      << "  samples=" << r.samples << "\n";
  for (const SuiteResult& s : r.suites) {
    out << "suite " << s.name << ": " << (s.pass ? "PASS" : "FAIL") << "\n";
    for (const CheckResult& c : s.checks) {
      std::snprintf(buf, sizeof buf, "  [%s] %-24s %s  residual=%.6e  threshold=%.3e",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), to_string(c.mode), c.residual,
                    c.threshold);
      out << buf;
      if (c.worst_point.size() > 0) {
        out << "  worst=(";
        for (int i = 0; i < c.worst_point.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", c.worst_point[i]);
          out << buf;
        }
        out << ")";
      }
      if (!c.note.empty()) out << "  [" << c.note << "]";
      out << "\n";
    }
  }
  out << "verdict: " << (r.pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

} // namespace tbg
