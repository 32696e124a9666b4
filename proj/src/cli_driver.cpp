#include "tbgeo/cli.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include <CLI11.hpp>

#include "tbgeo/geometry_base.hpp"
#include "tbgeo/report.hpp"

namespace tbg {

namespace {

bool parse_tol_flag(const std::string& item, std::string& name, double& value) {
  const size_t eq = item.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  name = item.substr(0, eq);
  const char* b = item.c_str() + eq + 1;
  const char* e = item.c_str() + item.size();
  auto [p, ec] = std::from_chars(b, e, value);
  return ec == std::errc() && p == e;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tangent bundle geometry verifier"};
  app.name("tbgeo");

  std::string spec_path;
  std::vector<std::string> suite_flags, tol_flags;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string format = "text";
  double nonvanish = 0.0;

  app.add_option("spec", spec_path, "verification spec file")->required();
  auto* suite_opt = app.add_option("--suite", suite_flags,
                                   "suite to run: base, connection, hermitian, contact, "
                                   "dynamics, all (repeatable)")
                        ->type_size(1)
                        ->allow_extra_args(false)
                        ->delimiter(',');
  auto* samples_opt =
      app.add_option("--samples", samples, "sample points per check")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--tol", tol_flags, "threshold override, name=value (repeatable)")
      ->type_size(1)
      ->allow_extra_args(false);
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--nonvanish-threshold", nonvanish,
                 "threshold used by the negative direction of every iff check")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.push_back("tbgeo");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  RunConfig cfg;
  cfg.nonvanish = nonvanish;
  for (const std::string& item : tol_flags) {
    std::string name;
    double value = 0.0;
    if (!parse_tol_flag(item, name, value)) {
      err << "error: --tol expects name=value, got '" << item << "'\n";
      return 2;
    }
    if (!default_tolerances().count(name)) {
      err << "error: unknown tolerance name '" << name << "'\n";
      return 2;
    }
    if (!(value > 0.0)) {
      err << "error: tolerance '" << name << "' must be positive\n";
      return 2;
    }
    cfg.tol[name] = value;
  }

  std::vector<std::string> suites;
  bool run_all = false;
  for (const std::string& s : suite_flags) {
    if (s == "all") {
      run_all = true;
      continue;
    }
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      err << "error: unknown suite '" << s << "'\n";
      return 2;
    }
    suites.push_back(s);
  }
  if (run_all) suites.clear();

  try {
    VerifySpec spec = load_verify_spec(spec_path);
    if (suite_opt->count() == 0) suites = spec.suites;
    if (samples_opt->count() > 0) spec.samples = samples;
    if (seed_opt->count() > 0) spec.seed = seed;

    const Report report = make_report(spec, run_suites(spec, suites, cfg));
    out << (format == "json" ? to_json(report) : to_text(report));
    return report.pass ? 0 : 1;
  } catch (const SpecError& e) {
    err << "error: " << e.what();
    if (e.offset() != std::string::npos) err << " at byte " << e.offset();
    err << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace tbg
