// bconf: verify, classify and tabulate generalized beta-conformal changes.
//
// Exit codes: 0 pass, 1 suite failure, 2 usage or configuration error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bconf/config.hpp"
#include "bconf/report.hpp"
#include "bconf/verifier.hpp"

namespace {

using namespace bconf;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Overrides {
  std::string config;
  int samples = 0;
  long long seed = -1;
  std::vector<std::string> tol;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("config", o.config, "run configuration (JSON, schema v1)")->required();
  cmd->add_option("--samples", o.samples, "samples per suite")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol", o.tol, "tolerance override SUITE=VAL (repeatable)");
  cmd->add_option("--out", o.out, "output directory");
}

RunConfig load(const Overrides& o) {
  RunConfig rc = load_config(o.config);
  nlohmann::json applied = nlohmann::json::object();
  if (o.samples > 0) {
    rc.suite.samples = o.samples;
    applied["samples"] = o.samples;
  }
  if (o.seed >= 0) {
    rc.suite.seed = static_cast<std::uint64_t>(o.seed);
    applied["seed"] = o.seed;
  }
  for (const auto& t : o.tol) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--tol", "expected SUITE=VAL, got '" + t + "'");
    const std::string key = t.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(t.substr(eq + 1), &used);
      if (used != t.size() - eq - 1) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw ConfigError("--tol", "not a number in '" + t + "'");
    }
    if (!(value > 0.0)) throw ConfigError("--tol", "tolerance must be > 0 in '" + t + "'");
    rc.suite.tolerances.emplace_back(key, value);
    applied["tol"][key] = value;
  }
  if (!o.out.empty()) rc.out_dir = o.out;
  if (!applied.empty()) rc.echo["cli_overrides"] = applied;
  return rc;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("output.dir", "cannot write '" + path.string() + "'");
  out << text;
}

fs::path prepare_out(const RunConfig& rc) {
  std::error_code ec;
  fs::create_directories(rc.out_dir, ec);
  if (ec) throw ConfigError("output.dir", "cannot create '" + rc.out_dir + "': " + ec.message());
  return fs::path(rc.out_dir);
}

int cmd_verify(const Overrides& o) {
  const RunConfig rc = load(o);
  const fs::path out = prepare_out(rc);
  const auto start = std::chrono::steady_clock::now();
  std::vector<Verdict> verdicts;
  for (const auto& s : rc.suites) {
    std::cerr << "running " << s << "\n";
    append(verdicts, run_suite(s, rc.suite));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(out / "report.json", report_json(rc.echo, verdicts).dump(2) + "\n");
  write_file(out / "report.md", report_markdown(rc.name, verdicts, wall));
  const Totals t = totals(verdicts);
  for (const auto& v : verdicts) {
    if (v.expectation == Expectation::FINDING || v.pass) continue;
    std::cout << "FAIL " << v.id << ": worst " << v.worst.value << " (tolerance " << v.tolerance << ")\n";
  }
  for (const auto& v : verdicts) {
    if (v.expectation == Expectation::EXPECTED_FAIL && v.pass) std::cout << "expected-fail: pass " << v.id << "\n";
  }
  std::cout << "verdicts " << t.verdicts << ", passed " << t.passed << ", failed " << t.failed << ", findings "
            << t.findings << "\n";
  std::cout << "report: " << (out / "report.json").string() << "\n";
  return t.failed == 0 ? kExitPass : kExitFail;
}

int cmd_classify(const Overrides& o) {
  RunConfig rc = load(o);
  if (!rc.has_instance) throw ConfigError("base", "classify needs an explicit base and change");
  if (rc.suite.samples < kClassifyMinSamples) {
    throw ConfigError("samples", "classify needs at least " + std::to_string(kClassifyMinSamples) + " samples");
  }
  const fs::path out = prepare_out(rc);
  const Instance& inst = rc.instance();
  const auto composed = MetricSpec::composed(inst.base, inst.change);
  const double tol = tolerance_for(rc.suite, "classify", kClassifyTolerance);
  std::vector<Check> checks;
  for (const char* space : {"base", "barred"}) {
    checks.push_back({std::string(space) + ".berwald", "max |dot-d_h G^i_jk|", tol});
    checks.push_back({std::string(space) + ".landsberg", "max |P^i_jk| (Cartan)", tol});
    checks.push_back({std::string(space) + ".curvature", "max |R^i_hjk| (Cartan)", tol});
  }
  const auto probe = [&](const ChartSample& s) {
    std::vector<Measure> m;
    for (const MetricSpec* metric : {&inst.base, &composed}) {
      const auto c = sample_margins(*metric, s);
      m.push_back({c.berwald_margin, "dot-d_h G^i_jk", {}});
      m.push_back({c.landsberg_margin, "P^i_jk", {}});
      m.push_back({c.curvature_margin, "R^i_hjk", {}});
    }
    return m;
  };
  // A margin above tolerance is an answer here, not a failure, so no quad re-evaluation.
  SuiteConfig suite = rc.suite;
  suite.escalate = false;
  const auto v = run_checks(suite, inst.base.dim(), rc.suite.samples, "classify." + inst.label, checks, probe);
  if (v.front().samples.admitted < kClassifyMinSamples) {
    throw InsufficientSamples("only " + std::to_string(v.front().samples.admitted) + " admissible samples");
  }
  nlohmann::json spaces;
  std::printf("%-22s %-28s %-28s\n", "property", "base", "barred");
  const char* names[] = {"Berwald", "Landsberg", "locally Minkowski"};
  bool holds[2][3];
  for (int sp = 0; sp < 2; ++sp) {
    const auto& b = v[static_cast<std::size_t>(3 * sp)];
    const auto& l = v[static_cast<std::size_t>(3 * sp + 1)];
    const auto& r = v[static_cast<std::size_t>(3 * sp + 2)];
    holds[sp][0] = b.pass;
    holds[sp][1] = l.pass;
    holds[sp][2] = b.pass && r.pass;
    spaces[sp == 0 ? "base" : "barred"] = {
        {"is_berwald", holds[sp][0]},
        {"is_landsberg", holds[sp][1]},
        {"is_locally_minkowski", holds[sp][2]},
        {"margins", {{"berwald", b.worst.value}, {"landsberg", l.worst.value}, {"curvature", r.worst.value}}},
    };
  }
  const double margin[2][3] = {{v[0].worst.value, v[1].worst.value, std::max(v[0].worst.value, v[2].worst.value)},
                               {v[3].worst.value, v[4].worst.value, std::max(v[3].worst.value, v[5].worst.value)}};
  for (int p = 0; p < 3; ++p) {
    char cells[2][64];
    for (int sp = 0; sp < 2; ++sp) {
      std::snprintf(cells[sp], sizeof cells[sp], "%-5s (margin %.3e)", holds[sp][p] ? "true" : "false", margin[sp][p]);
    }
    std::printf("%-22s %-28s %-28s\n", names[p], cells[0], cells[1]);
  }
  std::printf("tolerance %.1e, %d samples (%d rejected draws)\n", tol, v.front().samples.admitted,
              v.front().samples.rejected);
  const nlohmann::json report = {
      {"schema", "bconf-classify/v1"},
      {"config_echo", rc.echo},
      {"tolerance", tol},
      {"samples", {{"attempted", v.front().samples.attempted},
                   {"admitted", v.front().samples.admitted},
                   {"rejected", v.front().samples.rejected}}},
      {"spaces", spaces},
  };
  write_file(out / "classify.json", report.dump(2) + "\n");
  return kExitPass;
}

int cmd_table(const Overrides& o) {
  const RunConfig rc = load(o);
  if (!rc.has_instance) throw ConfigError("base", "table needs an explicit base and change");
  if (rc.table_samples.empty()) throw ConfigError("table.samples", "table needs at least one listed sample");
  const fs::path out = prepare_out(rc);
  const Instance& inst = rc.instance();
  const std::vector<std::pair<const char*, const Jet CoefficientSet::*>> columns = {
      {"L", &CoefficientSet::L},      {"beta", &CoefficientSet::beta}, {"p", &CoefficientSet::p},
      {"q", &CoefficientSet::q},      {"p0", &CoefficientSet::p0},     {"q0", &CoefficientSet::q0},
      {"p-1", &CoefficientSet::pm1},  {"q-1", &CoefficientSet::qm1},   {"p-2", &CoefficientSet::pm2},
      {"q-2", &CoefficientSet::qm2},  {"p02", &CoefficientSet::p02},   {"b2", &CoefficientSet::b2},
      {"m2", &CoefficientSet::m2},    {"epsilon", &CoefficientSet::eps}, {"s0", &CoefficientSet::s0},
      {"s-1", &CoefficientSet::sm1},  {"s-2", &CoefficientSet::sm2},
  };
  const std::vector<std::pair<const char*, const Jet FValues<Jet>::*>> fcols = {
      {"f", &FValues<Jet>::f},     {"f1", &FValues<Jet>::f1},   {"f2", &FValues<Jet>::f2},
      {"f11", &FValues<Jet>::f11}, {"f12", &FValues<Jet>::f12}, {"f22", &FValues<Jet>::f22},
  };
  std::ostringstream csv;
  csv << "sample,status";
  for (const auto& [name, ptr] : fcols) csv << "," << name;
  for (const auto& [name, ptr] : columns) csv << "," << name;
  csv << "\n";
  const auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < rc.table_samples.size(); ++i) {
    csv << i;
    try {
      const auto b = fundamentals(inst.base, rc.table_samples[i], {1, 3}, BundleLevel::METRIC);
      const auto c = coefficients(inst.change, b, 0, 0, rc.suite.guards);
      csv << ",admitted";
      for (const auto& [name, ptr] : fcols) csv << "," << num((c.fv.*ptr).value());
      for (const auto& [name, ptr] : columns) csv << "," << num((c.*ptr).value());
    } catch (const DomainGuard& e) {
      csv << ",\"rejected: " << e.what() << "\"";
    } catch (const InadmissibleSample& e) {
      csv << ",\"rejected: " << e.what() << "\"";
    } catch (const DegenerateChange& e) {
      csv << ",\"rejected: " << e.what() << "\"";
    }
    csv << "\n";
  }
  std::cout << csv.str();
  write_file(out / "table.csv", csv.str());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized beta-conformal change: closed forms verified against a jet oracle"};
  app.require_subcommand(1);
  Overrides verify_o, classify_o, table_o;
  auto* verify = app.add_subcommand("verify", "run the configured suites and write report.json and report.md");
  add_common(verify, verify_o);
  auto* classify = app.add_subcommand("classify", "Berwald, Landsberg and locally Minkowski tests for base and barred");
  add_common(classify, classify_o);
  auto* table = app.add_subcommand("table", "coefficient table at the samples listed in the config");
  add_common(table, table_o);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    if (*verify) return cmd_verify(verify_o);
    if (*classify) return cmd_classify(classify_o);
    return cmd_table(table_o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CaseMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InsufficientSamples& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
