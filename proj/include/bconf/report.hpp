#pragma once

// report.json and report.md.  The JSON carries no timing, so identical runs
// produce identical files; wall time goes to the markdown only.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bconf/verifier.hpp"

namespace bconf {

inline constexpr const char* kReportSchema = "bconf-report/v1";

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json worst = {
      {"value", std::isfinite(v.worst.value) ? nlohmann::json(v.worst.value) : nlohmann::json(nullptr)},
      {"sample_index", v.worst.sample_index},
      {"tensor", v.worst.tensor},
      {"tensor_index", v.worst.tensor_index},
  };
  return {
      {"id", v.id},
      {"paper_anchor", v.anchor},
      {"expectation", std::string(to_string(v.expectation))},
      {"pass", v.pass},
      {"tolerance", v.tolerance},
      {"worst_residual", worst},
      {"samples",
       {{"attempted", v.samples.attempted},
        {"admitted", v.samples.admitted},
        {"rejected", v.samples.rejected},
        {"escalated", v.samples.escalated}}},
  };
}

inline nlohmann::json report_json(const nlohmann::json& config_echo, const std::vector<Verdict>& verdicts) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& v : verdicts) suites.push_back(to_json(v));
  const Totals t = totals(verdicts);
  return {
      {"schema", kReportSchema},
      {"config_echo", config_echo},
      {"suites", suites},
      {"totals", {{"verdicts", t.verdicts}, {"passed", t.passed}, {"failed", t.failed}, {"findings", t.findings}}},
  };
}

namespace detail {

inline std::string sci(double v) {
  if (!std::isfinite(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string index_text(const WorstResidual& w) {
  std::string s = w.tensor;
  if (!w.tensor_index.empty()) {
    s += "[";
    for (std::size_t i = 0; i < w.tensor_index.size(); ++i) s += (i ? "," : "") + std::to_string(w.tensor_index[i]);
    s += "]";
  }
  return s;
}

}  // namespace detail

inline std::string report_markdown(const std::string& name, const std::vector<Verdict>& verdicts, double wall_seconds) {
  const Totals t = totals(verdicts);
  std::ostringstream md;
  md << "# Verification report: " << name << "\n\n";
  md << "- verdicts: " << t.verdicts << " (passed " << t.passed << ", failed " << t.failed << ", findings "
     << t.findings << ")\n";
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.2f", wall_seconds);
  md << "- wall time: " << wall << " s\n\n";
  const auto table = [&](Expectation which, const char* title) {
    bool any = false;
    for (const auto& v : verdicts) any = any || v.expectation == which;
    if (!any) return;
    md << "## " << title << "\n\n";
    md << "| id | result | worst | tolerance | sample | at | attempted/admitted/rejected | quad | time (s) |\n";
    md << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& v : verdicts) {
      if (v.expectation != which) continue;
      const char* result = which == Expectation::FINDING ? (v.pass ? "matches" : "differs") : (v.pass ? "pass" : "FAIL");
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.2f", v.wall_seconds);
      md << "| " << v.id << " | " << result << " | " << detail::sci(v.worst.value) << " | "
         << detail::sci(v.tolerance) << " | " << v.worst.sample_index << " | " << detail::index_text(v.worst) << " | "
         << v.samples.attempted << "/" << v.samples.admitted << "/" << v.samples.rejected << " | "
         << v.samples.escalated << " | " << secs << " |\n";
    }
    md << "\n";
  };
  table(Expectation::HOLDS, "Verdicts");
  table(Expectation::EXPECTED_FAIL, "Controls (expected-fail: pass means the check detected the violation)");
  table(Expectation::FINDING, "Findings (displays as printed)");
  bool any_finding = false;
  for (const auto& v : verdicts) {
    if (v.expectation != Expectation::FINDING) continue;
    if (!any_finding) md << "### Finding details\n\n";
    any_finding = true;
    md << "- `" << v.id << "`: " << v.anchor << "\n";
  }
  return md.str();
}

}  // namespace bconf
