#pragma once

// Run configuration files (JSON, "schema": "v1").
//
//   {
//     "schema": "v1",
//     "name": "randers_flat",
//     "dimension": 3,
//     "base": {"family": "RIEMANNIAN", "entries": [[P, P, P], ...]}
//           | {"family": "QUARTIC", "coefficients": [P, ...]}
//           | {"catalog": "CURVED_RIEMANNIAN"},
//     "change": {"f": "RANDERS", "k": 2, "sigma": P, "b": [P, ...]},
//     "suites": ["identity", "gradient", "homogeneity", "oracle", "theorem", "special_case"],
//     "samples": 100, "seed": 1, "controls": true, "escalate": true,
//     "tolerances": {"oracle.curvature": 1e-7},
//     "output": {"dir": "out"},
//     "table": {"samples": [{"x": [...], "y": [...]}]}
//   }
//
// A polynomial P is a number (constant) or a sparse term list
// [{"coeff": c, "exponents": [e_0, ..., e_{n-1}]}] of total degree <= 4.
// Omitting both "base" and "change" selects the catalog instances.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bconf/catalog.hpp"
#include "bconf/errors.hpp"
#include "bconf/verifier.hpp"

namespace bconf {

inline constexpr int kMaxPolynomialDegree = 4;

struct RunConfig {
  nlohmann::json echo;
  std::string name = "config";
  SuiteConfig suite;
  std::vector<std::string> suites;
  std::string out_dir = "bconf-out";
  std::vector<ChartSample> table_samples;
  bool has_instance = false;

  const Instance& instance() const { return suite.instances.front(); }
};

namespace config_detail {

using nlohmann::json;

inline void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

inline const json& member(const json& obj, const std::string& key, const std::string& field) {
  const auto it = obj.find(key);
  require(it != obj.end(), field + "." + key, "missing");
  return *it;
}

inline void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& field) {
  for (const auto& [key, value] : obj.items()) {
    require(allowed.count(key) > 0, field.empty() ? key : field + "." + key, "unknown field");
  }
}

inline double number(const json& v, const std::string& field) {
  require(v.is_number(), field, "expected a number");
  return v.get<double>();
}

inline int integer(const json& v, const std::string& field) {
  require(v.is_number_integer(), field, "expected an integer");
  return v.get<int>();
}

inline Polynomial polynomial(const json& v, int n, const std::string& field) {
  if (v.is_number()) return Polynomial::constant(v.get<double>());
  require(v.is_array(), field, "expected a number or a list of {coeff, exponents} terms");
  std::vector<Polynomial::Term> terms;
  for (std::size_t t = 0; t < v.size(); ++t) {
    const std::string tf = field + "[" + std::to_string(t) + "]";
    const json& term = v[t];
    require(term.is_object(), tf, "expected an object");
    only_keys(term, {"coeff", "exponents"}, tf);
    Polynomial::Term out;
    out.coeff = number(member(term, "coeff", tf), tf + ".coeff");
    const json& e = member(term, "exponents", tf);
    require(e.is_array() && static_cast<int>(e.size()) == n, tf + ".exponents",
            "expected " + std::to_string(n) + " integers");
    int degree = 0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const int ek = integer(e[k], tf + ".exponents[" + std::to_string(k) + "]");
      require(ek >= 0, tf + ".exponents[" + std::to_string(k) + "]", "must be >= 0");
      out.exponents.push_back(ek);
      degree += ek;
    }
    require(degree <= kMaxPolynomialDegree, tf + ".exponents",
            "total degree " + std::to_string(degree) + " exceeds " + std::to_string(kMaxPolynomialDegree));
    terms.push_back(std::move(out));
  }
  return Polynomial(std::move(terms));
}

inline std::vector<Polynomial> polynomial_list(const json& v, int n, const std::string& field) {
  require(v.is_array() && static_cast<int>(v.size()) == n, field, "expected " + std::to_string(n) + " polynomials");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(polynomial(v[i], n, field + "[" + std::to_string(i) + "]"));
  return out;
}

inline MetricSpec parse_base(const json& v, int n) {
  require(v.is_object(), "base", "expected an object");
  if (v.contains("catalog")) {
    only_keys(v, {"catalog"}, "base");
    const json& name = v["catalog"];
    require(name.is_string(), "base.catalog", "expected a string");
    try {
      return catalog::base(name.get<std::string>(), n);
    } catch (const ConfigError& e) {
      throw ConfigError("base.catalog", e.what());
    }
  }
  const json& fam = member(v, "family", "base");
  require(fam.is_string(), "base.family", "expected a string");
  const auto family = parse_metric_family(fam.get<std::string>());
  require(family.has_value() && *family != MetricFamily::COMPOSED, "base.family",
          "unknown family '" + fam.get<std::string>() + "' (RIEMANNIAN or QUARTIC)");
  if (*family == MetricFamily::RIEMANNIAN) {
    only_keys(v, {"family", "entries"}, "base");
    const json& rows = member(v, "entries", "base");
    require(rows.is_array() && static_cast<int>(rows.size()) == n, "base.entries",
            "expected " + std::to_string(n) + " rows");
    std::vector<std::vector<Polynomial>> a;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      a.push_back(polynomial_list(rows[i], n, "base.entries[" + std::to_string(i) + "]"));
    }
    return MetricSpec::riemannian(std::move(a));
  }
  only_keys(v, {"family", "coefficients"}, "base");
  return MetricSpec::quartic(polynomial_list(member(v, "coefficients", "base"), n, "base.coefficients"));
}

inline ChangeSpec parse_change(const json& v, int n) {
  require(v.is_object(), "change", "expected an object");
  only_keys(v, {"f", "k", "sigma", "b"}, "change");
  const json& f = member(v, "f", "change");
  require(f.is_string(), "change.f", "expected a string");
  const auto family = parse_ffamily(f.get<std::string>());
  require(family.has_value(), "change.f", "unknown family '" + f.get<std::string>() + "'");
  ChangeSpec c;
  c.family = *family;
  if (v.contains("k")) c.k = integer(v["k"], "change.k");
  require(c.family != FFamily::GENERALIZED_RANDERS_POWER || c.k >= 2, "change.k", "must be >= 2");
  if (v.contains("sigma")) c.sigma = polynomial(v["sigma"], n, "change.sigma");
  if (v.contains("b")) {
    c.b = polynomial_list(v["b"], n, "change.b");
  } else {
    require(c.family == FFamily::IDENTITY, "change.b", "missing");
    c.b.assign(static_cast<std::size_t>(n), Polynomial{});
  }
  require(c.family == FFamily::IDENTITY || !c.is_conformal(), "change.b",
          "b = 0 is only allowed with f = IDENTITY (the conformal change)");
  return c;
}

inline std::vector<double> vector_of(const json& v, int n, const std::string& field) {
  require(v.is_array() && static_cast<int>(v.size()) == n, field, "expected " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace config_detail

/// Parses and validates a configuration.  Throws ConfigError naming the field.
inline RunConfig parse_config(const nlohmann::json& j) {
  using namespace config_detail;
  require(j.is_object(), "config", "expected a JSON object");
  only_keys(j, {"schema", "name", "dimension", "base", "change", "suites", "samples", "seed", "controls",
                "escalate", "tolerances", "output", "table"},
            "");
  const json& schema = member(j, "schema", "config");
  require(schema.is_string() && schema.get<std::string>() == "v1", "schema", "expected \"v1\"");

  RunConfig rc;
  rc.echo = j;
  const int n = integer(member(j, "dimension", "config"), "dimension");
  require(n >= 2 && n <= kMaxJetDim, "dimension", "must lie in [2, " + std::to_string(kMaxJetDim) + "]");
  rc.suite.n = n;
  if (j.contains("name")) {
    require(j["name"].is_string() && !j["name"].get<std::string>().empty(), "name", "expected a non-empty string");
    rc.name = j["name"].get<std::string>();
  }

  require(j.contains("base") == j.contains("change"), j.contains("base") ? "change" : "base",
          "base and change must be given together");
  if (j.contains("base")) {
    rc.suite.instances.push_back({rc.name, parse_base(j["base"], n), parse_change(j["change"], n)});
    rc.has_instance = true;
  }

  if (j.contains("suites")) {
    const json& s = j["suites"];
    require(s.is_array() && !s.empty(), "suites", "expected a non-empty list");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string f = "suites[" + std::to_string(i) + "]";
      require(s[i].is_string() && is_suite_name(s[i].get<std::string>()), f,
              "unknown suite (identity, gradient, homogeneity, oracle, theorem, special_case)");
      rc.suites.push_back(s[i].get<std::string>());
    }
  } else {
    rc.suites.assign(std::begin(kSuiteNames), std::end(kSuiteNames));
  }

  if (j.contains("samples")) {
    rc.suite.samples = integer(j["samples"], "samples");
    require(rc.suite.samples >= 1, "samples", "must be >= 1");
  }
  if (j.contains("seed")) {
    require(j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0),
            "seed", "expected a non-negative integer");
    rc.suite.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("controls")) {
    require(j["controls"].is_boolean(), "controls", "expected true or false");
    rc.suite.controls = j["controls"].get<bool>();
  }
  if (j.contains("escalate")) {
    require(j["escalate"].is_boolean(), "escalate", "expected true or false");
    rc.suite.escalate = j["escalate"].get<bool>();
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    require(t.is_object(), "tolerances", "expected an object of suite id -> number");
    for (const auto& [key, value] : t.items()) {
      const double tol = number(value, "tolerances." + key);
      require(tol > 0.0, "tolerances." + key, "must be > 0");
      rc.suite.tolerances.emplace_back(key, tol);
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    require(o.is_object(), "output", "expected an object");
    only_keys(o, {"dir"}, "output");
    if (o.contains("dir")) {
      require(o["dir"].is_string(), "output.dir", "expected a string");
      rc.out_dir = o["dir"].get<std::string>();
    }
  }
  if (j.contains("table")) {
    const json& t = j["table"];
    require(t.is_object(), "table", "expected an object");
    only_keys(t, {"samples"}, "table");
    const json& s = member(t, "samples", "table");
    require(s.is_array(), "table.samples", "expected a list");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string f = "table.samples[" + std::to_string(i) + "]";
      require(s[i].is_object(), f, "expected {x, y}");
      only_keys(s[i], {"x", "y"}, f);
      rc.table_samples.emplace_back(vector_of(member(s[i], "x", f), n, f + ".x"),
                                    vector_of(member(s[i], "y", f), n, f + ".y"));
    }
  }
  return rc;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace bconf
