#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "bconf/catalog.hpp"
#include "bconf/report.hpp"
#include "bconf/verifier.hpp"

using namespace bconf;

namespace {

SuiteConfig small(int n, int samples, std::uint64_t seed = 17) {
  SuiteConfig c;
  c.n = n;
  c.samples = samples;
  c.seed = seed;
  c.threads = 1;
  return c;
}

const Verdict& find(const std::vector<Verdict>& vs, const std::string& id) {
  for (const auto& v : vs) {
    if (v.id == id) return v;
  }
  throw std::runtime_error("no verdict " + id);
}

Instance kropina_flat(int n) {
  return {instance_label(FFamily::KROPINA, "EUCLIDEAN", n), MetricSpec::euclidean(n),
          catalog::general_change(FFamily::KROPINA, n)};
}

}  // namespace

TEST(Verifier, SampleAccounting) {
  auto cfg = small(3, 12);
  for (const auto& v : run_identity_suite(cfg)) {
    EXPECT_EQ(v.samples.attempted, v.samples.admitted + v.samples.rejected) << v.id;
    EXPECT_EQ(v.samples.admitted, cfg.samples) << v.id;
    EXPECT_LE(v.samples.escalated, v.samples.admitted) << v.id;
  }
}

TEST(Verifier, ReportIndependentOfThreadCount) {
  auto a = small(3, 10);
  auto b = a;
  b.threads = 3;
  const auto ja = report_json(nlohmann::json::object(), run_homogeneity_suite(a));
  const auto jb = report_json(nlohmann::json::object(), run_homogeneity_suite(b));
  EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(Verifier, SeedChangesSamples) {
  const auto a = run_identity_suite(small(3, 5, 1));
  const auto b = run_identity_suite(small(3, 5, 2));
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].worst.value != b[i].worst.value;
  EXPECT_TRUE(differs);
}

TEST(Verifier, ToleranceOverrideLongestPrefixWins) {
  SuiteConfig c;
  c.tolerances = {{"oracle", 1e-3}, {"oracle.curvature", 1e-5}, {"oracle.curvature.RANDERS", 1e-6}};
  EXPECT_EQ(tolerance_for(c, "oracle.metric.X.g", 1.0), 1e-3);
  EXPECT_EQ(tolerance_for(c, "oracle.curvature.KROPINA.EUCLIDEAN.n3.R", 1.0), 1e-5);
  EXPECT_EQ(tolerance_for(c, "oracle.curvature.RANDERS.EUCLIDEAN.n3.R", 1.0), 1e-6);
  // Prefixes match whole dotted components only.
  EXPECT_EQ(tolerance_for(c, "oracles.metric", 1.0), 1.0);
  EXPECT_EQ(tolerance_for(c, "identity.RANDERS.QUARTIC.n3.q", 2.0), 2.0);
}

TEST(Verifier, ToleranceOverrideReachesVerdict) {
  auto cfg = small(3, 4);
  cfg.instances = {kropina_flat(3)};
  cfg.tolerances = {{"identity.KROPINA.EUCLIDEAN.n3.q", 0.5}};
  const auto vs = run_identity_suite(cfg);
  EXPECT_EQ(find(vs, "identity.KROPINA.EUCLIDEAN.n3.q").tolerance, 0.5);
  EXPECT_EQ(find(vs, "identity.KROPINA.EUCLIDEAN.n3.q_0").tolerance, kIdentityTolerance);
}

TEST(Verifier, IdentityFamilyHasExactZeros) {
  auto cfg = small(3, 8);
  cfg.instances = {{"flat", MetricSpec::euclidean(3), catalog::general_change(FFamily::IDENTITY, 3)}};
  const auto vs = run_identity_suite(cfg);
  EXPECT_EQ(find(vs, "identity.flat.f_12").worst.value, 0.0);
  EXPECT_EQ(find(vs, "identity.flat.f_11").worst.value, 0.0);
  for (const auto& v : vs) EXPECT_TRUE(v.pass) << v.id;
}

TEST(Verifier, KropinaRejectsNegativeBeta) {
  auto cfg = small(3, 20);
  cfg.instances = {kropina_flat(3)};
  const auto base = run_identity_suite(cfg);
  EXPECT_GT(base.front().samples.rejected, 0);
  for (const auto& v : base) EXPECT_TRUE(v.pass) << v.id;

  cfg.guards.beta_rel = 0.5;
  const auto strict = run_identity_suite(cfg);
  const auto& counts = strict.front().samples;
  EXPECT_GT(counts.rejected, base.front().samples.rejected);
  EXPECT_EQ(counts.attempted, counts.admitted + counts.rejected);
}

TEST(Verifier, NoAdmittedSampleFails) {
  auto cfg = small(3, 2);
  cfg.max_attempts = 1;
  const std::vector<Check> checks = {{"always_rejected", "", 1.0}};
  const auto vs = run_checks(cfg, 3, 2, "t", checks, [](const ChartSample&) -> std::vector<Measure> {
    throw InadmissibleSample("test");
  });
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].samples.admitted, 0);
  EXPECT_EQ(vs[0].samples.rejected, 2);
  EXPECT_FALSE(vs[0].pass);
}

TEST(Verifier, EscalationRecoversRoundoff) {
  auto cfg = small(3, 6);
  const std::vector<Check> checks = {{"cancel", "", 1e-6}};
  // ((1 + t) - 1) / t is 0 in extended precision and 1 in quad for t = 1e-25.
  const auto probe = [](const ChartSample&) {
    const Jet one(1.0), tiny = Jet::from_real(Jet::real(1e-25L));
    const Jet::real ratio = ((one + tiny) - one).real_value() / tiny.real_value();
    return std::vector<Measure>{measure_scalar("cancel", ratio, 1)};
  };
  const auto v = run_checks(cfg, 3, 6, "t", checks, probe).front();
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.samples.escalated, 6);

  cfg.escalate = false;
  const auto raw = run_checks(cfg, 3, 6, "t", checks, probe).front();
  EXPECT_FALSE(raw.pass);
  EXPECT_EQ(raw.samples.escalated, 0);
}

TEST(Verifier, EscalationKeepsGenuineErrors) {
  auto cfg = small(3, 5);
  const std::vector<Check> checks = {{"off_by_1e-6", "", 1e-9}, {"exact", "", 1e-9}};
  const auto probe = [](const ChartSample& s) {
    const Jet::real a = Jet(s.y[0]).real_value();
    return std::vector<Measure>{measure_scalar("a", a, a + Jet::real(1e-6L)), measure_scalar("a", a, a)};
  };
  const auto vs = run_checks(cfg, 3, 5, "t", checks, probe);
  EXPECT_FALSE(vs[0].pass);
  EXPECT_GT(vs[0].worst.value, 1e-7);
  EXPECT_TRUE(vs[1].pass);
  EXPECT_EQ(vs[0].samples.escalated, 5);
}

TEST(Verifier, ExpectedFailPassesOnlyAboveThreshold) {
  auto cfg = small(3, 3);
  const std::vector<Check> checks = {{"violated", "", 1e-3, Expectation::EXPECTED_FAIL},
                                     {"not_violated", "", 1e-3, Expectation::EXPECTED_FAIL}};
  const auto vs = run_checks(cfg, 3, 3, "t", checks, [](const ChartSample&) {
    return std::vector<Measure>{{0.4, "D", {}}, {0.0, "D", {}}};
  });
  EXPECT_TRUE(vs[0].pass);
  EXPECT_FALSE(vs[1].pass);
  EXPECT_EQ(vs[0].samples.escalated, 0);
}

TEST(Verifier, ControlsAreDetected) {
  auto cfg = small(3, 10);
  cfg.controls = true;
  const auto vs = run_theorem_suite(cfg);
  int controls = 0;
  for (const auto& v : vs) {
    if (v.expectation == Expectation::FINDING) continue;
    EXPECT_TRUE(v.pass) << v.id << " " << v.worst.value;
    if (v.expectation == Expectation::EXPECTED_FAIL) {
      ++controls;
      EXPECT_GT(v.worst.value, v.tolerance) << v.id;
    }
  }
  EXPECT_GT(controls, 0);
}

TEST(Verifier, RunSuiteRejectsUnknownName) {
  EXPECT_THROW(run_suite("nonsense", small(3, 1)), ConfigError);
  EXPECT_THROW(run_identity_suite(small(1, 1)), ConfigError);
}
