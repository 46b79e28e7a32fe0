#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "bconf/beta_conformal.hpp"
#include "bconf/catalog.hpp"
#include "bconf/finsler.hpp"
#include "support.hpp"

using namespace bconf;
using bconf::testing_support::admitted;

namespace {

constexpr double kTol = 1e-7;

double res(const JT& a, const JT& b) { return residual(a, b).value; }

struct Case {
  std::string base;
  FFamily family;
  int n;
};

std::string case_name(const testing::TestParamInfo<Case>& info) {
  return info.param.base + "_" + std::string(to_string(info.param.family)) + "_n" + std::to_string(info.param.n);
}

class ChangeOracle : public testing::TestWithParam<Case> {};

TEST_P(ChangeOracle, BarredObjectsMatchTheComposedMetric) {
  const auto& pc = GetParam();
  const auto base = catalog::base(pc.base, pc.n);
  const auto change = catalog::general_change(pc.family, pc.n);
  const auto samples = admitted(base, change, 4, 17);
  ASSERT_EQ(samples.size(), 4u);
  for (const auto& a : samples) {
    const auto& c = a.c;
    const auto& o = a.oracle;
    const auto bm = barred_metric(c);
    EXPECT_LT(res(bm.g, o.g), kTol);
    EXPECT_LT(res(bm.l_lo, o.l_lo), kTol);
    EXPECT_LT(res(bm.h, o.h), kTol);
    EXPECT_LT(res(barred_inverse(c), o.ginv), kTol);
    const auto bc = barred_cartan(c);
    EXPECT_LT(res(bc.C_lo, o.C_lo), kTol);
    EXPECT_LT(res(bc.C, o.C), kTol);

    const auto d = differences(c);
    EXPECT_LT(res(d.D, o.G - a.base.G), kTol);
    EXPECT_LT(res(d.Dj, o.N - a.base.N), kTol);
    EXPECT_LT(res(d.B, o.Gb - a.base.Gb), kTol);
    EXPECT_LT(res(d.Djk, o.Gamma - a.base.Gamma), kTol);
    EXPECT_LT(res(barred_christoffel(c, truncate(a.base.gamma, 1, 2)), o.gamma), kTol);
  }
}

TEST_P(ChangeOracle, GradientClosedFormsMatchJets) {
  const auto& pc = GetParam();
  const auto base = catalog::base(pc.base, pc.n);
  const auto change = catalog::general_change(pc.family, pc.n);
  for (const auto& a : admitted(base, change, 3, 5)) {
    const auto closed = gradients_closed_form(a.c);
    const auto jets = gradients_by_jets(a.c);
    for (int s = 0; s < LadderGradients::kCount; ++s) {
      for (int i = 0; i < pc.n; ++i) {
        const auto us = static_cast<std::size_t>(s), ui = static_cast<std::size_t>(i);
        const double ey = closed.dy[us][ui], jy = jets.dy[us][ui];
        const double ex = closed.dx[us][ui], jx = jets.dx[us][ui];
        EXPECT_LT(std::abs(ey - jy) / (1 + std::abs(ey) + std::abs(jy)), kTol) << LadderGradients::kNames[s];
        EXPECT_LT(std::abs(ex - jx) / (1 + std::abs(ex) + std::abs(jx)), kTol) << LadderGradients::kNames[s];
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Families, ChangeOracle,
    testing::Values(Case{"CURVED_RIEMANNIAN", FFamily::RANDERS, 3}, Case{"CURVED_RIEMANNIAN", FFamily::KROPINA, 3},
                    Case{"CURVED_RIEMANNIAN", FFamily::MATSUMOTO, 3},
                    Case{"CURVED_RIEMANNIAN", FFamily::GENERALIZED_RANDERS_POWER, 3},
                    Case{"QUARTIC", FFamily::RANDERS, 3}, Case{"QUARTIC", FFamily::KROPINA, 3},
                    Case{"QUARTIC", FFamily::MATSUMOTO, 3}, Case{"QUARTIC", FFamily::GENERALIZED_RANDERS_POWER, 3},
                    Case{"QUARTIC", FFamily::MATSUMOTO, 4}, Case{"CURVED_RIEMANNIAN", FFamily::RANDERS, 4}),
    case_name);

TEST(Change, ConformalPathMatchesOracle) {
  for (const char* name : {"CURVED_RIEMANNIAN", "QUARTIC"}) {
    const auto base = catalog::base(name, 3);
    const auto change = catalog::change(FFamily::IDENTITY, catalog::sigma_field(3), std::vector<Polynomial>(3));
    const auto samples = admitted(base, change, 3, 23);
    ASSERT_EQ(samples.size(), 3u);
    for (const auto& a : samples) {
      EXPECT_DOUBLE_EQ(a.c.sm2.value(), 0.0);
      const auto d = differences(a.c);
      EXPECT_LT(res(barred_metric(a.c).g, a.oracle.g), kTol) << name;
      EXPECT_LT(res(d.D, a.oracle.G - a.base.G), kTol) << name;
      EXPECT_LT(res(d.Djk, a.oracle.Gamma - a.base.Gamma), kTol) << name;
    }
  }
}

TEST(Change, ConformalEuclideanDifferenceIsTheLeviCivitaShift) {
  const int n = 3;
  const auto change = catalog::change(FFamily::IDENTITY, catalog::sigma_field(n), std::vector<Polynomial>(n));
  for (const auto& a : admitted(MetricSpec::euclidean(n), change, 3, 3)) {
    const auto& c = a.c;
    const auto d = differences(c);
    const auto expect = JT::generate(n, 1, 2, [&](int i, int j, int k) {
      return c.sigma_lo(j) * (i == k ? 1.0 : 0.0) + c.sigma_lo(k) * (i == j ? 1.0 : 0.0) -
             c.sigma_up(i) * c.g(j, k);
    });
    EXPECT_LT(res(d.Djk, expect), kTol);
  }
}

TEST(Change, RandersLadderExample) {
  // L = 2, beta = 1, sigma = 0 on the Euclidean plane at y = (2, 0), b = (0.5, 0).
  const ChartSample s({0.0, 0.0}, {2.0, 0.0});
  const auto base = fundamentals(MetricSpec::euclidean(2), s, {2, 6}, BundleLevel::METRIC);
  const auto change = catalog::change(FFamily::RANDERS, Polynomial{},
                                      {Polynomial::constant(0.5), Polynomial::constant(0.0)});
  ChangeGuards guards;
  guards.m2_min = 0.0;  // b is parallel to y here
  const auto c = coefficients(change, base, 0, 0, guards);
  EXPECT_NEAR(c.p.value(), 1.5, 1e-14);
  EXPECT_NEAR(c.q.value(), 3.0, 1e-14);
  EXPECT_NEAR(c.p0.value(), 1.0, 1e-14);
  EXPECT_NEAR(c.pm1.value(), 0.5, 1e-14);
  EXPECT_NEAR(c.pm2.value(), -0.125, 1e-14);
}

TEST(Change, LadderIdentitiesHold) {
  for (auto fam : {FFamily::RANDERS, FFamily::KROPINA, FFamily::MATSUMOTO, FFamily::GENERALIZED_RANDERS_POWER}) {
    const auto base = catalog::base("QUARTIC", 3);
    for (const auto& a : admitted(base, catalog::general_change(fam, 3), 5, 11)) {
      const auto& c = a.c;
      const double L = c.L.value(), b = c.beta.value(), es = c.es.value();
      const double f = c.fv.f.value(), f1 = c.fv.f1.value(), f2 = c.fv.f2.value();
      const double f11 = c.fv.f11.value(), f12 = c.fv.f12.value(), f22 = c.fv.f22.value();
      const double q = c.q.value(), p = c.p.value(), q0 = c.q0.value(), p0 = c.p0.value();
      const double qm1 = c.qm1.value(), pm1 = c.pm1.value(), qm2 = c.qm2.value(), pm2 = c.pm2.value();
      const double scale = 1 + std::abs(f) + std::abs(q) * L;
      EXPECT_NEAR(es * L * f1 + b * f2, f, 1e-9 * scale);
      EXPECT_NEAR(es * L * f12 + b * f22, 0.0, 1e-9 * scale);
      EXPECT_NEAR(es * L * f11 + b * f12, 0.0, 1e-9 * scale);
      EXPECT_NEAR(q0 * b + es * qm1 * L * L, 0.0, 1e-9 * scale);
      EXPECT_NEAR(qm1 * b + qm2 * L * L, -p, 1e-9 * scale);
      EXPECT_NEAR(p0 * b + es * pm1 * L * L, q, 1e-9 * scale);
      EXPECT_NEAR(pm1 * b + pm2 * L * L, 0.0, 1e-9 * scale);
      EXPECT_NEAR(q * b + es * p * L * L, f * f, 1e-9 * scale * scale);
      const double eps = c.eps.value(), s0 = c.s0.value(), sm1 = c.sm1.value(), sm2 = c.sm2.value();
      EXPECT_NEAR(b * s0 + L * L * sm1, q / eps, 1e-9 * (1 + std::abs(q / eps)));
      EXPECT_NEAR(c.b2.value() * sm1 + b * sm2, es * pm1 * c.m2.value() / eps,
                  1e-9 * (1 + std::abs(pm1 * c.m2.value() / eps)));
    }
  }
}

TEST(Change, LadderHomogeneity) {
  // Euler: y^i dot-d_i s = deg(s) s.
  const double degrees[] = {1, 0, 0, -1, -2};
  const auto base = catalog::base("CURVED_RIEMANNIAN", 3);
  for (const auto& a : admitted(base, catalog::general_change(FFamily::MATSUMOTO, 3), 4, 2)) {
    for (int s = 0; s < LadderGradients::kCount; ++s) {
      const Jet& v = ladder_scalar(a.c, s);
      double euler = 0.0;
      for (int i = 0; i < 3; ++i) euler += a.c.y[static_cast<std::size_t>(i)].value() * v.dy(i).value();
      EXPECT_NEAR(euler, degrees[s] * v.value(), 1e-9 * (1 + std::abs(v.value()))) << LadderGradients::kNames[s];
    }
  }
}

TEST(Change, DegenerateSamplesAreRejected) {
  const ChartSample s({0.0, 0.0}, {1.0, 0.0});
  const auto base = fundamentals(MetricSpec::euclidean(2), s, {2, 6}, BundleLevel::METRIC);
  // beta = 0
  const auto orth = catalog::change(FFamily::RANDERS, Polynomial{}, {Polynomial{}, Polynomial::constant(0.3)});
  EXPECT_THROW(coefficients(orth, base, 0, 0), DegenerateChange);
  // b parallel to y gives m^2 = 0
  const auto par = catalog::change(FFamily::RANDERS, Polynomial{}, {Polynomial::constant(0.3), Polynomial{}});
  EXPECT_THROW(coefficients(par, base, 0, 0), DegenerateChange);
  // Matsumoto near the singular cone
  const auto mat = catalog::change(FFamily::MATSUMOTO, Polynomial{}, {Polynomial::constant(0.8), Polynomial{}});
  EXPECT_THROW(coefficients(mat, base, 0, 0), DegenerateChange);
}

TEST(Change, DifferencesNeedTheConnectionLevel) {
  const ChartSample s({0.1, 0.2, 0.0}, {1.0, 0.5, -0.3});
  const auto base = fundamentals(catalog::base("QUARTIC", 3), s, {2, 6}, BundleLevel::METRIC);
  const auto c = coefficients(catalog::general_change(FFamily::RANDERS, 3), base, 1, 2);
  EXPECT_FALSE(c.has_covariant);
  EXPECT_THROW(difference_spray(c), JetOrderError);
}

}  // namespace
