#include <gtest/gtest.h>

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bconf/barred_curvature.hpp"
#include "bconf/catalog.hpp"
#include "bconf/special_cases.hpp"
#include "support.hpp"

using namespace bconf;
using bconf::testing_support::admitted;

namespace {

double res(const JT& a, const JT& b) { return residual(a, b).value; }

JT named(const CurvatureSet& cs, const std::string& name) {
  JT out;
  cs.for_each([&](const char* n, const JT& t) {
    if (name == n) out = t;
  });
  return out;
}

struct Setup {
  std::string label;
  MetricSpec base;
  ChangeSpec change;
};

std::vector<Setup> setups() {
  return {
      {"euclidean_randers", MetricSpec::euclidean(3),
       catalog::change(FFamily::RANDERS, Polynomial{}, catalog::b_field(3))},
      {"curved_kropina", catalog::base("CURVED_RIEMANNIAN", 3),
       catalog::change(FFamily::KROPINA, Polynomial{}, catalog::b_field(3))},
      {"quartic_matsumoto", catalog::base("QUARTIC", 3), catalog::general_change(FFamily::MATSUMOTO, 3)},
      {"quartic_power", catalog::base("QUARTIC", 3), catalog::general_change(FFamily::GENERALIZED_RANDERS_POWER, 3)},
  };
}

TEST(BarredCurvature, ResolvedDisplaysMatchTheOracle) {
  for (const auto& s : setups()) {
    for (const auto& a : admitted(s.base, s.change, 2, 31)) {
      const auto d = differences(a.c);
      for (auto k : kAllConnections) {
        const auto closed = barred_torsions_curvatures(a.c, d, a.base, k);
        const auto oracle = torsions_curvatures(a.oracle, k);
        oracle.for_each([&](const char* name, const JT& t) {
          EXPECT_LE(res(named(closed, name), t), 1e-7) << s.label << " " << to_string(k) << " " << name;
        });
      }
    }
  }
}

TEST(BarredCurvature, PrintedReadingDiffersExactlyWhereAmended) {
  std::set<std::pair<ConnectionKind, std::string>> amended;
  for (const auto& am : display_amendments()) amended.insert({am.connection, am.tensor});
  const auto s = setups()[2];
  for (const auto& a : admitted(s.base, s.change, 2, 8)) {
    const auto d = differences(a.c);
    for (auto k : kAllConnections) {
      const auto printed = barred_torsions_curvatures(a.c, d, a.base, k, DisplayReading::PRINTED);
      const auto oracle = torsions_curvatures(a.oracle, k);
      oracle.for_each([&](const char* name, const JT& t) {
        const double r = res(named(printed, name), t);
        if (amended.count({k, name})) {
          EXPECT_GT(r, 1e-3) << to_string(k) << " " << name;
        } else {
          EXPECT_LE(r, 1e-7) << to_string(k) << " " << name;
        }
      });
    }
  }
}

TEST(BarredCurvature, BarredStructuralZeros) {
  const auto s = setups()[0];
  for (const auto& a : admitted(s.base, s.change, 2, 4, false)) {
    const auto d = differences(a.c);
    for (auto k : kAllConnections) {
      const auto cs = barred_torsions_curvatures(a.c, d, a.base, k);
      EXPECT_LE(max_abs(cs.T.values()), 1e-10);
      EXPECT_LE(max_abs(cs.S2.values()), 1e-10);
      if (k == ConnectionKind::HASHIGUCHI || k == ConnectionKind::BERWALD) EXPECT_LE(max_abs(cs.P2.values()), 1e-10);
      if (k == ConnectionKind::CHERN || k == ConnectionKind::BERWALD) EXPECT_LE(max_abs(cs.S4.values()), 1e-10);
    }
  }
}

TEST(Differences, TransvectionAndSymmetry) {
  for (const auto& s : setups()) {
    for (const auto& a : admitted(s.base, s.change, 2, 13, false)) {
      const auto d = differences(a.c);
      const auto& y = a.c.y;
      EXPECT_LE(res(transvect(d.Djk, 2, y), d.Dj), 1e-9) << s.label;
      EXPECT_LE(res(transvect(transvect(d.Djk, 2, y), 1, y), d.D.map([](const Jet& v) { return 2.0 * v; })), 1e-9);
      EXPECT_LE(res(transvect(d.B, 2, y), d.Dj), 1e-9) << s.label;
      EXPECT_LE(res(d.Djk, swap_slots(d.Djk, 1, 2)), 1e-12) << s.label;
      EXPECT_LE(res(d.B, swap_slots(d.B, 1, 2)), 1e-12) << s.label;
    }
  }
}

TEST(Invariance, ParallelCovectorAndHomotheticSigma) {
  const int n = 3;
  const auto change = catalog::change(FFamily::RANDERS, Polynomial::constant(0.2), catalog::b_constant(n));
  for (const auto& a : admitted(MetricSpec::euclidean(n), change, 3, 19, false)) {
    const auto d = differences(a.c);
    EXPECT_LE(max_abs(d.Djk.values()), 1e-10);
    for (auto k : {ConnectionKind::CHERN, ConnectionKind::BERWALD}) {
      const auto barred = barred_torsions_curvatures(a.c, d, a.base, k);
      const auto base = torsions_curvatures(a.base, k);
      base.for_each([&](const char* name, const JT& t) {
        EXPECT_LE(max_abs((named(barred, name) - t).values()), 1e-9) << to_string(k) << " " << name;
      });
    }
    const auto barred = barred_torsions_curvatures(a.c, d, a.base, ConnectionKind::CARTAN);
    const auto base = torsions_curvatures(a.base, ConnectionKind::CARTAN);
    EXPECT_LE(max_abs((barred.R2 - base.R2).values()), 1e-9);
    EXPECT_LE(max_abs((barred.P2 - base.P2).values()), 1e-9);
    EXPECT_LE(max_abs(barred.R4.values()), 1e-9);
  }
}

TEST(Invariance, ControlWithVaryingCovectorChanges) {
  const int n = 3;
  const auto change = catalog::change(FFamily::RANDERS, Polynomial::constant(0.2), catalog::b_control(n));
  for (const auto& a : admitted(MetricSpec::euclidean(n), change, 3, 19, false)) {
    EXPECT_GT(max_abs(differences(a.c).Djk.values()), 1e-3);
  }
}

// Special cases

struct SpecialSetup {
  SpecialCase sc;
  MetricSpec base;
  ChangeSpec change;
};

std::vector<SpecialSetup> special_setups(int n) {
  return {
      {SpecialCase::SHIBATA, catalog::base("QUARTIC", n),
       catalog::change(FFamily::MATSUMOTO, Polynomial{}, catalog::b_field(n))},
      {SpecialCase::ABED, catalog::base("QUARTIC", n),
       catalog::change(FFamily::RANDERS, catalog::sigma_field(n), catalog::b_field(n))},
      {SpecialCase::GEN_RANDERS, catalog::base("QUARTIC", n),
       catalog::change(FFamily::RANDERS, Polynomial{}, catalog::b_field(n))},
      {SpecialCase::KROPINA, catalog::base("CURVED_RIEMANNIAN", n),
       catalog::change(FFamily::KROPINA, Polynomial{}, catalog::b_field(n))},
      {SpecialCase::CONFORMAL, catalog::base("QUARTIC", n),
       catalog::change(FFamily::IDENTITY, catalog::sigma_field(n), std::vector<Polynomial>(static_cast<std::size_t>(n)))},
  };
}

TEST(SpecialCases, ReducedFormulasMatchTheGeneralPath) {
  for (int n : {3, 4}) {
    for (const auto& s : special_setups(n)) {
      const auto samples = admitted(s.base, s.change, 3, 41, false);
      ASSERT_EQ(samples.size(), 3u);
      for (const auto& a : samples) {
        const auto d = differences(a.c);
        EXPECT_LE(res(special_case_D(s.sc, s.change, a.c, d.Dj), d.Djk), 1e-8) << to_string(s.sc) << " n=" << n;
      }
    }
  }
}

TEST(SpecialCases, KropinaWithOneVaryingComponent) {
  const int n = 3;
  std::vector<Polynomial> b(n);
  b[0] = Polynomial::constant(1.0) + Polynomial::monomial(1.0, 1);
  const auto change = catalog::change(FFamily::KROPINA, Polynomial{}, b);
  for (const auto& a : admitted(catalog::base("CURVED_RIEMANNIAN", n), change, 3, 2, false)) {
    const auto d = differences(a.c);
    EXPECT_LE(res(special_case_D(SpecialCase::KROPINA, change, a.c, d.Dj), d.Djk), 1e-8);
  }
}

TEST(SpecialCases, RandersWithConstantCovectorOnFlatBaseIsZero) {
  const int n = 3;
  const auto change = catalog::change(FFamily::RANDERS, Polynomial{}, catalog::b_constant(n));
  for (const auto& a : admitted(MetricSpec::euclidean(n), change, 2, 6, false)) {
    const auto d = differences(a.c);
    EXPECT_LE(max_abs(special_case_D(SpecialCase::GEN_RANDERS, change, a.c, d.Dj).values()), 1e-12);
    EXPECT_LE(max_abs(d.Djk.values()), 1e-12);
  }
}

TEST(SpecialCases, ConformalOnEuclideanBase) {
  const int n = 3;
  const auto change = catalog::change(FFamily::IDENTITY, catalog::sigma_field(n), std::vector<Polynomial>(n));
  for (const auto& a : admitted(MetricSpec::euclidean(n), change, 2, 6, false)) {
    const auto& c = a.c;
    const auto expect = JT::generate(n, 1, 2, [&](int i, int j, int k) {
      return c.sigma_lo(j) * (i == k ? 1.0 : 0.0) + c.sigma_lo(k) * (i == j ? 1.0 : 0.0) - c.sigma_up(i) * c.g(j, k);
    });
    EXPECT_LE(res(special_case_D(SpecialCase::CONFORMAL, change, c, differences(c).Dj), expect), 1e-12);
  }
}

TEST(SpecialCases, HypothesesAreChecked) {
  const int n = 3;
  const auto with_sigma = catalog::change(FFamily::RANDERS, catalog::sigma_field(n), catalog::b_field(n));
  EXPECT_THROW(require_case(SpecialCase::SHIBATA, with_sigma), CaseMismatch);
  EXPECT_THROW(require_case(SpecialCase::GEN_RANDERS, with_sigma), CaseMismatch);
  EXPECT_NO_THROW(require_case(SpecialCase::ABED, with_sigma));
  EXPECT_THROW(require_case(SpecialCase::CONFORMAL, with_sigma), CaseMismatch);
  const auto matsumoto = catalog::change(FFamily::MATSUMOTO, Polynomial{}, catalog::b_field(n));
  EXPECT_THROW(require_case(SpecialCase::ABED, matsumoto), CaseMismatch);
  EXPECT_THROW(require_case(SpecialCase::KROPINA, matsumoto), CaseMismatch);
  // Kropina display on a non-Riemannian base
  const auto kropina = catalog::change(FFamily::KROPINA, Polynomial{}, catalog::b_field(n));
  const auto samples = admitted(catalog::base("QUARTIC", n), kropina, 1, 3, false);
  ASSERT_EQ(samples.size(), 1u);
  const auto d = differences(samples[0].c);
  EXPECT_THROW(special_case_D(SpecialCase::KROPINA, kropina, samples[0].c, d.Dj), CaseMismatch);
}

}  // namespace
