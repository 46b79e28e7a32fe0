#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bconf/catalog.hpp"
#include "bconf/finsler.hpp"

using namespace bconf;

namespace {

double worst(const JT& t) { return max_abs(t.values()); }

JT transvect_y(const JT& t, int slot, const FundamentalBundle& b) { return transvect(t, slot, b.y); }

MetricSpec randers_x0(int n) {
  return MetricSpec::composed(MetricSpec::euclidean(n),
                              catalog::change(FFamily::RANDERS, Polynomial{}, catalog::b_control(n)));
}

std::vector<ChartSample> draw(int n, int count, std::uint64_t seed) {
  SampleStream s(n, seed);
  std::vector<ChartSample> out;
  for (int i = 0; i < count; ++i) out.push_back(s.draw(i, 0));
  return out;
}

// Riemann tensor of a Riemannian metric a(x) from the coordinate formulas, with
// jets in x only: R^i_hjk = d_k G^i_hj - d_j G^i_hk + G^m_hj G^i_mk - G^m_hk G^i_mj.
Tensor<double> textbook_riemann(const MetricSpec& m, const std::vector<double>& x0) {
  const int n = m.dim();
  const ChartSample s(x0, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  const auto seeds = seed(s, JetPolicy{2, 0});
  const std::vector<Jet> x(seeds.begin(), seeds.begin() + n);
  const auto& a = m.entries();
  const auto g = Tensor<Jet>::generate(n, 0, 2, [&](int i, int j) {
    return 0.5 * (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](x) +
                  a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)](x));
  });
  const auto gi = inverse(g);
  const auto chr = Tensor<Jet>::generate(n, 1, 2, [&](int i, int j, int k) {
    Jet acc(0.0);
    for (int r = 0; r < n; ++r) acc += 0.5 * gi(i, r) * (g(k, r).dx(j) + g(j, r).dx(k) - g(j, k).dx(r));
    return acc;
  });
  return Tensor<double>::generate(n, 1, 3, [&](int i, int h, int j, int k) {
    double v = chr(i, h, j).dx(k).value() - chr(i, h, k).dx(j).value();
    for (int mm = 0; mm < n; ++mm) {
      v += chr(mm, h, j).value() * chr(i, mm, k).value() - chr(mm, h, k).value() * chr(i, mm, j).value();
    }
    return v;
  });
}

}  // namespace

TEST(Fundamentals, EuclideanIsFlat) {
  const auto m = MetricSpec::euclidean(3);
  for (const auto& s : draw(3, 3, 1)) {
    const auto b = fundamentals(m, s, JetPolicy{2, 6});
    EXPECT_LE(worst(b.gamma), 1e-14);
    EXPECT_LE(worst(b.G), 1e-14);
    EXPECT_LE(worst(b.N), 1e-14);
    EXPECT_LE(worst(b.Gamma), 1e-14);
    EXPECT_LE(worst(b.C_lo), 1e-13);
    for (auto c : kAllConnections) {
      torsions_curvatures(b, c).for_each([](const char* name, const JT& t) {
        EXPECT_LE(max_abs(t.values()), 1e-12) << name;
      });
    }
  }
}

TEST(Fundamentals, DiagonalChristoffelByHand) {
  catalog::Matrix a = catalog::zero_matrix(2);
  a[0][0] = Polynomial::constant(1.0) + catalog::x_pow(1.0, 2, 0, 2);
  a[1][1] = Polynomial::constant(1.0);
  const auto m = MetricSpec::riemannian(a);
  const auto b = fundamentals(m, ChartSample({1.0, 0.3}, {0.4, 0.9}), JetPolicy{1, 4});
  EXPECT_NEAR(b.gamma(0, 0, 0).value(), 0.5, 1e-14);
}

TEST(Fundamentals, ConstantQuarticHasNoSpray) {
  const auto m = catalog::quartic_constant(3);
  for (const auto& s : draw(3, 3, 2)) {
    const auto b = fundamentals(m, s, JetPolicy{1, 4});
    EXPECT_LE(worst(b.G), 1e-14);
    EXPECT_LE(worst(b.N), 1e-14);
    EXPECT_GT(worst(b.C_lo), 1e-3);
  }
}

TEST(Fundamentals, EulerHomogeneityAndAnnihilation) {
  for (const auto& m : {catalog::quartic(3), catalog::curved_riemannian(3), randers_x0(3)}) {
    for (const auto& s : draw(3, 5, 3)) {
      const auto b = fundamentals(m, s, JetPolicy{1, 4});
      const double L = b.L.value();
      EXPECT_NEAR(transvect_y(b.l_lo, 0, b)().value(), L, 1e-12 * L);
      EXPECT_NEAR(transvect_y(transvect_y(b.g, 1, b), 0, b)().value(), L * L, 1e-11 * L * L);
      EXPECT_LE(worst(transvect_y(b.C_lo, 2, b)), 1e-11);
      EXPECT_LE(worst(transvect_y(b.h, 1, b)), 1e-11);
      double ll = 0;
      for (int i = 0; i < 3; ++i) ll += b.l_lo(i).value() * b.l_up(i).value();
      EXPECT_NEAR(ll, 1.0, 1e-12);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double s2 = 0;
          for (int k = 0; k < 3; ++k) s2 += b.ginv(i, k).value() * b.g(k, j).value();
          EXPECT_NEAR(s2, i == j ? 1.0 : 0.0, 1e-10);
        }
    }
  }
}

TEST(Fundamentals, DeflectionAndSymmetry) {
  for (const auto& m : {catalog::quartic(3), randers_x0(3)}) {
    for (const auto& s : draw(3, 4, 4)) {
      const auto b = fundamentals(m, s, JetPolicy{1, 4});
      const auto Ny = transvect_y(b.N, 1, b);
      const auto Gb0 = transvect_y(b.Gb, 2, b);
      const auto Ga0 = transvect_y(b.Gamma, 2, b);
      for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(Ny(i).value(), 2.0 * b.G(i).value(), 1e-10);
        for (int j = 0; j < 3; ++j) {
          EXPECT_NEAR(Gb0(i, j).value(), b.N(i, j).value(), 1e-10);
          EXPECT_NEAR(Ga0(i, j).value(), b.N(i, j).value(), 1e-10);
          for (int k = 0; k < 3; ++k) EXPECT_NEAR(b.Gamma(i, j, k).value(), b.Gamma(i, k, j).value(), 1e-12);
        }
      }
    }
  }
}

TEST(Fundamentals, CartanMetricity) {
  const auto m = catalog::quartic(3);
  for (const auto& s : draw(3, 3, 5)) {
    const auto b = fundamentals(m, s, JetPolicy{2, 5});
    EXPECT_LE(worst(covariant_h(b.g, b.Gamma, b.N)), 1e-9);
    EXPECT_LE(worst(covariant_v(b.g, b.C)), 1e-9);
    const JT Ls = JT::scalar(3, b.L);
    EXPECT_LE(worst(covariant_h(Ls, b.Gamma, b.N)), 1e-9);
  }
}

TEST(Fundamentals, ConstantCovectorIsParallelOnFlatBase) {
  const auto m = MetricSpec::euclidean(3);
  const auto b = fundamentals(m, draw(3, 1, 6)[0], JetPolicy{2, 5});
  const JT bc = JT::generate(3, 0, 1, [](int i) { return Jet(0.3 * (i + 1)); });
  EXPECT_LE(worst(covariant_h(bc, b.Gamma, b.N)), 1e-14);
}

TEST(Fundamentals, RiemannianConnectionsCoincide) {
  const auto m = catalog::curved_riemannian(3);
  for (const auto& s : draw(3, 3, 7)) {
    const auto b = fundamentals(m, s, JetPolicy{2, 6});
    EXPECT_LE(residual(b.Gamma.values(), b.gamma.values()).value, 1e-10);
    EXPECT_LE(residual(b.Gb.values(), b.gamma.values()).value, 1e-10);
    EXPECT_LE(worst(b.C_lo), 1e-10);
    const auto cs = torsions_curvatures(b, ConnectionKind::CARTAN);
    EXPECT_LE(worst(cs.S4), 1e-9);
    EXPECT_LE(worst(cs.P4), 1e-9);
  }
}

TEST(Fundamentals, RiemannianCurvatureMatchesTextbookFormula) {
  for (int n : {3, 4}) {
    const auto m = catalog::curved_riemannian(n);
    for (const auto& s : draw(n, 3, 8)) {
      const auto b = fundamentals(m, s, JetPolicy{2, 6});
      const auto R = torsions_curvatures(b, ConnectionKind::CARTAN).R4.values();
      const auto ref = textbook_riemann(m, s.x);
      EXPECT_GT(max_abs(ref), 1e-3);
      EXPECT_LE(residual(R, ref).value, 1e-8);
    }
  }
}

TEST(Fundamentals, StructuralZerosOfTheFourConnections) {
  const auto m = randers_x0(3);
  for (const auto& s : draw(3, 2, 9)) {
    const auto b = fundamentals(m, s, JetPolicy{2, 6});
    for (auto c : kAllConnections) {
      const auto cs = torsions_curvatures(b, c);
      EXPECT_LE(worst(cs.T), 1e-10) << to_string(c);
      EXPECT_LE(worst(cs.S2), 1e-10) << to_string(c);
      if (c == ConnectionKind::HASHIGUCHI || c == ConnectionKind::BERWALD) EXPECT_LE(worst(cs.P2), 1e-10);
      if (c == ConnectionKind::CHERN || c == ConnectionKind::BERWALD) EXPECT_LE(worst(cs.S4), 1e-10);
    }
    // Cartan (v)hv-torsion is C^i_{jk|0}.
    const auto cs = torsions_curvatures(b, ConnectionKind::CARTAN);
    const auto C0 = transvect(covariant_h(b.C, b.Gamma, b.N), 3, b.y);
    EXPECT_LE(residual(cs.P2.values(), C0.values()).value, 1e-9);
    EXPECT_GT(worst(cs.P2), 1e-4);
  }
}

TEST(Fundamentals, CartanVCurvatureIsQuadraticInC) {
  // S^i_hjk = C^r_hk C^i_rj - C^r_hj C^i_rk, and S_ihjk is skew in (i, h).
  for (const auto& m : {randers_x0(3), catalog::quartic(3)}) {
    for (const auto& s : draw(3, 2, 12)) {
      const auto b = fundamentals(m, s, JetPolicy{2, 6});
      const auto cs = torsions_curvatures(b, ConnectionKind::CARTAN);
      const auto expect = JT::generate(3, 1, 3, [&](int i, int h, int j, int k) {
        Jet acc(0.0);
        for (int r = 0; r < 3; ++r) acc += b.C(r, h, k) * b.C(i, r, j) - b.C(r, h, j) * b.C(i, r, k);
        return acc;
      });
      EXPECT_LE(residual(cs.S4.values(), expect.values()).value, 1e-9);
      EXPECT_GT(worst(cs.S4), 1e-6);
      const auto S_lo = lower(cs.S4, 0, b.g);  // S_lo(i, h, j, k) = S_ihjk
      EXPECT_LE(max_abs((S_lo + swap_slots(S_lo, 0, 1)).values()), 1e-9);
    }
  }
}

TEST(Fundamentals, HCurvatureTransvectsToVHTorsion) {
  // R^i_jk = R^i_hjk y^h for every connection.
  for (const auto& m : {randers_x0(3), catalog::quartic(3)}) {
    for (const auto& s : draw(3, 2, 10)) {
      const auto b = fundamentals(m, s, JetPolicy{2, 6});
      for (auto c : kAllConnections) {
        const auto cs = torsions_curvatures(b, c);
        const auto Ry = transvect(cs.R4, 1, b.y);
        EXPECT_LE(residual(Ry.values(), cs.R2.values()).value, 1e-9) << to_string(c);
      }
    }
  }
}

TEST(Classify, FlatAndMinkowskianBases) {
  const auto samples = draw(3, 20, 11);
  for (const auto& m : {MetricSpec::euclidean(3), catalog::quartic_constant(3)}) {
    const auto c = classify(m, samples);
    EXPECT_TRUE(c.berwald);
    EXPECT_TRUE(c.landsberg);
    EXPECT_TRUE(c.locally_minkowski);
  }
}

TEST(Classify, RandersWithVaryingCovectorIsNotBerwald) {
  const auto c = classify(randers_x0(3), draw(3, 20, 12));
  EXPECT_FALSE(c.berwald);
  EXPECT_GT(c.berwald_margin, 1e-3);
}

TEST(Classify, CurvedRiemannian) {
  const auto c = classify(catalog::curved_riemannian(3), draw(3, 20, 13));
  EXPECT_TRUE(c.berwald);
  EXPECT_TRUE(c.landsberg);
  EXPECT_FALSE(c.locally_minkowski);
}

TEST(Classify, NeedsTwentySamples) {
  EXPECT_THROW((void)classify(MetricSpec::euclidean(3), draw(3, 19, 14)), InsufficientSamples);
}

TEST(Sampling, DeterministicAndInDomain) {
  SampleStream a(4, 99), b(4, 99);
  for (int i = 0; i < 10; ++i) {
    const auto s = a.draw(i, 0), t = b.draw(i, 0);
    EXPECT_EQ(s.x, t.x);
    EXPECT_EQ(s.y, t.y);
    double r = 0;
    for (double v : s.y) r += v * v;
    EXPECT_GE(std::sqrt(r), 0.5 - 1e-12);
    EXPECT_LE(std::sqrt(r), 2.0 + 1e-12);
    for (double v : s.x) EXPECT_LE(std::abs(v), 0.5);
  }
}
