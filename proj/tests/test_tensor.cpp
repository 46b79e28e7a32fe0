#include <gtest/gtest.h>

#include <random>

#include "bconf/tensor.hpp"

using bconf::Tensor;

namespace {

Tensor<double> random_metric(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Tensor<double> a(n, 0, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = (i == j ? 1.5 : 0.0) + u(rng);
  return bconf::symmetrize(a, 0, 1);
}

}  // namespace

TEST(Tensor, TraceOfIdentityAndDiagonal) {
  EXPECT_DOUBLE_EQ(bconf::contract(bconf::identity<double>(4), 0, 0)(), 4.0);
  const auto d = Tensor<double>::generate(3, 1, 1, [](int i, int j) { return i == j ? i + 1.0 : 0.0; });
  EXPECT_DOUBLE_EQ(bconf::contract(d, 0, 0)(), 6.0);
}

TEST(Tensor, InverseChainsToIdentity) {
  std::mt19937_64 rng(3);
  const auto g = random_metric(rng, 3);
  const auto gi = bconf::inverse(g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += gi(i, k) * g(k, j);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-14);
    }
}

TEST(Tensor, RaiseLowerRoundTrip) {
  std::mt19937_64 rng(5);
  const auto g = random_metric(rng, 4);
  const auto gi = bconf::inverse(g);
  const auto v = Tensor<double>::generate(4, 1, 0, [](int i) { return 0.3 * i - 0.5; });
  const auto back = bconf::raise(bconf::lower(v, 0, g), 0, gi);
  EXPECT_LE(bconf::residual(v, back).value, 1e-12);
}

TEST(Tensor, RaiseWithEuclideanMetricKeepsComponents) {
  const auto b = Tensor<double>::generate(3, 0, 1, [](int i) { return 1.0 + i; });
  const auto bu = bconf::raise(b, 0, bconf::inverse(Tensor<double>::generate(3, 0, 2, [](int i, int j) {
                                 return i == j ? 1.0 : 0.0;
                               })));
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(bu(i), b(i));
}

TEST(Tensor, TransvectMatchesManualSum) {
  const auto t = Tensor<double>::generate(3, 1, 2, [](int i, int j, int k) { return i + 2.0 * j - k * k; });
  const std::vector<double> y{0.5, -1.0, 2.0};
  const auto r = bconf::transvect(t, 2, y);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += t(i, j, k) * y[static_cast<std::size_t>(k)];
      EXPECT_DOUBLE_EQ(r(i, j), s);
    }
}

TEST(Tensor, ContractionIsLinear) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto rnd = [&] { return Tensor<double>::generate(3, 1, 2, [&](int, int, int) { return u(rng); }); };
  const auto a = rnd(), b = rnd();
  const double al = u(rng), be = u(rng);
  auto lin = a;
  lin *= al;
  auto bb = b;
  bb *= be;
  lin += bb;
  auto rhs = bconf::contract(a, 0, 1);
  rhs *= al;
  auto rb = bconf::contract(b, 0, 1);
  rb *= be;
  rhs += rb;
  EXPECT_LE(bconf::residual(bconf::contract(lin, 0, 1), rhs).value, 1e-13);
}

TEST(Tensor, SymmetrizeIsIdempotent) {
  const auto t = Tensor<double>::generate(3, 0, 2, [](int i, int j) { return i * 3.0 + j * j; });
  const auto s = bconf::symmetrize(t, 0, 1);
  const auto ss = bconf::symmetrize(s, 0, 1);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s.data()[k], ss.data()[k]);
}

TEST(Tensor, ShapeErrors) {
  const auto t = Tensor<double>::generate(3, 1, 1, [](int, int) { return 1.0; });
  EXPECT_THROW((void)bconf::contract(t, 1, 0), bconf::TensorShapeError);
  EXPECT_THROW((void)bconf::transvect(t, 2, std::vector<double>{1, 2, 3}), bconf::TensorShapeError);
  EXPECT_THROW((void)bconf::swap_slots(t, 0, 1), bconf::TensorShapeError);
  const auto u = Tensor<double>::generate(4, 1, 1, [](int, int) { return 1.0; });
  EXPECT_THROW((void)(Tensor<double>(t) += u), bconf::TensorShapeError);
}

TEST(Tensor, JetValuedInverse) {
  const bconf::ChartSample s({0.1, 0.2}, {1.0, 0.5});
  const auto v = bconf::seed(s);
  const auto g = Tensor<bconf::Jet>::generate(2, 0, 2, [&](int i, int j) {
    return i == j ? 1.0 + v[0] * v[static_cast<std::size_t>(2 + i)] : 0.2 * v[1];
  });
  const auto gi = bconf::inverse(g);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      bconf::Jet s(0.0);
      for (int k = 0; k < 2; ++k) s += gi(i, k) * g(k, j);
      const std::vector<int> e0{1, 0}, z{0, 0};
      EXPECT_NEAR(s.value(), i == j ? 1.0 : 0.0, 1e-14);
      EXPECT_NEAR(s.derivative(e0, z), 0.0, 1e-13);
    }
}
