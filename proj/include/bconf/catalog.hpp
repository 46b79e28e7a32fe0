#pragma once

// Named base metrics and change fields used by the verifier suites and tests.
// All are positive definite on x in [-0.5, 0.5]^n.

#include <string>
#include <string_view>
#include <vector>

#include "bconf/change.hpp"
#include "bconf/errors.hpp"
#include "bconf/metric.hpp"
#include "bconf/polynomial.hpp"

namespace bconf::catalog {

using Poly = Polynomial;
using Matrix = std::vector<std::vector<Poly>>;

inline Poly x_pow(double c, int n, int k, int p) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  e[static_cast<std::size_t>(k)] = p;
  return Poly({Poly::Term{c, e}});
}

inline Matrix zero_matrix(int n) {
  return Matrix(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n)));
}

/// a_ii = 1 + 0.5 (x^{i+1})^2, a_ij = 0.15 (x^i + x^j), indices mod n.
inline MetricSpec curved_riemannian(int n) {
  Matrix a = zero_matrix(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto& e = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i == j) {
        e = Poly::constant(1.0) + x_pow(0.5, n, (i + 1) % n, 2);
      } else {
        e = x_pow(0.15, n, i, 1) + x_pow(0.15, n, j, 1);
      }
    }
  }
  return MetricSpec::riemannian(std::move(a));
}

/// a_00 = 1, a_0j = 0, and a curved block in x^1..x^{n-1}; dx^0 is parallel.
inline MetricSpec product_riemannian(int n) {
  if (n < 3) throw ConfigError("dimension", "product base needs n >= 3");
  Matrix a = zero_matrix(n);
  a[0][0] = Poly::constant(1.0);
  const int m = n - 1;
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      auto& e = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i == j) {
        e = Poly::constant(1.0) + x_pow(0.5, n, 1 + (i % m), 2);
      } else {
        e = x_pow(0.15, n, i, 1) + x_pow(0.15, n, j, 1);
      }
    }
  }
  return MetricSpec::riemannian(std::move(a));
}

/// c_i = 1 + 0.4 x^{i+1} + 0.2 (x^i)^2.
inline MetricSpec quartic(int n) {
  std::vector<Poly> c;
  for (int i = 0; i < n; ++i) {
    c.push_back(Poly::constant(1.0) + x_pow(0.4, n, (i + 1) % n, 1) + x_pow(0.2, n, i, 2));
  }
  return MetricSpec::quartic(std::move(c));
}

/// c_i = 1 + 0.5 i: a locally Minkowskian, non-Riemannian base.
inline MetricSpec quartic_constant(int n) {
  std::vector<Poly> c;
  for (int i = 0; i < n; ++i) c.push_back(Poly::constant(1.0 + 0.5 * i));
  return MetricSpec::quartic(std::move(c));
}

inline MetricSpec base(std::string_view name, int n) {
  if (name == "EUCLIDEAN") return MetricSpec::euclidean(n);
  if (name == "CURVED_RIEMANNIAN") return curved_riemannian(n);
  if (name == "PRODUCT_RIEMANNIAN") return product_riemannian(n);
  if (name == "QUARTIC") return quartic(n);
  if (name == "QUARTIC_CONST") return quartic_constant(n);
  throw ConfigError("base", "unknown catalog base '" + std::string(name) + "'");
}

inline constexpr double kBConst[] = {0.35, -0.25, 0.2, 0.1, -0.15, 0.05};

/// sigma = 0.3 x^0 - 0.2 (x^1)^2 + 0.1 x^0 x^2.
inline Poly sigma_field(int n) {
  Poly s = x_pow(0.3, n, 0, 1) + x_pow(-0.2, n, 1, 2);
  if (n >= 3) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[0] = 1;
    e[2] = 1;
    s += Poly({Poly::Term{0.1, e}});
  }
  return s;
}

/// b_i = c_i + 0.2 x^{i+1} - 0.1 (x^{i+2})^2.
inline std::vector<Poly> b_field(int n) {
  std::vector<Poly> b;
  for (int i = 0; i < n; ++i) {
    b.push_back(Poly::constant(kBConst[i % 6]) + x_pow(0.2, n, (i + 1) % n, 1) + x_pow(-0.1, n, (i + 2) % n, 2));
  }
  return b;
}

inline std::vector<Poly> b_constant(int n) {
  std::vector<Poly> b;
  for (int i = 0; i < n; ++i) b.push_back(Poly::constant(kBConst[i % 6]));
  return b;
}

/// b = c dx^0 (parallel on the product base).
inline std::vector<Poly> b_first_axis(int n, double c = 0.6) {
  std::vector<Poly> b(static_cast<std::size_t>(n));
  b[0] = Poly::constant(c);
  return b;
}

/// The control field b_0 = x^0, other components 0.
inline std::vector<Poly> b_control(int n) {
  std::vector<Poly> b(static_cast<std::size_t>(n));
  b[0] = x_pow(1.0, n, 0, 1);
  return b;
}

inline ChangeSpec change(FFamily f, Poly sigma, std::vector<Poly> b, int k = 2) {
  ChangeSpec c;
  c.family = f;
  c.k = k;
  c.sigma = std::move(sigma);
  c.b = std::move(b);
  return c;
}

inline ChangeSpec general_change(FFamily f, int n, int k = 3) { return change(f, sigma_field(n), b_field(n), k); }

inline constexpr FFamily kAllFamilies[] = {FFamily::IDENTITY, FFamily::RANDERS, FFamily::KROPINA, FFamily::MATSUMOTO,
                                           FFamily::GENERALIZED_RANDERS_POWER};

}  // namespace bconf::catalog
