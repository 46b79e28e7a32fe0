#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bconf/jet.hpp"

namespace bconf {

/// Sparse polynomial in the chart coordinates x^0..x^{n-1}.
class Polynomial {
 public:
  struct Term {
    double coeff = 0.0;
    std::vector<int> exponents;
  };

  Polynomial() = default;
  explicit Polynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      for (int e : t.exponents) {
        if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
      }
    }
  }

  static Polynomial constant(double c) { return Polynomial({Term{c, {}}}); }

  /// c * x^k.
  static Polynomial monomial(double c, int k, int power = 1) {
    std::vector<int> e(static_cast<std::size_t>(k) + 1, 0);
    e[static_cast<std::size_t>(k)] = power;
    return Polynomial({Term{c, std::move(e)}});
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept {
    for (const auto& t : terms_) {
      if (t.coeff != 0.0) return false;
    }
    return true;
  }

  bool is_constant() const noexcept {
    for (const auto& t : terms_) {
      if (t.coeff == 0.0) continue;
      for (int e : t.exponents) {
        if (e != 0) return false;
      }
    }
    return true;
  }

  int degree() const noexcept {
    int d = 0;
    for (const auto& t : terms_) {
      if (t.coeff == 0.0) continue;
      int td = 0;
      for (int e : t.exponents) td += e;
      d = std::max(d, td);
    }
    return d;
  }

  /// Highest variable index referenced (with a nonzero exponent), or -1.
  int max_variable() const noexcept {
    int m = -1;
    for (const auto& t : terms_) {
      for (std::size_t k = 0; k < t.exponents.size(); ++k) {
        if (t.exponents[k] != 0) m = std::max(m, static_cast<int>(k));
      }
    }
    return m;
  }

  Polynomial& operator+=(const Polynomial& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }

  template <class S>
  S operator()(const std::vector<S>& x) const {
    S acc(0.0);
    for (const auto& t : terms_) {
      if (t.coeff == 0.0) continue;
      if (t.exponents.size() > x.size()) {
        for (std::size_t k = x.size(); k < t.exponents.size(); ++k) {
          if (t.exponents[k] != 0) throw std::out_of_range("Polynomial: variable index exceeds dimension");
        }
      }
      S m(t.coeff);
      for (std::size_t k = 0; k < t.exponents.size() && k < x.size(); ++k) {
        for (int p = 0; p < t.exponents[k]; ++p) m = m * x[k];
      }
      acc = acc + m;
    }
    return acc;
  }

 private:
  std::vector<Term> terms_;
};

}  // namespace bconf
