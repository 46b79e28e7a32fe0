#pragma once

// Fundamental functions L(x, y) as jet-evaluable programs.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bconf/change.hpp"
#include "bconf/errors.hpp"
#include "bconf/jet.hpp"
#include "bconf/polynomial.hpp"

namespace bconf {

enum class MetricFamily { RIEMANNIAN, QUARTIC, COMPOSED };

inline constexpr std::string_view to_string(MetricFamily f) {
  switch (f) {
    case MetricFamily::RIEMANNIAN: return "RIEMANNIAN";
    case MetricFamily::QUARTIC: return "QUARTIC";
    case MetricFamily::COMPOSED: return "COMPOSED";
  }
  return "?";
}

inline std::optional<MetricFamily> parse_metric_family(std::string_view s) {
  for (auto f : {MetricFamily::RIEMANNIAN, MetricFamily::QUARTIC, MetricFamily::COMPOSED}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

class MetricSpec {
 public:
  /// L = sqrt(a_ij(x) y^i y^j); `a` is n x n and read symmetrically (a_ij and a_ji averaged).
  static MetricSpec riemannian(std::vector<std::vector<Polynomial>> a) {
    MetricSpec m;
    m.family_ = MetricFamily::RIEMANNIAN;
    m.dim_ = static_cast<int>(a.size());
    for (const auto& row : a) {
      if (static_cast<int>(row.size()) != m.dim_) throw ConfigError("base.entries", "matrix must be square");
    }
    m.a_ = std::move(a);
    return m;
  }

  static MetricSpec euclidean(int n) {
    std::vector<std::vector<Polynomial>> a(static_cast<std::size_t>(n), std::vector<Polynomial>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Polynomial::constant(1.0);
    return riemannian(std::move(a));
  }

  /// L = (sum_i c_i(x) (y^i)^4)^(1/4).
  static MetricSpec quartic(std::vector<Polynomial> c) {
    MetricSpec m;
    m.family_ = MetricFamily::QUARTIC;
    m.dim_ = static_cast<int>(c.size());
    m.c_ = std::move(c);
    return m;
  }

  /// The barred fundamental function f(e^sigma L, beta) of `base`.
  static MetricSpec composed(const MetricSpec& base, const ChangeSpec& change) {
    if (change.b.size() != static_cast<std::size_t>(base.dim())) {
      throw ConfigError("change.b", "needs one component per dimension");
    }
    MetricSpec m;
    m.family_ = MetricFamily::COMPOSED;
    m.dim_ = base.dim_;
    m.base_ = std::make_shared<const MetricSpec>(base);
    m.change_ = std::make_shared<const ChangeSpec>(change);
    return m;
  }

  MetricFamily family() const noexcept { return family_; }
  int dim() const noexcept { return dim_; }
  const MetricSpec& base() const { return *base_; }
  const ChangeSpec& change() const { return *change_; }
  const std::vector<std::vector<Polynomial>>& entries() const noexcept { return a_; }
  const std::vector<Polynomial>& coefficients() const noexcept { return c_; }

  bool is_riemannian() const noexcept { return family_ == MetricFamily::RIEMANNIAN; }

  /// True when no coefficient depends on x.
  bool x_independent() const {
    switch (family_) {
      case MetricFamily::RIEMANNIAN:
        for (const auto& row : a_)
          for (const auto& p : row)
            if (!p.is_constant()) return false;
        return true;
      case MetricFamily::QUARTIC:
        for (const auto& p : c_)
          if (!p.is_constant()) return false;
        return true;
      case MetricFamily::COMPOSED:
        return base_->x_independent() && change_->sigma_constant() && change_->b_constant();
    }
    return false;
  }

  /// Evaluates L on values or jets.
  template <class S>
  S operator()(const std::vector<S>& x, const std::vector<S>& y, double guard = kDefaultGuard) const {
    switch (family_) {
      case MetricFamily::RIEMANNIAN: {
        S q(0.0);
        for (int i = 0; i < dim_; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          q = q + a_[ui][ui](x) * y[ui] * y[ui];
          for (int j = i + 1; j < dim_; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (a_[ui][uj].is_zero() && a_[uj][ui].is_zero()) continue;
            q = q + (a_[ui][uj](x) + a_[uj][ui](x)) * y[ui] * y[uj];
          }
        }
        if (!(value_of(q) > guard)) throw InadmissibleSample("L^2 <= 0");
        return sqrt_of(q, guard);
      }
      case MetricFamily::QUARTIC: {
        S q(0.0);
        for (int i = 0; i < dim_; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          const S y2 = y[ui] * y[ui];
          q = q + c_[ui](x) * y2 * y2;
        }
        if (!(value_of(q) > guard)) throw InadmissibleSample("L^4 <= 0");
        return pow(q, 0.25, guard);
      }
      case MetricFamily::COMPOSED: {
        const S L = (*base_)(x, y, guard);
        return change_->barred_L(L, x, y, guard);
      }
    }
    throw ConfigError("base.family", "unknown family");
  }

 private:
  MetricFamily family_ = MetricFamily::RIEMANNIAN;
  int dim_ = 0;
  std::vector<std::vector<Polynomial>> a_;
  std::vector<Polynomial> c_;
  std::shared_ptr<const MetricSpec> base_;
  std::shared_ptr<const ChangeSpec> change_;

  static double sqrt_of(double q, double) { return std::sqrt(q); }
  static Jet sqrt_of(const Jet& q, double guard) { return sqrt(q, guard); }
};

}  // namespace bconf
