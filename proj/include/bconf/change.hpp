#pragma once

// The change L -> f(e^sigma L, beta), beta = b_i(x) y^i, and the closed-form
// partials of each supported f.  Partials are with respect to the first
// argument (Lt = e^sigma L) and the second (beta).

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bconf/errors.hpp"
#include "bconf/jet.hpp"
#include "bconf/polynomial.hpp"

namespace bconf {

enum class FFamily { IDENTITY, RANDERS, KROPINA, MATSUMOTO, GENERALIZED_RANDERS_POWER };

inline constexpr std::string_view to_string(FFamily f) {
  switch (f) {
    case FFamily::IDENTITY: return "IDENTITY";
    case FFamily::RANDERS: return "RANDERS";
    case FFamily::KROPINA: return "KROPINA";
    case FFamily::MATSUMOTO: return "MATSUMOTO";
    case FFamily::GENERALIZED_RANDERS_POWER: return "GENERALIZED_RANDERS_POWER";
  }
  return "?";
}

inline std::optional<FFamily> parse_ffamily(std::string_view s) {
  for (auto f : {FFamily::IDENTITY, FFamily::RANDERS, FFamily::KROPINA, FFamily::MATSUMOTO,
                 FFamily::GENERALIZED_RANDERS_POWER}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

/// f and its partials; f222 = d^3 f / d beta^3 (needed for dp0/dbeta).
template <class S>
struct FValues {
  S f, f1, f2, f11, f12, f22, f222;
};

template <class S>
FValues<S> f_eval(FFamily family, int k, const S& lt, const S& beta, double guard = kDefaultGuard) {
  const S zero(0.0);
  switch (family) {
    case FFamily::IDENTITY:
      return {lt, S(1.0), zero, zero, zero, zero, zero};
    case FFamily::RANDERS:
      return {lt + beta, S(1.0), S(1.0), zero, zero, zero, zero};
    case FFamily::KROPINA: {
      if (!(std::abs(value_of(beta)) > guard)) throw DomainGuard("KROPINA: beta too small");
      const S ib = recip(beta, guard);
      const S ib2 = ib * ib;
      const S lt2 = lt * lt;
      return {lt2 * ib,         2.0 * lt * ib,        -1.0 * lt2 * ib2,         2.0 * ib,
              -2.0 * lt * ib2, 2.0 * lt2 * ib2 * ib, -6.0 * lt2 * ib2 * ib2};
    }
    case FFamily::MATSUMOTO: {
      const S d = lt - beta;
      if (!(std::abs(value_of(d)) > guard)) throw DomainGuard("MATSUMOTO: Lt - beta too small");
      const S id = recip(d, guard);
      const S id2 = id * id, id3 = id2 * id;
      const S lt2 = lt * lt;
      return {lt2 * id,
              lt * (lt - 2.0 * beta) * id2,
              lt2 * id2,
              2.0 * beta * beta * id3,
              -2.0 * lt * beta * id3,
              2.0 * lt2 * id3,
              6.0 * lt2 * id3 * id};
    }
    case FFamily::GENERALIZED_RANDERS_POWER: {
      if (k < 2) throw ConfigError("change.k", "GENERALIZED_RANDERS_POWER requires integer k >= 2");
      const S ltk = powi(lt, k), bk = powi(beta, k);
      const S sum = ltk + bk;
      if (!(value_of(sum) > guard)) throw DomainGuard("GENERALIZED_RANDERS_POWER: Lt^k + beta^k <= 0");
      const S f = root(sum, k, guard);
      const S if1 = recip(f, guard);
      const S f1mk = powi(if1, k - 1);            // f^(1-k)
      const S f12k = f1mk * powi(if1, k);         // f^(1-2k)
      const S ifk = powi(if1, k);                 // f^(-k)
      const S ltkm1 = powi(lt, k - 1), bkm1 = powi(beta, k - 1);
      const S bkm2 = powi(beta, k - 2), ltkm2 = powi(lt, k - 2);
      const double km1 = k - 1.0;
      S f222 = (1.0 - 2.0 * k) * powi(beta, 2 * k - 3) * ifk;
      if (k > 2) f222 = f222 + (k - 2.0) * powi(beta, k - 3);
      f222 = km1 * ltk * f12k * f222;
      return {f,
              ltkm1 * f1mk,
              bkm1 * f1mk,
              km1 * ltkm2 * bk * f12k,
              (1.0 - k) * ltkm1 * bkm1 * f12k,
              km1 * bkm2 * ltk * f12k,
              f222};
    }
  }
  throw ConfigError("change.f", "unknown family");
}

/// The triple (f family, sigma(x), b_i(x)).
struct ChangeSpec {
  FFamily family = FFamily::RANDERS;
  int k = 2;
  Polynomial sigma;
  std::vector<Polynomial> b;

  /// True when b vanishes identically: the change is the conformal one.
  bool is_conformal() const {
    for (const auto& bi : b) {
      if (!bi.is_zero()) return false;
    }
    return true;
  }

  bool sigma_constant() const { return sigma.is_constant(); }

  bool b_constant() const {
    for (const auto& bi : b) {
      if (!bi.is_constant()) return false;
    }
    return true;
  }

  template <class S>
  S beta(const std::vector<S>& x, const std::vector<S>& y) const {
    S acc(0.0);
    for (std::size_t i = 0; i < b.size() && i < y.size(); ++i) acc = acc + b[i](x) * y[i];
    return acc;
  }

  /// Barred fundamental function given the unbarred L as a value or jet.
  template <class S>
  S barred_L(const S& L, const std::vector<S>& x, const std::vector<S>& y, double guard = kDefaultGuard) const {
    using std::exp;
    const S lt = exp(sigma(x)) * L;
    const S bt = beta(x, y);
    if (family == FFamily::IDENTITY) return lt;
    return f_eval(family, k, lt, bt, guard).f;
  }
};

}  // namespace bconf
