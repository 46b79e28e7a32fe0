#pragma once

// Reduced D^i_jk formulas for the classical special changes.  Each one takes
// the general coefficient set and nonlinear difference D^i_j as inputs.

#include <cmath>
#include <optional>
#include <string_view>

#include "bconf/beta_conformal.hpp"
#include "bconf/errors.hpp"
#include "bconf/tensor.hpp"

namespace bconf {

enum class SpecialCase { SHIBATA, ABED, GEN_RANDERS, KROPINA, CONFORMAL };

inline constexpr SpecialCase kAllSpecialCases[] = {SpecialCase::SHIBATA, SpecialCase::ABED, SpecialCase::GEN_RANDERS,
                                                   SpecialCase::KROPINA, SpecialCase::CONFORMAL};

inline constexpr std::string_view to_string(SpecialCase s) {
  switch (s) {
    case SpecialCase::SHIBATA: return "SHIBATA";
    case SpecialCase::ABED: return "ABED";
    case SpecialCase::GEN_RANDERS: return "GEN_RANDERS";
    case SpecialCase::KROPINA: return "KROPINA";
    case SpecialCase::CONFORMAL: return "CONFORMAL";
  }
  return "?";
}

inline std::optional<SpecialCase> parse_special_case(std::string_view s) {
  for (auto c : kAllSpecialCases) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

/// Throws CaseMismatch unless `spec` satisfies the hypotheses of `sc`.
inline void require_case(SpecialCase sc, const ChangeSpec& spec) {
  const bool sigma_zero = spec.sigma.is_zero();
  const std::string name(to_string(sc));
  switch (sc) {
    case SpecialCase::SHIBATA:
      if (!sigma_zero) throw CaseMismatch(name + " needs sigma = 0");
      if (spec.is_conformal()) throw CaseMismatch(name + " needs b != 0");
      return;
    case SpecialCase::ABED:
      if (spec.family != FFamily::RANDERS) throw CaseMismatch(name + " needs f = e^sigma L + beta");
      return;
    case SpecialCase::GEN_RANDERS:
      if (spec.family != FFamily::RANDERS) throw CaseMismatch(name + " needs f = L + beta");
      if (!sigma_zero) throw CaseMismatch(name + " needs sigma = 0");
      return;
    case SpecialCase::KROPINA:
      if (spec.family != FFamily::KROPINA) throw CaseMismatch(name + " needs f = L^2 / beta");
      if (!sigma_zero) throw CaseMismatch(name + " needs sigma = 0");
      return;
    case SpecialCase::CONFORMAL:
      if (!spec.is_conformal()) throw CaseMismatch(name + " needs b = 0");
      return;
  }
}

namespace detail {

// g-bar^{ir} Y_jkr for an explicit prefactor P^{ir}.
template <class P, class Y>
JT contract_prefactor(int n, P&& pre, Y&& y) {
  return JT::generate(n, 1, 2, [&](int i, int j, int k) {
    Jet acc(0.0);
    for (int r = 0; r < n; ++r) acc += pre(i, r) * y(j, k, r);
    return acc;
  });
}

inline JT pair_with_D(const JT& T3, const JT& Dj) {
  // T3_jkm D^m_r
  const int n = T3.dim();
  return JT::generate(n, 0, 3, [&](int j, int k, int r) {
    Jet acc(0.0);
    for (int m = 0; m < n; ++m) acc += T3(j, k, m) * Dj(m, r);
    return acc;
  });
}

}  // namespace detail

/// D^i_jk from the reduced formula of `sc`.  `Dj` is D^i_j of the general path.
inline JT special_case_D(SpecialCase sc, const ChangeSpec& spec, const CoefficientSet& c, const JT& Dj) {
  require_case(sc, spec);
  if (!c.has_covariant) throw JetOrderError("special_case_D needs the connection-level bundle");
  const int n = c.n;
  const Jet& L = c.L;
  const JT& g = c.g;
  const JT& b = c.b_lo;
  const JT& bu = c.b_up;
  const JT& y = c.y_lo;
  const JT& yu = c.y_up;
  const JT& F = c.F;
  const JT& E = c.E;
  const JT& Q = c.Q;
  const JT& b0 = c.b0cov;
  const auto theta = [](const JT& X, int j, int k, int r) {
    return cyclic_theta([&](int a, int bb, int d) -> const Jet& { return X(a, bb, d); }, j, k, r);
  };
  const auto FEQ = [&](int j, int k, int r) { return F(r, k) * Q(j) + F(r, j) * Q(k) + E(j, k) * Q(r); };

  switch (sc) {
    case SpecialCase::SHIBATA: {
      const JT pCV = JT::generate(n, 0, 3, [&](int j, int k, int m) { return c.p * c.C_lo(j, k, m) + c.V(j, k, m); });
      const JT W = detail::pair_with_D(pCV, Dj);
      const Jet ip = recip(c.p);
      const auto pre = [&](int i, int r) {
        return ip * c.ginv(i, r) - (c.s0 * bu(i) + c.sm1 * yu(i)) * bu(r) - (c.sm1 * bu(i) + c.sm2 * yu(i)) * yu(r);
      };
      return detail::contract_prefactor(n, pre, [&](int j, int k, int r) {
        return c.Bt(j, r) * b0(k) + c.Bt(k, r) * b0(j) - c.Bt(j, k) * b0(r) + FEQ(j, k, r) + W(j, k, r) -
               W(r, k, j) - W(r, j, k);
      });
    }
    case SpecialCase::ABED:
    case SpecialCase::GEN_RANDERS: {
      const Jet& Lbar = c.fv.f;
      const Jet es = sc == SpecialCase::ABED ? c.es : Jet(1.0);
      const Jet tau = es * Lbar * recip(L);
      const Jet itau = recip(tau);
      const Jet iLt = recip(Lbar * tau);
      const Jet mu = L * (L * c.b2 + c.beta * es) * recip(tau * Lbar * Lbar);
      const auto pre = [&](int i, int r) {
        return itau * c.ginv(i, r) - iLt * (yu(i) * bu(r) + yu(r) * bu(i)) + mu * c.l_up(i) * c.l_up(r);
      };
      const Jet hcoef = es * recip(L);
      const JT X = JT::generate(n, 0, 3, [&](int j, int k, int r) {
        Jet acc = -1.0 * hcoef * c.h(j, k) * b0(r);
        if (sc == SpecialCase::ABED) acc -= c.K(j, k) * c.sigma_lo(r);
        for (int m = 0; m < n; ++m) acc += (2.0 * tau * c.C_lo(j, k, m) + 2.0 * c.V(j, k, m)) * Dj(m, r);
        return acc;
      });
      return detail::contract_prefactor(n, pre, [&](int j, int k, int r) { return FEQ(j, k, r) + 0.5 * theta(X, j, k, r); });
    }
    case SpecialCase::KROPINA: {
      if (max_abs(c.C.values()) > 1e-10) throw CaseMismatch("KROPINA needs a Riemannian base");
      const Jet L2 = L * L;
      const Jet& beta = c.beta;
      const Jet beta2 = beta * beta, beta3 = beta2 * beta;
      const Jet beta5 = beta3 * beta2;
      const Jet scale = recip(2.0 * L2 * L2 * c.b2 * beta3);
      const auto pre = [&](int i, int r) {
        return scale * (L2 * c.b2 * c.ginv(i, r) - (L2 * bu(i) - 2.0 * beta * yu(i)) * bu(r) +
                        2.0 * (c.m2 * yu(i) + beta * c.m_up(i)) * yu(r));
      };
      const auto lin = [&](int a) { return 3.0 * L2 * b(a) - 4.0 * beta * y(a); };
      const JT X = JT::generate(n, 0, 3, [&](int j, int k, int r) {
        Jet acc = 4.0 * L2 * (beta2 * c.h(j, k) + 3.0 * L2 * c.m_lo(j) * c.m_lo(k)) * b0(r);
        for (int m = 0; m < n; ++m) acc += 2.0 * beta5 * c.V(j, k, m) * Dj(m, r);
        return acc;
      });
      return detail::contract_prefactor(n, pre, [&](int j, int k, int r) {
        return beta * L2 * (F(r, k) * lin(j) + F(r, j) * lin(k) + E(j, k) * lin(r)) + 0.5 * theta(X, j, k, r);
      });
    }
    case SpecialCase::CONFORMAL: {
      const JT& C = c.C;
      const JT& s = c.sigma_lo;
      const JT& su = c.sigma_up;
      const Jet L2 = L * L;
      // Cs^i_j = C^i_jm s^m;  Cs_jk = C_jkm s^m
      const JT Cs = JT::generate(n, 1, 1, [&](int i, int j) {
        Jet acc(0.0);
        for (int m = 0; m < n; ++m) acc += C(i, j, m) * su(m);
        return acc;
      });
      const JT Cs_lo = JT::generate(n, 0, 2, [&](int j, int k) {
        Jet acc(0.0);
        for (int m = 0; m < n; ++m) acc += c.C_lo(j, k, m) * su(m);
        return acc;
      });
      // C^{mi}_r s^r = g^{ia} C^m_ar s^r = g^{ia} Cs^m_a
      const JT Cup = JT::generate(n, 2, 0, [&](int m, int i) {
        Jet acc(0.0);
        for (int a = 0; a < n; ++a) acc += c.ginv(i, a) * Cs(m, a);
        return acc;
      });
      return JT::generate(n, 1, 2, [&](int i, int j, int k) {
        const double dik = i == k ? 1.0 : 0.0, dij = i == j ? 1.0 : 0.0;
        Jet acc = s(j) * dik + s(k) * dij - su(i) * g(j, k);
        acc += y(j) * Cs(i, k) + y(k) * Cs(i, j) - yu(i) * Cs_lo(j, k) - c.sigma0 * C(i, j, k);
        Jet quad(0.0);
        for (int m = 0; m < n; ++m) {
          quad += c.C_lo(j, k, m) * Cup(m, i) - C(i, k, m) * Cs(m, j) - C(i, j, m) * Cs(m, k);
        }
        return acc + L2 * quad;
      });
    }
  }
  throw CaseMismatch("unknown special case");
}

}  // namespace bconf
