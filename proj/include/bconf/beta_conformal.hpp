#pragma once

// Closed-form barred objects of L -> f(e^sigma L, beta) built from the
// unbarred bundle, without differentiating the barred L.
//
// Everything is carried as jets truncated to a working order (wx, wy), so
// the results stay differentiable: B^i_jk is dot-d_k of the D^i_j jets, and
// covariant derivatives of difference tensors are taken on the same jets.

#include <cmath>
#include <string>
#include <vector>

#include "bconf/change.hpp"
#include "bconf/errors.hpp"
#include "bconf/finsler.hpp"
#include "bconf/jet.hpp"
#include "bconf/tensor.hpp"

namespace bconf {

struct ChangeGuards {
  double beta_rel = 1e-6;   // |beta| >= beta_rel * L
  double m2_min = 1e-8;
  double eps_min = 1e-8;
  double matsumoto_rel = 0.3;  // Lt - beta > matsumoto_rel * Lt
};

/// The scalar ladder and the assembled tensors at one sample.
///
/// Slot layouts: b_lo(i) = b_i, b_up(i) = b^i, db(i,j) = d_j b_i,
/// bcov(i,j) = b_{i|j}, E(i,j), F(i,j), b0cov(k) = b_{0|k}, F0_lo(i) = F_i0,
/// F0_up(i) = F^i_0, E0(j) = E_j0, V(i,j,k) = V_ijk, M(l,i,j) = M^l_ij.
struct CoefficientSet {
  int n = 0;
  int wx = 0, wy = 0;
  bool conformal = false;
  FFamily family = FFamily::RANDERS;

  std::vector<Jet> x, y;
  Jet L, beta, sigma, es, ems, Lt;
  FValues<Jet> fv;
  Jet p, q, q0, p0, qm1, pm1, qm2, pm2, p02;
  JT y_lo, y_up, b_lo, b_up, m_lo, m_up;
  Jet b2, m2;
  Jet eps, s0, sm1, sm2;
  JT sigma_lo, sigma_up;
  Jet sigma0, sigma_beta;

  // unbarred data at the working order
  JT g, ginv, h, l_lo, l_up, C_lo, C;

  // assembled algebraic tensors
  JT Q, Bt, K, V, M;
  Jet A1, A2, A3, A4;

  // covariant part (needs the unbarred connection)
  bool has_covariant = false;
  JT N, Gamma, db, bcov, E, F, b0cov, F0_lo, F0_up, E0;
  Jet E00, F_beta0;
};

/// The difference tensors. Dj(i,j) = D^i_j, B(i,j,k) = B^i_jk = dot-d_k D^i_j,
/// Djk(i,j,k) = D^i_jk, A(i,j) = A_ij.
struct DifferenceSet {
  JT D, A, Dj, B, Djk;
};

namespace detail {

inline Jet trunc(const Jet& j, int wx, int wy) { return j.truncated(wx, wy); }

inline JT vec_lo(int n, const std::vector<Jet>& v) {
  return JT::generate(n, 0, 1, [&](int i) { return v[static_cast<std::size_t>(i)]; });
}

inline Jet dot(const JT& a, const JT& b) {
  Jet acc(0.0);
  for (int i = 0; i < a.dim(); ++i) acc += a(i) * b(i);
  return acc;
}

inline JT raise_vec(const JT& ginv, const JT& v) {
  const int n = v.dim();
  return JT::generate(n, 1, 0, [&](int i) {
    Jet acc(0.0);
    for (int j = 0; j < n; ++j) acc += ginv(i, j) * v(j);
    return acc;
  });
}

}  // namespace detail

/// Coefficients at working order (wx, wy).  The covariant part is filled when
/// `base` carries the connection level.
inline CoefficientSet coefficients(const ChangeSpec& spec, const FundamentalBundle& base, int wx, int wy,
                                   const ChangeGuards& guards = {}) {
  using detail::trunc;
  const int n = base.n;
  if (static_cast<int>(spec.b.size()) != n) throw ConfigError("change.b", "needs one component per dimension");
  CoefficientSet c;
  c.n = n;
  c.wx = wx;
  c.wy = wy;
  c.family = spec.family;
  c.conformal = spec.is_conformal();
  const double guard = base.policy.div_guard;
  const auto T = [&](const JT& t) { return truncate(t, wx, wy); };

  c.x = base.x;
  c.y = base.y;
  for (auto& v : c.y) v = trunc(v, wx, wy);
  c.L = trunc(base.L, wx, wy);
  c.g = T(base.g);
  c.ginv = T(base.ginv);
  c.h = T(base.h);
  c.l_lo = T(base.l_lo);
  c.l_up = T(base.l_up);
  c.C_lo = T(base.C_lo);
  c.C = T(base.C);
  c.y_lo = T(base.y_lo);
  c.y_up = JT::generate(n, 1, 0, [&](int i) { return c.y[static_cast<std::size_t>(i)]; });

  // Fields in x: evaluated at the full x-order so their x-derivatives keep order wx.
  std::vector<Jet> bfull(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) bfull[static_cast<std::size_t>(i)] = spec.b[static_cast<std::size_t>(i)](base.x);
  const Jet sigma_full = spec.sigma(base.x);
  c.sigma = trunc(sigma_full, wx, wy);
  c.es = trunc(exp(sigma_full), wx, wy);
  c.ems = trunc(exp(-sigma_full), wx, wy);
  c.b_lo = JT::generate(n, 0, 1, [&](int i) { return trunc(bfull[static_cast<std::size_t>(i)], wx, wy); });
  c.sigma_lo = JT::generate(n, 0, 1, [&](int i) { return trunc(sigma_full.dx(i), wx, wy); });

  c.beta = detail::dot(c.b_lo, c.y_up);
  c.Lt = c.es * c.L;
  const double Lv = c.L.value(), bv = c.beta.value(), ltv = c.Lt.value();

  if (!c.conformal) {
    if (std::abs(bv) < guards.beta_rel * Lv) throw DegenerateChange("|beta| below guard");
  }
  if (c.family == FFamily::MATSUMOTO && !(ltv - bv > guards.matsumoto_rel * ltv)) {
    throw DegenerateChange("Matsumoto: Lt - beta below 0.3 Lt");
  }
  try {
    c.fv = f_eval(c.family, spec.k, c.Lt, c.beta, guard);
  } catch (const DomainGuard& e) {
    throw DegenerateChange(e.what());
  }
  if (!(c.fv.f.value() > guard)) throw DegenerateChange("f <= 0");

  const auto& fv = c.fv;
  const Jet invL = recip(c.L, guard);
  const Jet invL2 = invL * invL;
  const Jet invf = recip(fv.f, guard);
  c.q = fv.f * fv.f2;
  c.p = fv.f * fv.f1 * invL;
  c.q0 = fv.f * fv.f22;
  c.p0 = fv.f2 * fv.f2 + c.q0;
  c.qm1 = fv.f * fv.f12 * invL;
  c.pm1 = c.qm1 + c.p * fv.f2 * invf;
  c.qm2 = fv.f * (c.es * fv.f11 - fv.f1 * invL) * invL2;
  c.pm2 = c.qm2 + c.es * c.p * c.p * invf * invf;
  c.p02 = 3.0 * fv.f2 * fv.f22 + fv.f * fv.f222;

  c.b_up = detail::raise_vec(c.ginv, c.b_lo);
  c.b2 = detail::dot(c.b_lo, c.b_up);
  const Jet bL2 = c.beta * invL2;
  c.m_lo = JT::generate(n, 0, 1, [&](int i) { return c.b_lo(i) - bL2 * c.y_lo(i); });
  c.m_up = JT::generate(n, 1, 0, [&](int i) { return c.b_up(i) - bL2 * c.y_up(i); });
  c.m2 = detail::dot(c.m_lo, c.m_up);
  if (!c.conformal && c.m2.value() < guards.m2_min) throw DegenerateChange("m^2 below guard");

  const Jet L2 = c.L * c.L;
  c.eps = fv.f * fv.f * (c.es * c.p + c.m2 * c.q0) * invL2;
  if (std::abs(c.eps.value()) < guards.eps_min) throw DegenerateChange("epsilon below guard");
  const Jet inv_pepsL2 = recip(c.p * c.eps * L2, guard);
  const Jet f2sq = fv.f * fv.f;
  c.s0 = c.ems * f2sq * c.q0 * inv_pepsL2;
  c.sm1 = c.pm1 * f2sq * inv_pepsL2;
  if (c.conformal) {
    c.sm2 = Jet(0.0);  // the b -> 0 limit of the general expression
  } else {
    c.sm2 = c.pm1 * (c.es * c.m2 * c.p * L2 - c.b2 * f2sq) * inv_pepsL2 * recip(c.beta, guard);
  }

  c.sigma_up = detail::raise_vec(c.ginv, c.sigma_lo);
  c.sigma0 = detail::dot(c.sigma_lo, c.y_up);
  c.sigma_beta = detail::dot(c.sigma_lo, c.b_up);

  // Algebraic tensors.
  const Jet espm1 = c.es * c.pm1;
  c.Q = JT::generate(n, 0, 1, [&](int i) { return espm1 * c.y_lo(i) + c.p0 * c.b_lo(i); });
  c.Bt = JT::generate(n, 0, 2, [&](int i, int j) {
    return 0.5 * (espm1 * c.h(i, j) + c.p02 * c.m_lo(i) * c.m_lo(j));
  });
  c.A1 = c.es * (2.0 * c.p - c.beta * c.pm1);
  c.A2 = -1.0 * c.beta * c.p02;
  c.A3 = espm1 + c.beta * c.beta * invL2 * c.p02;
  c.A4 = c.es * c.pm2 - c.beta * c.beta * c.beta * invL2 * invL2 * c.p02;
  c.K = JT::generate(n, 0, 2, [&](int i, int j) {
    return c.A1 * c.g(i, j) + c.A2 * c.b_lo(i) * c.b_lo(j) +
           c.A3 * (c.b_lo(i) * c.y_lo(j) + c.b_lo(j) * c.y_lo(i)) + c.A4 * c.y_lo(i) * c.y_lo(j);
  });
  const Jet half_espm1 = 0.5 * espm1, half_p02 = 0.5 * c.p02;
  c.V = JT::generate(n, 0, 3, [&](int i, int j, int k) {
    return half_espm1 * (c.h(i, j) * c.m_lo(k) + c.h(j, k) * c.m_lo(i) + c.h(k, i) * c.m_lo(j)) +
           half_p02 * c.m_lo(i) * c.m_lo(j) * c.m_lo(k);
  });

  // M^l_ij
  const Jet inv2p = recip(2.0 * c.p, guard);
  const JT sb = JT::generate(n, 1, 0, [&](int l) { return c.s0 * c.b_up(l) + c.sm1 * c.y_up(l); });
  const JT lead = JT::generate(n, 1, 0, [&](int l) {
    return inv2p * (c.ems * c.m_up(l) - c.p * c.m2 * sb(l));
  });
  const JT Cb = JT::generate(n, 0, 2, [&](int i, int j) {
    Jet acc(0.0);
    for (int s = 0; s < n; ++s) acc += c.C_lo(i, s, j) * c.b_up(s);
    return acc;
  });
  const JT hmix = JT::generate(n, 1, 1, [&](int l, int i) {
    return Jet(l == i ? 1.0 : 0.0) - c.l_up(l) * c.l_lo(i);
  });
  const Jet pm1_2p = c.pm1 * inv2p;
  c.M = JT::generate(n, 1, 2, [&](int l, int i, int j) {
    return lead(l) * 2.0 * c.Bt(i, j) - c.es * sb(l) * (c.p * Cb(i, j) + c.pm1 * c.m_lo(i) * c.m_lo(j)) +
           pm1_2p * (hmix(l, i) * c.m_lo(j) + hmix(l, j) * c.m_lo(i));
  });

  if (!base.has_connection) return c;

  c.has_covariant = true;
  c.N = T(base.N);
  c.Gamma = T(base.Gamma);
  c.db = JT::generate(n, 0, 2, [&](int i, int j) { return trunc(bfull[static_cast<std::size_t>(i)].dx(j), wx, wy); });
  c.bcov = JT::generate(n, 0, 2, [&](int i, int j) {
    Jet acc = c.db(i, j);
    for (int r = 0; r < n; ++r) acc -= c.b_lo(r) * c.Gamma(r, i, j);
    return acc;
  });
  c.E = JT::generate(n, 0, 2, [&](int i, int j) { return 0.5 * (c.bcov(i, j) + c.bcov(j, i)); });
  c.F = JT::generate(n, 0, 2, [&](int i, int j) { return 0.5 * (c.bcov(i, j) - c.bcov(j, i)); });
  c.b0cov = transvect(c.bcov, 0, c.y);
  c.F0_lo = transvect(c.F, 1, c.y);
  c.F0_up = detail::raise_vec(c.ginv, c.F0_lo);
  c.E0 = transvect(c.E, 0, c.y);
  c.E00 = detail::dot(c.E0, c.y_up);
  c.F_beta0 = detail::dot(c.F0_lo, c.b_up);
  return c;
}

// ---------------------------------------------------------------------------
// Barred metric objects

struct BarredMetric {
  JT l_lo, h, g;
};

inline BarredMetric barred_metric(const CoefficientSet& c) {
  const int n = c.n;
  BarredMetric m;
  const Jet esf1 = c.es * c.fv.f1, esp = c.es * c.p, espm1 = c.es * c.pm1, espm2 = c.es * c.pm2;
  m.l_lo = JT::generate(n, 0, 1, [&](int i) { return esf1 * c.l_lo(i) + c.fv.f2 * c.b_lo(i); });
  m.h = JT::generate(n, 0, 2, [&](int i, int j) { return esp * c.h(i, j) + c.q0 * c.m_lo(i) * c.m_lo(j); });
  m.g = JT::generate(n, 0, 2, [&](int i, int j) {
    return esp * c.g(i, j) + c.p0 * c.b_lo(i) * c.b_lo(j) +
           espm1 * (c.b_lo(i) * c.y_lo(j) + c.b_lo(j) * c.y_lo(i)) + espm2 * c.y_lo(i) * c.y_lo(j);
  });
  return m;
}

inline JT barred_inverse(const CoefficientSet& c) {
  const Jet a = c.ems * recip(c.p);
  return JT::generate(c.n, 2, 0, [&](int i, int j) {
    return a * c.ginv(i, j) - c.s0 * c.b_up(i) * c.b_up(j) -
           c.sm1 * (c.y_up(i) * c.b_up(j) + c.y_up(j) * c.b_up(i)) - c.sm2 * c.y_up(i) * c.y_up(j);
  });
}

struct BarredCartan {
  JT C_lo, M, C;
};

inline BarredCartan barred_cartan(const CoefficientSet& c) {
  const Jet esp = c.es * c.p;
  BarredCartan r;
  r.C_lo = JT::generate(c.n, 0, 3, [&](int i, int j, int k) { return esp * c.C_lo(i, j, k) + c.V(i, j, k); });
  r.M = c.M;
  r.C = c.C + c.M;
  return r;
}

// ---------------------------------------------------------------------------
// Difference tensors

inline JT difference_spray(const CoefficientSet& c) {
  if (!c.has_covariant) throw JetOrderError("difference_spray needs the connection-level bundle");
  const int n = c.n;
  const Jet L2 = c.L * c.L;
  const Jet esp = c.es * c.p;
  const Jet inv2p = recip(2.0 * c.p);
  const Jet ycoef = 2.0 * c.p - c.beta * c.pm1 - esp * c.p * L2 * c.sm2 -
                    c.p * c.sm1 * (2.0 * esp * c.beta + c.es * c.pm1 * L2 * c.m2);
  const Jet bcoef = -2.0 * esp * c.p * c.beta * c.s0;
  const Jet fcoef = c.q * recip(c.p) * c.ems;
  const Jet tail = 0.5 * (esp * c.E00 - 2.0 * c.q * c.F_beta0 + esp * L2 * c.sigma_beta);
  return JT::generate(n, 1, 0, [&](int i) {
    return c.sigma0 * inv2p * (ycoef * c.y_up(i) + bcoef * c.b_up(i)) + fcoef * c.F0_up(i) -
           0.5 * L2 * c.sigma_up(i) + tail * (c.s0 * c.b_up(i) + c.sm1 * c.y_up(i));
  });
}

/// A_ij of the nonlinear-connection difference, given D^i.
inline JT difference_A(const CoefficientSet& c, const JT& D) {
  const int n = c.n;
  const Jet esp = c.es * c.p, espm1 = c.es * c.pm1;
  const Jet L2 = c.L * c.L;
  const JT WD = JT::generate(n, 0, 2, [&](int i, int j) {
    Jet acc(0.0);
    for (int s = 0; s < n; ++s) acc += (esp * c.C_lo(s, i, j) + c.V(s, i, j)) * D(s);
    return acc;
  });
  const Jet hs0 = 0.5 * c.sigma0;
  return JT::generate(n, 0, 2, [&](int i, int j) {
    Jet a = c.E00 * c.Bt(i, j) + c.F0_lo(i) * c.Q(j) + c.q * c.F(i, j) + c.E0(j) * c.Q(i) - 2.0 * WD(i, j);
    a += hs0 * (2.0 * esp * c.g(i, j) + 2.0 * espm1 * c.m_lo(j) * c.y_lo(i) - 2.0 * c.beta * c.Bt(i, j) +
                espm1 * (c.b_lo(i) * c.y_lo(j) - c.b_lo(j) * c.y_lo(i)));
    a -= 0.5 * c.sigma_lo(i) * (espm1 * L2 * c.m_lo(j) + 2.0 * esp * c.y_lo(j));
    a += 0.5 * c.sigma_lo(j) * (2.0 * esp * c.y_lo(i) + espm1 * L2 * c.m_lo(i));
    return a;
  });
}

inline JT difference_nonlinear(const CoefficientSet& c, const JT& A) {
  const int n = c.n;
  const Jet a = c.ems * recip(c.p);
  const Jet L2 = c.L * c.L;
  const Jet esp = c.es * c.p;
  const JT Ab = JT::generate(n, 0, 1, [&](int j) {
    Jet acc(0.0);
    for (int r = 0; r < n; ++r) acc += A(r, j) * c.b_up(r);
    return acc;
  });
  return JT::generate(n, 1, 1, [&](int i, int j) {
    Jet acc(0.0);
    for (int l = 0; l < n; ++l) acc += c.ginv(i, l) * A(l, j);
    return a * acc - (c.s0 * c.b_up(i) + c.sm1 * c.y_up(i)) * Ab(j) -
           (c.q * c.b0cov(j) + esp * L2 * c.sigma_lo(j)) * (c.sm1 * c.b_up(i) + c.sm2 * c.y_up(i));
  });
}

/// B^i_jk = dot-d_k D^i_j, by differentiating the D^i_j jets.
inline JT difference_berwald(const JT& Dj) { return partial_y(Dj); }

inline JT difference_cartan(const CoefficientSet& c, const JT& Dj) {
  const int n = c.n;
  const Jet esp2 = 2.0 * c.es * c.p;
  const JT gbar_inv = barred_inverse(c);
  // X(j,k,r) = 2 e^s p C_jkm D^m_r + 2 V_jkm D^m_r - K_jk s_r - 2 B_jk b_{0|r}
  const JT X = JT::generate(n, 0, 3, [&](int j, int k, int r) {
    Jet acc = -1.0 * c.K(j, k) * c.sigma_lo(r) - 2.0 * c.Bt(j, k) * c.b0cov(r);
    for (int m = 0; m < n; ++m) acc += (esp2 * c.C_lo(j, k, m) + 2.0 * c.V(j, k, m)) * Dj(m, r);
    return acc;
  });
  const JT Y = JT::generate(n, 0, 3, [&](int j, int k, int r) {
    return c.F(r, k) * c.Q(j) + c.F(r, j) * c.Q(k) + c.E(j, k) * c.Q(r) +
           0.5 * cyclic_theta([&](int a, int b, int d) -> const Jet& { return X(a, b, d); }, j, k, r);
  });
  return JT::generate(n, 1, 2, [&](int i, int j, int k) {
    Jet acc(0.0);
    for (int r = 0; r < n; ++r) acc += gbar_inv(i, r) * Y(j, k, r);
    return acc;
  });
}

inline DifferenceSet differences(const CoefficientSet& c) {
  DifferenceSet d;
  d.D = difference_spray(c);
  d.A = difference_A(c, d.D);
  d.Dj = difference_nonlinear(c, d.A);
  d.B = difference_berwald(d.Dj);
  d.Djk = difference_cartan(c, d.Dj);
  return d;
}

/// The barred Christoffel symbols through the gamma-bar transformation law;
/// used only as an independent cross-check of the D^i_jk route.
inline JT barred_christoffel(const CoefficientSet& c, const JT& gamma) {
  const int n = c.n;
  const JT gbar_inv = barred_inverse(c);
  const Jet esp = c.es * c.p;
  const JT VN = JT::generate(n, 0, 3, [&](int j, int k, int r) {
    Jet acc(0.0);
    for (int t = 0; t < n; ++t) acc += c.V(j, k, t) * c.N(t, r);
    return acc;
  });
  const JT CN = JT::generate(n, 0, 3, [&](int j, int k, int m) {
    Jet acc(0.0);
    for (int r = 0; r < n; ++r) acc += c.C_lo(j, k, r) * c.N(r, m);
    return acc;
  });
  const JT Z = JT::generate(n, 0, 3, [&](int j, int k, int r) {
    return c.Bt(j, k) * c.b0cov(r) + VN(j, k, r) + 0.5 * c.K(j, k) * c.sigma_lo(r);
  });
  const JT Y = JT::generate(n, 0, 3, [&](int j, int k, int r) {
    return c.F(r, k) * c.Q(j) + c.F(r, j) * c.Q(k) + c.E(j, k) * c.Q(r) -
           cyclic_theta([&](int a, int b, int d) -> const Jet& { return Z(a, b, d); }, j, k, r);
  });
  return JT::generate(n, 1, 2, [&](int i, int j, int k) {
    Jet acc = gamma(i, j, k);
    for (int r = 0; r < n; ++r) {
      acc += gbar_inv(i, r) * Y(j, k, r);
      acc += (c.ginv(i, r) - esp * gbar_inv(i, r)) *
             cyclic_theta([&](int a, int b, int d) -> const Jet& { return CN(a, b, d); }, j, k, r);
    }
    return acc;
  });
}

// ---------------------------------------------------------------------------
// Gradients of the ladder scalars: closed forms in terms of the unbarred data.

struct LadderGradients {
  // Rows: q, p, p0, p-1, p-2.  dy(s, i) = dot-d_i s, dx(s, k) = d_k s.
  static constexpr int kCount = 5;
  static constexpr const char* kNames[kCount] = {"q", "p", "p0", "p-1", "p-2"};
  std::vector<std::vector<Jet::real>> dy, dx;
};

inline const Jet& ladder_scalar(const CoefficientSet& c, int s) {
  switch (s) {
    case 0: return c.q;
    case 1: return c.p;
    case 2: return c.p0;
    case 3: return c.pm1;
    default: return c.pm2;
  }
}

/// Closed forms of dot-d_i s and d_k s at the sample (values only).
inline LadderGradients gradients_closed_form(const CoefficientSet& c) {
  if (!c.has_covariant) throw JetOrderError("gradients need the connection-level bundle");
  const int n = c.n;
  const auto v = [](const Jet& j) { return j.real_value(); };
  const auto L = v(c.L), beta = v(c.beta), ems = v(c.ems);
  const auto q = v(c.q), p = v(c.p), p0 = v(c.p0), pm1 = v(c.pm1), p02 = v(c.p02);
  const auto es = v(c.es);
  const auto L2 = L * L, L3 = L2 * L, L4 = L2 * L2;
  LadderGradients g;
  g.dy.assign(LadderGradients::kCount, std::vector<Jet::real>(static_cast<std::size_t>(n)));
  g.dx = g.dy;
  for (int i = 0; i < n; ++i) {
    const auto m = v(c.m_lo(i)), l = v(c.l_lo(i));
    const auto ui = static_cast<std::size_t>(i);
    g.dy[0][ui] = p0 * m + q / L * l;
    g.dy[1][ui] = pm1 * m;
    g.dy[2][ui] = p02 * m;
    g.dy[3][ui] = -ems * (beta / (L * L)) * p02 * m - (pm1 / L) * l;
    g.dy[4][ui] = (ems * beta * beta / L4 * p02 - pm1 / L2) * m + pm1 * (2.0L * beta / L3) * l;
  }
  for (int k = 0; k < n; ++k) {
    Jet::real Nm = 0.0L, Nl = 0.0L;
    for (int r = 0; r < n; ++r) {
      Nm += v(c.N(r, k)) * v(c.m_lo(r));
      Nl += v(c.N(r, k)) * v(c.l_lo(r));
    }
    const auto b0k = v(c.b0cov(k)), sk = v(c.sigma_lo(k));
    const auto uk = static_cast<std::size_t>(k);
    g.dx[0][uk] = p0 * Nm + q * Nl / L + p0 * b0k + es * L * L * pm1 * sk;
    g.dx[1][uk] = pm1 * Nm + pm1 * b0k + (p - beta * pm1) * sk;
    g.dx[2][uk] = p02 * (Nm + b0k - beta * sk);
    g.dx[3][uk] = -(pm1 / L) * Nl - ems * (beta / (L * L)) * (p02 * Nm + p02 * b0k) +
                  ems * (beta * beta / (L * L)) * p02 * sk;
    const auto coef = ems * beta * beta / L4 * p02 - pm1 / L2;
    g.dx[4][uk] = coef * Nm + (2.0L * beta * pm1 / L3) * Nl + coef * b0k - ems * (beta * beta * beta / L4) * p02 * sk;
  }
  return g;
}

/// The same gradients by differentiating the scalar jets directly.
inline LadderGradients gradients_by_jets(const CoefficientSet& c) {
  const int n = c.n;
  LadderGradients g;
  g.dy.assign(LadderGradients::kCount, std::vector<Jet::real>(static_cast<std::size_t>(n)));
  g.dx = g.dy;
  for (int s = 0; s < LadderGradients::kCount; ++s) {
    const Jet& v = ladder_scalar(c, s);
    for (int i = 0; i < n; ++i) {
      g.dy[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = v.dy(i).real_value();
      g.dx[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = v.dx(i).real_value();
    }
  }
  return g;
}

}  // namespace bconf
