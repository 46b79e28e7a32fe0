#pragma once

// Barred torsion and curvature tensors of the four connections, assembled
// from the unbarred ones and the difference tensors D^i_j, B^i_jk, D^i_jk, M^i_jk.
//
// Index layouts follow CurvatureSet: R2(i,j,k) = R^i_jk, R4(i,h,j,k) = R^i_hjk.

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "bconf/beta_conformal.hpp"
#include "bconf/finsler.hpp"
#include "bconf/tensor.hpp"

namespace bconf {

/// Which reading of a display to assemble.  PRINTED takes every term as
/// printed; RESOLVED replaces the terms that disagree with the oracle.
enum class DisplayReading { PRINTED, RESOLVED };

/// One term of a display that RESOLVED replaces, for reporting.
struct DisplayAmendment {
  ConnectionKind connection;
  std::string tensor;
  std::string printed;
  std::string resolved;
};

inline const std::vector<DisplayAmendment>& display_amendments() {
  using CK = ConnectionKind;
  static const std::vector<DisplayAmendment> list = {
      {CK::CARTAN, "P4", "-2 S^i_thk D^t_j", "-2 S^i_htk D^t_j"},
      {CK::CARTAN, "P4", "A^i_jt M^t_hk", "A^i_tj M^t_hk"},
      {CK::CARTAN, "P4", "M^i_tkh D^t_j", "M^i_hkt D^t_j"},
      {CK::CARTAN, "P4", "C^i_rh M^r_kt D^t_j", "C^i_rt M^r_hk D^t_j"},
      {CK::CARTAN, "P4", "-M^i_hr C^r_tk D^t_j", "-M^i_rk C^r_ht D^t_j"},
      {CK::HASHIGUCHI, "R4", "D^i_tj D^t_hk", "B^i_tj B^t_hk"},
      {CK::HASHIGUCHI, "P4", "-2 S^i_thk D^t_j", "-2 S^i_htk D^t_j"},
      {CK::HASHIGUCHI, "P4", "C^i_tk D^t_hj - C^t_hk D^i_tj", "C^i_tk B^t_hj - C^t_hk B^i_tj"},
      {CK::HASHIGUCHI, "P4", "H^i_jt M^t_hk", "H^i_tj M^t_hk"},
      {CK::HASHIGUCHI, "P4", "M^i_kth D^t_j", "M^i_hkt D^t_j"},
      {CK::HASHIGUCHI, "P4", "C^i_rh M^r_kt D^t_j", "C^i_rt M^r_hk D^t_j"},
      {CK::HASHIGUCHI, "P4", "-M^i_hr C^r_tk D^t_j", "-M^i_rk C^r_ht D^t_j"},
      {CK::BERWALD, "R4", "B^i_{hj|k} - B^i_hjt D^t_k", "-B^i_{hj|k} + B^i_hjt D^t_k"},
      {CK::BERWALD, "R4", "D^i_tj D^t_hk", "B^i_tj B^t_hk"},
  };
  return list;
}

namespace detail {

/// A{X} over the last two slots.
inline JT alt_last(const JT& t) { return t - swap_slots(t, t.rank() - 2, t.rank() - 1); }

/// Sum_t X(.., t) Dj(t, k) appended as a new last slot k; X's last slot is dropped.
inline JT times_D(const JT& X, const JT& Dj) {
  const int n = X.dim(), r = X.rank();
  return JT::generate(n, X.upper(), X.lower(), [&](std::span<const int> idx) {
    std::array<int, kMaxTensorRank> src{};
    std::copy(idx.begin(), idx.end(), src.begin());
    const int k = idx[static_cast<std::size_t>(r - 1)];
    Jet acc(0.0);
    for (int t = 0; t < n; ++t) {
      src[static_cast<std::size_t>(r - 1)] = t;
      acc += X.at(std::span<const int>(src.data(), static_cast<std::size_t>(r))) * Dj(t, k);
    }
    return acc;
  });
}

}  // namespace detail

inline CurvatureSet barred_torsions_curvatures(const CoefficientSet& c, const DifferenceSet& d,
                                               const FundamentalBundle& base, ConnectionKind kind,
                                               DisplayReading reading = DisplayReading::RESOLVED) {
  using detail::alt_last;
  using detail::times_D;
  const int n = c.n;
  const auto conn = connection(base, kind);
  const CurvatureSet u = curvatures_of(conn.F, conn.N, conn.C);
  const JT& Dj = d.Dj;
  const JT& B = d.B;
  const JT& Djk = d.Djk;
  const JT& M = c.M;
  const JT& C = c.C;
  const JT F = truncate(conn.F, c.wx, c.wy);
  const JT& N = c.N;
  const bool resolved = reading == DisplayReading::RESOLVED;

  CurvatureSet r;
  r.T = u.T;
  const bool hasC = kind == ConnectionKind::CARTAN || kind == ConnectionKind::HASHIGUCHI;
  r.Ctors = hasC ? C + M : u.Ctors;
  r.S2 = hasC ? (u.S2 + M - swap_slots(M, 1, 2)) : u.S2;

  // D^i_{j|k} with the h-covariant derivative of this connection.
  const JT Dcov = covariant_h(Dj, F, N);
  const JT BD = times_D(B, Dj);  // B^i_jr D^r_k

  // X^i_tj X^t_hk
  const auto square = [&](const JT& X) {
    return JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc(0.0);
      for (int t = 0; t < n; ++t) acc += X(i, t, j) * X(t, h, k);
      return acc;
    });
  };
  const JT DD = square(Djk);
  // 2 S^i_hrt D^r_j D^t_k
  const auto SDD = [&](const JT& S) {
    return JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc(0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += S(i, h, a, b) * Dj(a, j) * Dj(b, k);
      return 2.0 * acc;
    });
  };
  // M^i_ht R^t_jk
  const auto MR = [&](const JT& R2) {
    return JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc(0.0);
      for (int t = 0; t < n; ++t) acc += M(i, h, t) * R2(t, j, k);
      return acc;
    });
  };
  // M^i_th X^t_jk
  const auto M_th = [&](const JT& X) {
    return JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc(0.0);
      for (int t = 0; t < n; ++t) acc += M(i, t, h) * X(t, j, k);
      return acc;
    });
  };
  // M^i_ht B^t_jr D^r_k
  const JT MBD = JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
    Jet acc(0.0);
    for (int t = 0; t < n; ++t) acc += M(i, h, t) * BD(t, j, k);
    return acc;
  });
  // The P-curvature tail shared by Cartan and Hashiguchi:
  // -2 S^i_thk D^t_j + C^i_tk X^t_hj - C^t_hk X^i_tj + M^i_th B^t_jk + M^i_tkh D^t_j
  // + C^i_rh M^r_kt D^t_j - M^i_hr C^r_tk D^t_j, with X the F-difference.
  const auto p_tail = [&](const JT& S, const JT& My, const JT& X) {
    return JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc(0.0);
      for (int t = 0; t < n; ++t) {
        const Jet& Dtj = Dj(t, j);
        acc += C(i, t, k) * X(t, h, j) - C(t, h, k) * X(i, t, j) + M(i, t, h) * B(t, j, k);
        if (resolved) {
          acc += -2.0 * S(i, h, t, k) * Dtj + My(i, h, k, t) * Dtj;
          for (int r = 0; r < n; ++r) acc += (C(i, r, t) * M(r, h, k) - M(i, r, k) * C(r, h, t)) * Dtj;
        } else {
          acc += -2.0 * S(i, t, h, k) * Dtj + My(i, t, k, h) * Dtj;
          for (int r = 0; r < n; ++r) acc += (C(i, r, h) * M(r, k, t) - M(i, h, r) * C(r, t, k)) * Dtj;
        }
      }
      return acc;
    });
  };
  // Y^i_jt M^t_hk - M^i_tk Y^t_hj (printed); Y^i_tj M^t_hk - M^i_tk Y^t_hj (resolved)
  const auto YM = [&](const JT& Y) {
    return JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc(0.0);
      for (int t = 0; t < n; ++t) acc += (resolved ? Y(i, t, j) : Y(i, j, t)) * M(t, h, k) - M(i, t, k) * Y(t, h, j);
      return acc;
    });
  };
  const auto S_bar = [&](const JT& S) {
    return S + alt_last(JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
             Jet acc(0.0);
             for (int t = 0; t < n; ++t) {
               acc += C(t, h, k) * M(i, t, j) - C(i, t, k) * M(t, h, j) - M(i, t, k) * M(t, h, j);
             }
             return acc;
           }));
  };

  switch (kind) {
    case ConnectionKind::CARTAN:
    case ConnectionKind::CHERN: {
      r.R2 = u.R2 + alt_last(Dcov - times_D(B + u.P2, Dj));
      r.P2 = u.P2 - Djk + B;
      if (kind == ConnectionKind::CHERN) {
        const JT Dhj_cov = covariant_h(Djk, F, N);
        const JT Dy = partial_y(Djk);
        r.R4 = u.R4 + alt_last(Dhj_cov - times_D(Dy, Dj) - DD - times_D(u.P4, Dj));
        r.P4 = u.P4 + Dy;
        r.S4 = u.S4;
        break;
      }
      const JT A = JT::generate(n, 1, 2, [&](int i, int h, int j) {
        Jet acc = -Djk(i, h, j);
        for (int t = 0; t < n; ++t) acc -= C(i, h, t) * Dj(t, j);
        return acc;
      });
      const JT Acov = covariant_h(A, F, N);
      const JT Ay = partial_y(A);
      const JT Mcov = covariant_h(M, F, N);  // Mcov(i,h,k,j) = M^i_{hk|j}
      const JT My = partial_y(M);
      const JT MPD = JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
        Jet acc(0.0);
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t) acc += M(i, s, h) * u.P2(s, j, t) * Dj(t, k);
        return acc;
      });
      const JT X = Acov - times_D(Ay, Dj) + DD + times_D(u.P4, Dj) + MPD - M_th(Dcov) + MBD;
      r.R4 = u.R4 + SDD(u.S4) + MR(u.R2) - alt_last(X);
      r.P4 = u.P4 - Ay + M_th(u.P2) + YM(A) - swap_slots(Mcov, 2, 3) + p_tail(u.S4, My, Djk);
      r.S4 = S_bar(u.S4);
      break;
    }
    case ConnectionKind::HASHIGUCHI: {
      r.R2 = u.R2 + alt_last(Dcov - BD);
      r.P2 = u.P2;
      const JT H = JT::generate(n, 1, 2, [&](int i, int h, int j) {
        Jet acc = -B(i, h, j);
        for (int t = 0; t < n; ++t) acc -= C(i, h, t) * Dj(t, j);
        return acc;
      });
      const JT Hcov = covariant_h(H, F, N);
      const JT Hy = partial_y(H);
      const JT Mcov = covariant_h(M, F, N);
      const JT My = partial_y(M);
      const JT X = Hcov - times_D(Hy, Dj) + (resolved ? square(B) : DD) + times_D(u.P4, Dj) - M_th(Dcov) + MBD;
      r.R4 = u.R4 + SDD(u.S4) + MR(u.R2) - alt_last(X);
      r.P4 = u.P4 - Hy + YM(H) - swap_slots(Mcov, 2, 3) + p_tail(u.S4, My, resolved ? B : Djk);
      r.S4 = S_bar(u.S4);
      break;
    }
    case ConnectionKind::BERWALD: {
      r.R2 = u.R2 + alt_last(Dcov - BD);
      r.P2 = u.P2;
      const JT Bcov = covariant_h(B, F, N);
      const JT By = partial_y(B);
      if (resolved) {
        r.R4 = u.R4 - alt_last(-Bcov + times_D(By, Dj) + square(B) + times_D(u.P4, Dj));
      } else {
        r.R4 = u.R4 - alt_last(Bcov - times_D(By, Dj) + DD + times_D(u.P4, Dj));
      }
      r.P4 = u.P4 + By;
      r.S4 = u.S4;
      break;
    }
  }
  return r;
}

}  // namespace bconf
