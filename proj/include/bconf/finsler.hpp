#pragma once

// Finsler geometry by direct jet differentiation of L(x, y).
//
// Slot layouts (upper slots first, then lower, left to right as written):
//   g(i,j) = g_ij, ginv(i,j) = g^ij, C_lo(i,j,k) = C_ijk, C(i,j,k) = C^i_jk,
//   gamma(i,j,k) = gamma^i_jk, N(i,j) = N^i_j, Gb(i,j,k) = G^i_jk,
//   Gamma(i,j,k) = Gamma^i_jk, R4(i,h,j,k) = R^i_hjk.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bconf/errors.hpp"
#include "bconf/jet.hpp"
#include "bconf/metric.hpp"
#include "bconf/tensor.hpp"

namespace bconf {

using JT = Tensor<Jet>;

enum class ConnectionKind { CARTAN, CHERN, HASHIGUCHI, BERWALD };

inline constexpr std::string_view to_string(ConnectionKind c) {
  switch (c) {
    case ConnectionKind::CARTAN: return "Cartan";
    case ConnectionKind::CHERN: return "Chern";
    case ConnectionKind::HASHIGUCHI: return "Hashiguchi";
    case ConnectionKind::BERWALD: return "Berwald";
  }
  return "?";
}

inline constexpr ConnectionKind kAllConnections[] = {ConnectionKind::CARTAN, ConnectionKind::CHERN,
                                                     ConnectionKind::HASHIGUCHI, ConnectionKind::BERWALD};

/// How far fundamentals() goes.  CONNECTION needs x-order >= 1 and y-order >= 4.
enum class BundleLevel { METRIC, CONNECTION };

struct FundamentalBundle {
  int n = 0;
  JetPolicy policy;
  std::vector<Jet> x, y;
  Jet L, E;
  JT y_lo;  // y_i = g_ij y^j
  JT l_lo, l_up, g, ginv, h, C_lo, C;
  JT gamma, G, N, Gb, Gamma;
  bool has_connection = false;

  std::vector<double> y_values() const {
    std::vector<double> v;
    for (const auto& j : y) v.push_back(j.value());
    return v;
  }
};

// ---------------------------------------------------------------------------
// Differential operators on jet-valued tensors.  Each appends one lower slot
// (the differentiation index) after the existing lower slots.

inline JT partial_x(const JT& t) {
  return JT::generate(t.dim(), t.upper(), t.lower() + 1, [&](std::span<const int> idx) {
    return t.at(idx.first(idx.size() - 1)).dx(idx.back());
  });
}

inline JT partial_y(const JT& t) {
  return JT::generate(t.dim(), t.upper(), t.lower() + 1, [&](std::span<const int> idx) {
    return t.at(idx.first(idx.size() - 1)).dy(idx.back());
  });
}

/// delta_k X = d_k X - N^r_k dot-d_r X.
inline JT delta(const JT& t, const JT& N) {
  const int n = t.dim();
  JT out(n, t.upper(), t.lower() + 1);
  std::vector<Jet> dys(static_cast<std::size_t>(n));
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const Jet& c = t.data()[flat];
    for (int r = 0; r < n; ++r) dys[static_cast<std::size_t>(r)] = c.dy(r);
    for (int k = 0; k < n; ++k) {
      Jet acc = c.dx(k);
      for (int r = 0; r < n; ++r) acc -= N(r, k) * dys[static_cast<std::size_t>(r)];
      out.data()[flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] = std::move(acc);
    }
  }
  return out;
}

namespace detail {

// Adds the connection terms  + X^{..r..} W^i_rk  (upper)  - X_{..r..} W^r_jk  (lower)
// to `out`, whose last lower slot is k.
inline void add_connection_terms(JT& out, const JT& t, const JT& W) {
  const int n = t.dim(), up = t.upper(), rk = t.rank();
  std::array<int, kMaxTensorRank> src{};
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto idx = out.unflatten(flat);
    const int k = idx.back();
    Jet acc(0.0);
    for (int s = 0; s < rk; ++s) {
      std::copy(idx.begin(), idx.end() - 1, src.begin());
      const int fixed = idx[static_cast<std::size_t>(s)];
      for (int r = 0; r < n; ++r) {
        src[static_cast<std::size_t>(s)] = r;
        const Jet& xv = t.at(std::span<const int>(src.data(), static_cast<std::size_t>(rk)));
        if (s < up) {
          acc += xv * W(fixed, r, k);
        } else {
          acc -= xv * W(r, fixed, k);
        }
      }
    }
    out.data()[flat] += acc;
  }
}

}  // namespace detail

/// Horizontal covariant derivative X_{|k} with horizontal coefficients F and nonlinear connection N.
inline JT covariant_h(const JT& t, const JT& F, const JT& N) {
  JT out = delta(t, N);
  detail::add_connection_terms(out, t, F);
  return out;
}

/// Vertical covariant derivative X|_k with vertical coefficients C (pass an empty tensor for 0).
inline JT covariant_v(const JT& t, const JT& C) {
  JT out = partial_y(t);
  if (C.size() > 0) detail::add_connection_terms(out, t, C);
  return out;
}

// ---------------------------------------------------------------------------

inline JT truncate(const JT& t, int ox, int oy) {
  return t.map([&](const Jet& j) { return j.truncated(ox, oy); });
}

/// Every Notations-level object of L at `sample`, by jet differentiation.
inline FundamentalBundle fundamentals(const MetricSpec& metric, const ChartSample& sample,
                                      const JetPolicy& policy = {}, BundleLevel level = BundleLevel::CONNECTION) {
  const int n = metric.dim();
  if (sample.dim() != n) throw InadmissibleSample("sample dimension differs from metric dimension");
  FundamentalBundle b;
  b.n = n;
  b.policy = policy;
  const auto seeds = seed(sample, policy);
  b.x.assign(seeds.begin(), seeds.begin() + n);
  b.y.assign(seeds.begin() + n, seeds.end());
  if (policy.max_order_y < 3) throw JetOrderError("fundamentals: y-order must be at least 3");

  try {
    b.L = metric(b.x, b.y, policy.sqrt_guard);
  } catch (const DomainGuard& e) {
    throw InadmissibleSample(std::string("L not evaluable: ") + e.what());
  }
  if (!(b.L.value() > policy.sqrt_guard)) throw InadmissibleSample("L <= 0");
  b.E = 0.5 * b.L * b.L;

  std::vector<Jet> dE(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dE[static_cast<std::size_t>(i)] = b.E.dy(i);
  b.y_lo = JT::generate(n, 0, 1, [&](int i) { return dE[static_cast<std::size_t>(i)]; });
  b.g = JT::generate(n, 0, 2, [&](int i, int j) {
    return i <= j ? dE[static_cast<std::size_t>(i)].dy(j) : dE[static_cast<std::size_t>(j)].dy(i);
  });
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) b.g(i, j) = b.g(j, i);
  try {
    b.ginv = inverse(b.g, policy.div_guard);
  } catch (const InadmissibleSample&) {
    throw InadmissibleSample("singular fundamental tensor");
  }
  const Jet invL = recip(b.L, policy.div_guard);
  b.l_lo = b.y_lo.map([&](const Jet& v) { return v * invL; });
  b.l_up = JT::generate(n, 1, 0, [&](int i) { return b.y[static_cast<std::size_t>(i)] * invL; });
  b.h = JT::generate(n, 0, 2, [&](int i, int j) { return b.g(i, j) - b.l_lo(i) * b.l_lo(j); });

  b.C_lo = JT(n, 0, 3);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const Jet c = 0.5 * b.g(i, j).dy(k);
        b.C_lo(i, j, k) = c;
        b.C_lo(i, k, j) = c;
        b.C_lo(j, i, k) = c;
        b.C_lo(j, k, i) = c;
        b.C_lo(k, i, j) = c;
        b.C_lo(k, j, i) = c;
      }
  b.C = raise(b.C_lo, 0, b.ginv);
  if (level == BundleLevel::METRIC) return b;

  if (policy.max_order_x < 1 || policy.max_order_y < 4) {
    throw JetOrderError("fundamentals: connection level needs orders (1, 4)");
  }
  b.has_connection = true;

  // gamma^i_jk = 1/2 g^ir (d_j g_kr + d_k g_jr - d_r g_jk)
  const JT dg = partial_x(b.g);  // dg(k, r, j) = d_j g_kr
  const JT gamma_lo = JT::generate(n, 0, 3, [&](int r, int j, int k) {
    return 0.5 * (dg(k, r, j) + dg(j, r, k) - dg(j, k, r));
  });
  b.gamma = JT::generate(n, 1, 2, [&](int i, int j, int k) {
    Jet acc(0.0);
    for (int r = 0; r < n; ++r) acc += b.ginv(i, r) * gamma_lo(r, j, k);
    return acc;
  });
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < j; ++k) b.gamma(i, j, k) = b.gamma(i, k, j);

  b.G = JT::generate(n, 1, 0, [&](int i) {
    Jet acc(0.0);
    for (int j = 0; j < n; ++j) {
      Jet row(0.0);
      for (int k = 0; k < n; ++k) row += b.gamma(i, j, k) * b.y[static_cast<std::size_t>(k)];
      acc += row * b.y[static_cast<std::size_t>(j)];
    }
    return 0.5 * acc;
  });
  b.N = partial_y(b.G);
  b.Gb = JT::generate(n, 1, 2, [&](int i, int j, int k) {
    return j <= k ? b.N(i, j).dy(k) : b.N(i, k).dy(j);
  });

  // Gamma^i_jk = gamma^i_jk + g^it (C_jkr N^r_t - C_tkr N^r_j - C_jtr N^r_k)
  const JT CN = JT::generate(n, 0, 3, [&](int j, int k, int t) {
    Jet acc(0.0);
    for (int r = 0; r < n; ++r) acc += b.C_lo(j, k, r) * b.N(r, t);
    return acc;
  });
  const JT X = JT::generate(n, 0, 3, [&](int t, int j, int k) { return CN(j, k, t) - CN(t, k, j) - CN(j, t, k); });
  b.Gamma = JT::generate(n, 1, 2, [&](int i, int j, int k) {
    Jet acc = b.gamma(i, j, k);
    for (int t = 0; t < n; ++t) acc += b.ginv(i, t) * X(t, j, k);
    return acc;
  });
  return b;
}

/// (F, N, C) of one of the four connections; C is empty when it vanishes.
struct ConnectionData {
  ConnectionKind kind;
  JT F, N, C;
};

inline ConnectionData connection(const FundamentalBundle& b, ConnectionKind kind) {
  if (!b.has_connection) throw JetOrderError("connection: bundle computed at metric level only");
  switch (kind) {
    case ConnectionKind::CARTAN: return {kind, b.Gamma, b.N, b.C};
    case ConnectionKind::CHERN: return {kind, b.Gamma, b.N, JT{}};
    case ConnectionKind::HASHIGUCHI: return {kind, b.Gb, b.N, b.C};
    case ConnectionKind::BERWALD: return {kind, b.Gb, b.N, JT{}};
  }
  throw std::invalid_argument("unknown connection");
}

/// Torsions T, C (hv), R, P, S and curvatures R, P, S of a connection.
/// R4(i,h,j,k) = R^i_hjk, P4(i,h,j,k) = P^i_hjk, S4(i,h,j,k) = S^i_hjk.
struct CurvatureSet {
  JT T, Ctors, R2, P2, S2, R4, P4, S4;

  template <class F>
  void for_each(F&& f) const {
    f("T", T);
    f("C", Ctors);
    f("R2", R2);
    f("P2", P2);
    f("S2", S2);
    f("R4", R4);
    f("P4", P4);
    f("S4", S4);
  }
};

inline JT zero_like(int n, int up, int lo) { return JT(n, up, lo); }

/// Curvature objects from arbitrary (F, N, C) using the general formulas.
inline CurvatureSet curvatures_of(const JT& F, const JT& N, const JT& C) {
  const int n = F.dim();
  const bool hasC = C.size() > 0;
  CurvatureSet cs;
  cs.T = F - swap_slots(F, 1, 2);
  cs.Ctors = hasC ? C : zero_like(n, 1, 2);
  const JT dN = delta(N, N);
  cs.R2 = dN - swap_slots(dN, 1, 2);
  const JT dyN = partial_y(N);
  cs.P2 = dyN - F;
  cs.S2 = hasC ? C - swap_slots(C, 1, 2) : zero_like(n, 1, 2);

  const JT dF = delta(F, N);  // dF(i,h,j,k) = delta_k F^i_hj
  const JT X = JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
    Jet acc = dF(i, h, j, k);
    for (int m = 0; m < n; ++m) acc += F(m, h, j) * F(i, m, k);
    return acc;
  });
  cs.R4 = X - swap_slots(X, 2, 3);
  const JT dyF = partial_y(F);  // dyF(i,h,j,k) = dot-d_k F^i_hj
  cs.P4 = dyF;
  if (hasC) {
    const JT Ch = covariant_h(C, F, N);  // Ch(i,h,k,j) = C^i_{hk|j}
    cs.R4 += JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc(0.0);
      for (int m = 0; m < n; ++m) acc += C(i, h, m) * cs.R2(m, j, k);
      return acc;
    });
    cs.P4 += JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc = -Ch(i, h, k, j);
      for (int m = 0; m < n; ++m) acc += C(i, h, m) * cs.P2(m, j, k);
      return acc;
    });
    const JT dyC = partial_y(C);
    const JT Y = JT::generate(n, 1, 3, [&](int i, int h, int j, int k) {
      Jet acc = dyC(i, h, j, k);
      for (int m = 0; m < n; ++m) acc += C(m, h, j) * C(i, m, k);
      return acc;
    });
    cs.S4 = Y - swap_slots(Y, 2, 3);
  } else {
    cs.S4 = zero_like(n, 1, 3);
  }
  return cs;
}

inline CurvatureSet torsions_curvatures(const FundamentalBundle& b, ConnectionKind kind) {
  const auto c = connection(b, kind);
  return curvatures_of(c.F, c.N, c.C);
}

// ---------------------------------------------------------------------------
// Sampling

/// Deterministic per-index sample stream: uniform x in [-0.5, 0.5]^n, y uniform
/// on the unit sphere scaled by a uniform factor in [0.5, 2].
class SampleStream {
 public:
  SampleStream(int n, std::uint64_t seed, std::uint64_t salt = 0) : n_(n), seed_(seed), salt_(salt) {}

  ChartSample draw(int index, int attempt) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(salt_), static_cast<std::uint32_t>(salt_ >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    const auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<double> x(static_cast<std::size_t>(n_)), y(static_cast<std::size_t>(n_));
    for (auto& v : x) v = unit() - 0.5;
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t i = 0; i < y.size(); i += 2) {
        // Box-Muller: portable across standard libraries, unlike std::normal_distribution.
        const double u1 = 1.0 - unit(), u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        y[i] = r * std::cos(2.0 * std::numbers::pi * u2);
        if (i + 1 < y.size()) y[i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
      }
      for (double v : y) norm2 += v * v;
    } while (norm2 < 1e-12);
    const double scale = (0.5 + 1.5 * unit()) / std::sqrt(norm2);
    for (auto& v : y) v *= scale;
    return ChartSample(std::move(x), std::move(y));
  }

  int dim() const noexcept { return n_; }

 private:
  int n_;
  std::uint64_t seed_, salt_;
};

// ---------------------------------------------------------------------------
// Classification

struct Classification {
  bool berwald = false;
  bool landsberg = false;
  bool locally_minkowski = false;
  double berwald_margin = 0.0;    // max |dot-d_h G^i_jk|
  double landsberg_margin = 0.0;  // max |P^i_jk| (Cartan)
  double curvature_margin = 0.0;  // max |R^i_hjk| (Cartan)
  int samples = 0;
};

inline constexpr double kClassifyTolerance = 1e-7;
inline constexpr int kClassifyMinSamples = 20;

/// Classification margins at one sample.
inline Classification sample_margins(const MetricSpec& metric, const ChartSample& s, const JetPolicy& policy = {2, 6}) {
  const auto b = fundamentals(metric, s, policy);
  Classification c;
  c.berwald_margin = max_abs(partial_y(b.Gb));
  const auto cs = torsions_curvatures(b, ConnectionKind::CARTAN);
  c.landsberg_margin = max_abs(cs.P2);
  c.curvature_margin = max_abs(cs.R4);
  c.samples = 1;
  return c;
}

/// Folds per-sample margins into a verdict at tolerance `tol`.
inline Classification combine_margins(const std::vector<Classification>& per_sample, double tol = kClassifyTolerance) {
  if (static_cast<int>(per_sample.size()) < kClassifyMinSamples) {
    throw InsufficientSamples("classify needs at least " + std::to_string(kClassifyMinSamples) + " samples, got " +
                              std::to_string(per_sample.size()));
  }
  Classification c;
  for (const auto& m : per_sample) {
    c.berwald_margin = std::max(c.berwald_margin, m.berwald_margin);
    c.landsberg_margin = std::max(c.landsberg_margin, m.landsberg_margin);
    c.curvature_margin = std::max(c.curvature_margin, m.curvature_margin);
    c.samples += m.samples;
  }
  c.berwald = c.berwald_margin <= tol;
  c.landsberg = c.landsberg_margin <= tol;
  c.locally_minkowski = c.berwald && c.curvature_margin <= tol;
  return c;
}

inline Classification classify(const MetricSpec& metric, const std::vector<ChartSample>& samples,
                               double tol = kClassifyTolerance, const JetPolicy& policy = {2, 6}) {
  if (static_cast<int>(samples.size()) < kClassifyMinSamples) {
    throw InsufficientSamples("classify needs at least " + std::to_string(kClassifyMinSamples) + " samples, got " +
                              std::to_string(samples.size()));
  }
  std::vector<Classification> per;
  per.reserve(samples.size());
  for (const auto& s : samples) per.push_back(sample_margins(metric, s, policy));
  return combine_margins(per, tol);
}

}  // namespace bconf
