#pragma once

// Truncated multivariate Taylor arithmetic ("jets") over the 2n chart
// variables (x^0..x^{n-1}, y^0..y^{n-1}).
//
// A jet retains every Taylor coefficient whose x-degree is <= order_x and
// whose y-degree is <= order_y.  Coefficients are stored densely, x-monomial
// major, with monomials in graded lexicographic order, so the monomials of
// degree <= d are always a prefix of the monomials of degree <= d+1.
//
// A jet with dim() == 0 is an exact constant: it carries infinite order and
// combines with any other jet without truncating it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include <quadmath.h>

#include "bconf/chart.hpp"
#include "bconf/errors.hpp"

namespace bconf {

inline constexpr int kMaxJetOrder = 6;
inline constexpr int kMaxJetDim = 6;
inline constexpr double kDefaultGuard = 1e-9;

/// Truncation orders and domain guards used when seeding jets at a sample.
struct JetPolicy {
  int max_order_x = 2;
  int max_order_y = 6;
  double div_guard = kDefaultGuard;
  double sqrt_guard = kDefaultGuard;

  void validate() const {
    if (max_order_x < 0 || max_order_y < 0 || max_order_x > kMaxJetOrder ||
        max_order_y > kMaxJetOrder) {
      throw std::invalid_argument("JetPolicy: orders must lie in [0, " +
                                  std::to_string(kMaxJetOrder) + "]");
    }
  }
};

namespace detail {

struct MonomialTable {
  struct Triple {
    int a, b, c;
  };

  int n = 0;
  std::vector<std::vector<int>> exps;
  std::vector<int> degree;
  std::array<int, kMaxJetOrder + 1> count_upto{};
  std::vector<int> succ;  // succ[m * n + k]: index of m + e_k, or -1
  std::vector<double> factorial;  // prod_k alpha_k!
  std::unordered_map<int, int> index_of;
  // pairs[da][db]: all (a, b, a+b) with deg a == da, deg b == db.
  std::array<std::array<std::vector<Triple>, kMaxJetOrder + 1>, kMaxJetOrder + 1> pairs;

  int count(int order) const { return count_upto[static_cast<std::size_t>(order)]; }

  static int key(std::span<const int> e) {
    int k = 0;
    for (std::size_t i = e.size(); i-- > 0;) k = k * 8 + e[i];
    return k;
  }

  int find(std::span<const int> e) const {
    const auto it = index_of.find(key(e));
    return it == index_of.end() ? -1 : it->second;
  }
};

inline void enumerate_degree(int n, int d, int var, std::vector<int>& cur,
                             std::vector<std::vector<int>>& out) {
  if (var == n - 1) {
    cur[static_cast<std::size_t>(var)] = d;
    out.push_back(cur);
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[static_cast<std::size_t>(var)] = e;
    enumerate_degree(n, d - e, var + 1, cur, out);
  }
}

inline MonomialTable build_monomial_table(int n) {
  MonomialTable t;
  t.n = n;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    enumerate_degree(n, d, 0, cur, t.exps);
    t.count_upto[static_cast<std::size_t>(d)] = static_cast<int>(t.exps.size());
  }
  const int m = static_cast<int>(t.exps.size());
  t.degree.resize(static_cast<std::size_t>(m));
  t.factorial.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& e = t.exps[static_cast<std::size_t>(i)];
    int deg = 0;
    double fac = 1.0;
    for (int ek : e) {
      deg += ek;
      for (int j = 2; j <= ek; ++j) fac *= j;
    }
    t.degree[static_cast<std::size_t>(i)] = deg;
    t.factorial[static_cast<std::size_t>(i)] = fac;
    t.index_of.emplace(MonomialTable::key(e), i);
  }
  t.succ.assign(static_cast<std::size_t>(m * n), -1);
  for (int i = 0; i < m; ++i) {
    if (t.degree[static_cast<std::size_t>(i)] >= kMaxJetOrder) continue;
    for (int k = 0; k < n; ++k) {
      auto e = t.exps[static_cast<std::size_t>(i)];
      ++e[static_cast<std::size_t>(k)];
      t.succ[static_cast<std::size_t>(i * n + k)] = t.find(e);
    }
  }
  std::vector<int> sum(static_cast<std::size_t>(n));
  for (int a = 0; a < m; ++a) {
    const int da = t.degree[static_cast<std::size_t>(a)];
    for (int b = 0; b < m; ++b) {
      const int db = t.degree[static_cast<std::size_t>(b)];
      if (da + db > kMaxJetOrder) continue;
      for (int k = 0; k < n; ++k) {
        sum[static_cast<std::size_t>(k)] = t.exps[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] +
                                           t.exps[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)];
      }
      t.pairs[static_cast<std::size_t>(da)][static_cast<std::size_t>(db)].push_back({a, b, t.find(sum)});
    }
  }
  return t;
}

inline const MonomialTable& monomials(int n) {
  if (n < 1 || n > kMaxJetDim) {
    throw std::invalid_argument("jet dimension must lie in [1, " + std::to_string(kMaxJetDim) + "]");
  }
  static std::array<std::once_flag, kMaxJetDim + 1> flags;
  static std::array<MonomialTable, kMaxJetDim + 1> tables;
  const auto idx = static_cast<std::size_t>(n);
  std::call_once(flags[idx], [&] { tables[idx] = build_monomial_table(n); });
  return tables[idx];
}

}  // namespace detail

/// Coefficient precision of jets.  EXTENDED stores long double; QUAD stores
/// binary128 and costs about ten times as much.
enum class Precision { EXTENDED, QUAD };

using wide = __float128;

inline wide magnitude(wide v) { return v < 0 ? -v : v; }

namespace detail {

inline Precision& thread_precision() {
  thread_local Precision p = Precision::EXTENDED;
  return p;
}

inline wide ipow(wide v, int k) {
  wide r = 1;
  for (int i = 0; i < k; ++i) r *= v;
  return r;
}

}  // namespace detail

/// Precision of jets created on the calling thread.
inline Precision jet_precision() { return detail::thread_precision(); }

/// Sets the precision of jets created on this thread for the scope's lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(Precision p) : saved_(detail::thread_precision()) { detail::thread_precision() = p; }
  ~PrecisionScope() { detail::thread_precision() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  Precision saved_;
};

class Jet {
 public:
  enum class Part { X, Y };
  static constexpr int kExact = 1 << 20;
  // Scalar type of real_value(); the rest of the interface stays in double.
  using real = wide;

  Jet() : Jet(0.0) {}
  Jet(double v) : quad_(jet_precision() == Precision::QUAD) {  // NOLINT(google-explicit-constructor): constants mix freely
    if (quad_) {
      q_.assign(1, v);
    } else {
      e_.assign(1, v);
    }
  }

  static Jet zero(int n, int order_x, int order_y) {
    return blank(n, order_x, order_y, jet_precision() == Precision::QUAD);
  }

  /// The coordinate function x^k (part X) or y^k (part Y) expanded at `value`.
  static Jet variable(int n, int order_x, int order_y, Part part, int k, double value) {
    if (k < 0 || k >= n) throw std::out_of_range("Jet::variable: variable index out of range");
    Jet j = zero(n, order_x, order_y);
    j.set(0, value);
    const auto& t = detail::monomials(n);
    const int unit = t.succ[static_cast<std::size_t>(k)];  // monomial e_k
    if (part == Part::X && order_x >= 1) {
      j.set(unit * t.count(order_y), 1.0);
      j.ex_ = 1;
    } else if (part == Part::Y && order_y >= 1) {
      j.set(unit, 1.0);
      j.ey_ = 1;
    }
    return j;
  }

  bool is_constant() const noexcept { return n_ == 0; }
  int dim() const noexcept { return n_; }
  int order_x() const noexcept { return n_ == 0 ? kExact : ox_; }
  int order_y() const noexcept { return n_ == 0 ? kExact : oy_; }
  Precision precision() const noexcept { return quad_ ? Precision::QUAD : Precision::EXTENDED; }
  double value() const noexcept { return get(0); }
  real real_value() const noexcept { return quad_ ? q_[0] : static_cast<real>(e_[0]); }

  /// Raw Taylor coefficient of x^ax y^ay.
  double coefficient(std::span<const int> ax, std::span<const int> ay) const {
    if (n_ == 0) {
      const bool zero_index = std::all_of(ax.begin(), ax.end(), [](int e) { return e == 0; }) &&
                              std::all_of(ay.begin(), ay.end(), [](int e) { return e == 0; });
      return zero_index ? value() : 0.0;
    }
    const auto& t = table();
    if (static_cast<int>(ax.size()) != n_ || static_cast<int>(ay.size()) != n_) {
      throw std::invalid_argument("Jet::coefficient: multi-index has wrong length");
    }
    int dx = 0, dy = 0;
    for (int e : ax) dx += e;
    for (int e : ay) dy += e;
    if (dx > ox_ || dy > oy_) {
      throw JetOrderError("derivative of order (" + std::to_string(dx) + "," + std::to_string(dy) +
                          ") exceeds retained order (" + std::to_string(ox_) + "," +
                          std::to_string(oy_) + ")");
    }
    const int ix = t.find(ax), iy = t.find(ay);
    return get(ix * t.count(oy_) + iy);
  }

  /// True partial derivative d^{|ax|+|ay|} / dx^ax dy^ay at the expansion point.
  double derivative(std::span<const int> ax, std::span<const int> ay) const {
    const double c = coefficient(ax, ay);
    if (n_ == 0) return c;
    const auto& t = table();
    return c * t.factorial[static_cast<std::size_t>(t.find(ax))] *
           t.factorial[static_cast<std::size_t>(t.find(ay))];
  }

  Jet dx(int k) const { return quad_ ? differentiate<wide>(Part::X, k) : differentiate<long double>(Part::X, k); }
  Jet dy(int k) const { return quad_ ? differentiate<wide>(Part::Y, k) : differentiate<long double>(Part::Y, k); }

  /// Drops all coefficients above the given orders (never raises orders).
  Jet truncated(int order_x, int order_y) const {
    if (n_ == 0) return *this;
    order_x = std::min(order_x, ox_);
    order_y = std::min(order_y, oy_);
    if (order_x == ox_ && order_y == oy_) return *this;
    Jet r = blank(n_, order_x, order_y, quad_);
    r.accumulate(*this, 1.0);
    r.ex_ = std::min(ex_, order_x);
    r.ey_ = std::min(ey_, order_y);
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    r.visit([](auto& c) {
      for (auto& v : c) v = -v;
    });
    return r;
  }

  Jet& operator+=(const Jet& o) { return *this = sum(*this, o, 1.0); }
  Jet& operator-=(const Jet& o) { return *this = sum(*this, o, -1.0); }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator*=(double s) { return scale(s); }
  Jet& scale(real s) {
    visit([s](auto& c) {
      using R = typename std::decay_t<decltype(c)>::value_type;
      const R f = static_cast<R>(s);
      for (auto& v : c) v *= f;
    });
    return *this;
  }

  friend Jet operator+(const Jet& a, const Jet& b) { return sum(a, b, 1.0); }
  friend Jet operator-(const Jet& a, const Jet& b) { return sum(a, b, -1.0); }
  friend Jet operator+(const Jet& a, double b) {
    Jet r = a;
    r.add_constant(b);
    return r;
  }
  friend Jet operator+(double a, const Jet& b) { return b + a; }
  friend Jet operator-(const Jet& a, double b) { return a + (-b); }
  friend Jet operator-(double a, const Jet& b) { return (-b) + a; }
  friend Jet operator*(const Jet& a, double s) {
    Jet r = a;
    r *= s;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) {
    if (std::abs(s) <= kDefaultGuard) throw DomainGuard("division by near-zero constant");
    return Jet(a).scale(real(1) / s);
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.n_ == 0) return Jet(b).scale(a.real_value());
    if (b.n_ == 0) return Jet(a).scale(b.real_value());
    check_compatible(a, b);
    if (a.quad_ == b.quad_) return a.quad_ ? multiply<wide>(a, b) : multiply<long double>(a, b);
    return multiply<wide>(a.to_quad(), b.to_quad());
  }

  friend Jet operator/(const Jet& a, const Jet& b);

  /// A constant of the calling thread's precision.
  static Jet from_real(real v) { return constant(v, jet_precision() == Precision::QUAD); }

  /// phi(u) from the Taylor coefficients of phi at u(0); taylor(k) = phi^(k)(u0)/k!.
  template <class Taylor>
  friend Jet compose(const Jet& u, Taylor&& taylor) {
    if (u.n_ == 0) return constant(taylor(0), u.quad_);
    Jet h = u;
    h.set(0, 0.0);
    const int k_max = (h.ex_ > 0 ? h.ox_ : 0) + (h.ey_ > 0 ? h.oy_ : 0);
    Jet r = constant(taylor(k_max), u.quad_);
    for (int k = k_max - 1; k >= 0; --k) {
      r = r * h;
      r.add_constant(taylor(k));
    }
    return r;
  }

 private:
  int n_ = 0;
  int ox_ = 0, oy_ = 0;  // truncation orders
  int ex_ = 0, ey_ = 0;  // highest degrees that may carry nonzero coefficients
  bool quad_ = false;    // which of e_ and q_ holds the coefficients
  std::vector<long double> e_;
  std::vector<wide> q_;

  const detail::MonomialTable& table() const { return detail::monomials(n_); }

  template <class R>
  std::vector<R>& store() {
    if constexpr (std::is_same_v<R, wide>) {
      return q_;
    } else {
      return e_;
    }
  }
  template <class R>
  const std::vector<R>& store() const {
    if constexpr (std::is_same_v<R, wide>) {
      return q_;
    } else {
      return e_;
    }
  }

  template <class F>
  void visit(F&& f) {
    if (quad_) {
      f(q_);
    } else {
      f(e_);
    }
  }

  double get(int i) const {
    return quad_ ? static_cast<double>(q_[static_cast<std::size_t>(i)])
                 : static_cast<double>(e_[static_cast<std::size_t>(i)]);
  }
  void set(int i, real v) {
    if (quad_) {
      q_[static_cast<std::size_t>(i)] = v;
    } else {
      e_[static_cast<std::size_t>(i)] = static_cast<long double>(v);
    }
  }
  void add_constant(real v) {
    if (quad_) {
      q_[0] += v;
    } else {
      e_[0] += static_cast<long double>(v);
    }
  }

  static Jet constant(real v, bool quad) {
    Jet j = blank(0, 0, 0, quad);
    j.set(0, v);
    return j;
  }

  static Jet blank(int n, int order_x, int order_y, bool quad) {
    Jet j(0.0);
    j.n_ = n;
    j.ox_ = order_x;
    j.oy_ = order_y;
    j.quad_ = quad;
    const std::size_t size =
        n == 0 ? 1 : static_cast<std::size_t>(detail::monomials(n).count(order_x) * detail::monomials(n).count(order_y));
    if (quad) {
      j.e_.clear();
      j.q_.assign(size, 0);
    } else {
      j.q_.clear();
      j.e_.assign(size, 0.0L);
    }
    return j;
  }

  Jet to_quad() const {
    if (quad_) return *this;
    Jet r = *this;
    r.quad_ = true;
    r.q_.assign(e_.begin(), e_.end());
    r.e_.clear();
    return r;
  }

  static void check_compatible(const Jet& a, const Jet& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("jets over different chart dimensions");
  }

  template <class R>
  static Jet multiply(const Jet& a, const Jet& b) {
    const int ox = std::min(a.ox_, b.ox_);
    const int oy = std::min(a.oy_, b.oy_);
    Jet r = blank(a.n_, ox, oy, std::is_same_v<R, wide>);
    const auto& t = a.table();
    const int nya = t.count(a.oy_), nyb = t.count(b.oy_), nyr = t.count(oy);
    const int eya = std::min(a.ey_, oy), eyb = std::min(b.ey_, oy);
    const int cya = t.count(eya), cyb = t.count(eyb);
    const auto block_nonzero = [&](const Jet& j, int ex, int ny, int cy) {
      std::vector<char> nz(static_cast<std::size_t>(t.count(ex)), 0);
      for (int ix = 0; ix < t.count(ex); ++ix) {
        const R* p = &j.store<R>()[static_cast<std::size_t>(ix * ny)];
        for (int iy = 0; iy < cy; ++iy) {
          if (p[iy] != 0) {
            nz[static_cast<std::size_t>(ix)] = 1;
            break;
          }
        }
      }
      return nz;
    };
    const int exa = std::min(a.ex_, ox), exb = std::min(b.ex_, ox);
    const auto nza = block_nonzero(a, exa, nya, cya);
    const auto nzb = block_nonzero(b, exb, nyb, cyb);
    for (int dxa = 0; dxa <= exa; ++dxa) {
      for (int dxb = 0; dxb <= std::min(exb, ox - dxa); ++dxb) {
        for (const auto& px : t.pairs[static_cast<std::size_t>(dxa)][static_cast<std::size_t>(dxb)]) {
          if (!nza[static_cast<std::size_t>(px.a)] || !nzb[static_cast<std::size_t>(px.b)]) continue;
          const R* pa = &a.store<R>()[static_cast<std::size_t>(px.a * nya)];
          const R* pb = &b.store<R>()[static_cast<std::size_t>(px.b * nyb)];
          R* pr = &r.store<R>()[static_cast<std::size_t>(px.c * nyr)];
          for (int dya = 0; dya <= eya; ++dya) {
            for (int dyb = 0; dyb <= std::min(eyb, oy - dya); ++dyb) {
              for (const auto& py : t.pairs[static_cast<std::size_t>(dya)][static_cast<std::size_t>(dyb)]) {
                pr[py.c] += pa[py.a] * pb[py.b];
              }
            }
          }
        }
      }
    }
    r.ex_ = std::min(ox, a.ex_ + b.ex_);
    r.ey_ = std::min(oy, a.ey_ + b.ey_);
    return r;
  }

  // this += s * o, restricted to this jet's orders; o has this jet's precision.
  template <class R>
  void accumulate_as(const Jet& o, R s) {
    const auto& t = table();
    const int ny = t.count(oy_), nyo = t.count(o.oy_);
    const int cx = t.count(std::min(ox_, o.ex_)), cy = t.count(std::min(oy_, o.ey_));
    for (int ix = 0; ix < cx; ++ix) {
      const R* po = &o.store<R>()[static_cast<std::size_t>(ix * nyo)];
      R* pr = &store<R>()[static_cast<std::size_t>(ix * ny)];
      for (int iy = 0; iy < cy; ++iy) pr[iy] += s * po[iy];
    }
  }

  void accumulate(const Jet& o, double s) {
    if (!quad_) {
      accumulate_as<long double>(o, s);
    } else if (o.quad_) {
      accumulate_as<wide>(o, s);
    } else {
      accumulate_as<wide>(o.to_quad(), s);
    }
  }

  static Jet sum(const Jet& a, const Jet& b, double sb) {
    if (a.n_ == 0 && b.n_ == 0) return constant(a.real_value() + sb * b.real_value(), a.quad_ || b.quad_);
    if (a.n_ == 0) {
      Jet r = b;
      r.scale(sb);
      r.add_constant(a.real_value());
      return r;
    }
    if (b.n_ == 0) {
      Jet r = a;
      r.add_constant(sb * b.real_value());
      return r;
    }
    check_compatible(a, b);
    Jet r = blank(a.n_, std::min(a.ox_, b.ox_), std::min(a.oy_, b.oy_), a.quad_ || b.quad_);
    r.accumulate(a, 1.0);
    r.accumulate(b, sb);
    r.ex_ = std::min(r.ox_, std::max(a.ex_, b.ex_));
    r.ey_ = std::min(r.oy_, std::max(a.ey_, b.ey_));
    return r;
  }

  template <class R>
  Jet differentiate(Part part, int k) const {
    if (n_ == 0) return constant(0, quad_);
    if (k < 0 || k >= n_) throw std::out_of_range("Jet: variable index out of range");
    const auto& t = table();
    const std::vector<R>& c = store<R>();
    if (part == Part::X) {
      if (ox_ == 0) throw JetOrderError("x-derivative of a jet with x-order 0");
      Jet r = blank(n_, ox_ - 1, oy_, quad_);
      std::vector<R>& rc = r.store<R>();
      const int ny = t.count(oy_);
      const int cx = t.count(std::max(0, std::min(ox_ - 1, ex_ - 1)));
      if (ex_ > 0) {
        for (int ix = 0; ix < cx; ++ix) {
          const int s = t.succ[static_cast<std::size_t>(ix * n_ + k)];
          const R fac = t.exps[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
          for (int iy = 0; iy < ny; ++iy) {
            rc[static_cast<std::size_t>(ix * ny + iy)] = fac * c[static_cast<std::size_t>(s * ny + iy)];
          }
        }
      }
      r.ex_ = std::max(0, std::min(ox_ - 1, ex_ - 1));
      r.ey_ = ey_;
      return r;
    }
    if (oy_ == 0) throw JetOrderError("y-derivative of a jet with y-order 0");
    Jet r = blank(n_, ox_, oy_ - 1, quad_);
    std::vector<R>& rc = r.store<R>();
    const int ny = t.count(oy_), nyr = t.count(oy_ - 1);
    const int cy = t.count(std::max(0, std::min(oy_ - 1, ey_ - 1)));
    if (ey_ > 0) {
      for (int ix = 0; ix < t.count(ox_); ++ix) {
        for (int iy = 0; iy < cy; ++iy) {
          const int s = t.succ[static_cast<std::size_t>(iy * n_ + k)];
          const R fac = t.exps[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
          rc[static_cast<std::size_t>(ix * nyr + iy)] = fac * c[static_cast<std::size_t>(ix * ny + s)];
        }
      }
    }
    r.ex_ = ex_;
    r.ey_ = std::max(0, std::min(oy_ - 1, ey_ - 1));
    return r;
  }
};

// Elementary functions.  Each guard names the inadmissible condition so
// callers can reject the sample.  Taylor coefficients are formed in binary128
// and rounded to the jet's precision.

inline Jet recip(const Jet& u, double guard = kDefaultGuard) {
  const wide u0 = u.real_value();
  if (!(magnitude(u0) > guard)) throw DomainGuard("reciprocal of near-zero value");
  const wide inv = 1 / u0;
  return compose(u, [inv](int k) { return (k % 2 == 0 ? 1 : -1) * detail::ipow(inv, k + 1); });
}

inline Jet operator/(const Jet& a, const Jet& b) {
  return a * recip(b);
}

inline Jet exp(const Jet& u) {
  const wide e0 = expq(u.real_value());
  return compose(u, [e0](int k) {
    wide f = 1;
    for (int j = 2; j <= k; ++j) f *= j;
    return e0 / f;
  });
}

inline Jet log(const Jet& u, double guard = kDefaultGuard) {
  const wide u0 = u.real_value();
  if (!(u0 > guard)) throw DomainGuard("log of non-positive value");
  return compose(u, [u0](int k) -> wide {
    if (k == 0) return logq(u0);
    return (k % 2 == 1 ? 1 : -1) / (k * detail::ipow(u0, k));
  });
}

/// u^a for real a; requires u(0) > guard unless a is a non-negative integer.
inline Jet pow(const Jet& u, wide a, double guard = kDefaultGuard) {
  const wide u0 = u.real_value();
  if (!(u0 > guard)) throw DomainGuard("non-integer power of non-positive value");
  return compose(u, [u0, a](int k) {
    wide binom = 1;
    for (int j = 0; j < k; ++j) binom *= (a - j) / (j + 1);
    return binom * powq(u0, a - k);
  });
}

/// u^(1/k); the exponent is formed in binary128.
inline Jet root(const Jet& u, int k, double guard = kDefaultGuard) { return pow(u, wide(1) / k, guard); }

inline Jet sqrt(const Jet& u, double guard = kDefaultGuard) {
  if (!(u.value() > guard)) throw DomainGuard("sqrt of non-positive value");
  return pow(u, 0.5, guard);
}

inline Jet powi(const Jet& u, int m) {
  if (m < 0) return recip(powi(u, -m));
  Jet r(1.0), base = u;
  while (m > 0) {
    if (m & 1) r = r * base;
    m >>= 1;
    if (m > 0) base = base * base;
  }
  return r;
}

inline double powi(double u, int m) { return std::pow(u, m); }
inline double pow(double u, double a, double guard) {
  if (!(u > guard)) throw DomainGuard("non-integer power of non-positive value");
  return std::pow(u, a);
}
inline double root(double u, int k, double guard) { return pow(u, 1.0 / k, guard); }
inline double recip(double u, double guard = kDefaultGuard) {
  if (!(std::abs(u) > guard)) throw DomainGuard("reciprocal of near-zero value");
  return 1.0 / u;
}

/// The 2n coordinate jets (x^0..x^{n-1}, y^0..y^{n-1}) expanded at `sample`.
inline std::vector<Jet> seed(const ChartSample& sample, const JetPolicy& policy = {}) {
  policy.validate();
  const int n = sample.dim();
  std::vector<Jet> out;
  out.reserve(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < n; ++k) {
    out.push_back(Jet::variable(n, policy.max_order_x, policy.max_order_y, Jet::Part::X, k,
                                sample.x[static_cast<std::size_t>(k)]));
  }
  for (int k = 0; k < n; ++k) {
    out.push_back(Jet::variable(n, policy.max_order_x, policy.max_order_y, Jet::Part::Y, k,
                                sample.y[static_cast<std::size_t>(k)]));
  }
  return out;
}

inline double value_of(double v) { return v; }
inline double value_of(const Jet& j) { return j.value(); }

}  // namespace bconf
