#pragma once

// Dense index-typed tensors on an n-dimensional chart.
//
// Slots are ordered contravariant first, then covariant; all indices are
// 0-based.  Storage is row-major in slot order.  T is either double or Jet.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bconf/chart.hpp"
#include "bconf/errors.hpp"
#include "bconf/jet.hpp"

namespace bconf {

inline constexpr int kMaxTensorRank = 6;

template <class T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  Tensor(int dim, int upper, int lower) : n_(dim), up_(upper), down_(lower) {
    if (dim < 1 || upper < 0 || lower < 0 || upper + lower > kMaxTensorRank) {
      throw TensorShapeError("Tensor: invalid shape (" + std::to_string(dim) + ", " +
                             std::to_string(upper) + ", " + std::to_string(lower) + ")");
    }
    std::size_t size = 1;
    for (int r = 0; r < rank(); ++r) size *= static_cast<std::size_t>(n_);
    data_.assign(size, T(0.0));
  }

  /// Builds a tensor from f(indices...).  f may instead take std::span<const int>.
  template <class F>
  static Tensor generate(int dim, int upper, int lower, F&& f) {
    Tensor t(dim, upper, lower);
    std::array<int, kMaxTensorRank> idx{};
    const int r = t.rank();
    for (std::size_t flat = 0; flat < t.data_.size(); ++flat) {
      t.data_[flat] = call(f, idx, r);
      for (int s = r - 1; s >= 0; --s) {
        if (++idx[static_cast<std::size_t>(s)] < dim) break;
        idx[static_cast<std::size_t>(s)] = 0;
      }
    }
    return t;
  }

  static Tensor scalar(int dim, T v) {
    Tensor t(dim, 0, 0);
    t.data_[0] = std::move(v);
    return t;
  }

  int dim() const noexcept { return n_; }
  int upper() const noexcept { return up_; }
  int lower() const noexcept { return down_; }
  int rank() const noexcept { return up_ + down_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

  template <class... I>
  T& operator()(I... i) {
    return data_[offset(i...)];
  }
  template <class... I>
  const T& operator()(I... i) const {
    return data_[offset(i...)];
  }

  T& at(std::span<const int> idx) { return data_[offset_span(idx)]; }
  const T& at(std::span<const int> idx) const { return data_[offset_span(idx)]; }

  /// Multi-index of a flat storage position.
  std::vector<int> unflatten(std::size_t flat) const {
    std::vector<int> idx(static_cast<std::size_t>(rank()));
    for (int s = rank() - 1; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(flat % static_cast<std::size_t>(n_));
      flat /= static_cast<std::size_t>(n_);
    }
    return idx;
  }

  template <class F>
  auto map(F&& f) const {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    Tensor<U> out(n_, up_, down_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = f(data_[i]);
    return out;
  }

  Tensor<double> values() const {
    return map([](const T& v) { return value_of(v); });
  }

  Tensor& operator+=(const Tensor& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  template <class S>
  Tensor& operator*=(const S& s) {
    for (auto& v : data_) v = v * s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator-(Tensor a) {
    for (auto& v : a.data_) v = -v;
    return a;
  }

  bool same_shape(const Tensor& o) const { return n_ == o.n_ && up_ == o.up_ && down_ == o.down_; }

  void require_same_shape(const Tensor& o) const {
    if (!same_shape(o)) throw TensorShapeError("Tensor: shape mismatch");
  }

 private:
  int n_ = 0, up_ = 0, down_ = 0;
  std::vector<T> data_;

  template <class F, std::size_t... K>
  static decltype(auto) call_n(F& f, const std::array<int, kMaxTensorRank>& idx, std::index_sequence<K...>) {
    return f(idx[K]...);
  }

  template <class F>
  static T call(F& f, const std::array<int, kMaxTensorRank>& idx, int r) {
    if constexpr (std::is_invocable_v<F&, std::span<const int>>) {
      return T(f(std::span<const int>(idx.data(), static_cast<std::size_t>(r))));
    } else {
      return dispatch<F, 0>(f, idx, r);
    }
  }

  template <class F, int R>
  static T dispatch(F& f, const std::array<int, kMaxTensorRank>& idx, int r) {
    if constexpr (R > kMaxTensorRank) {
      throw TensorShapeError("Tensor::generate: generator arity does not match rank");
    } else {
      if (r == R) {
        if constexpr (invocable_with_ints<F, R>()) {
          return T(call_n(f, idx, std::make_index_sequence<R>{}));
        } else {
          throw TensorShapeError("Tensor::generate: generator arity does not match rank");
        }
      }
      return dispatch<F, R + 1>(f, idx, r);
    }
  }

  template <class F, int R>
  static constexpr bool invocable_with_ints() {
    return []<std::size_t... K>(std::index_sequence<K...>) {
      return std::is_invocable_v<F&, decltype(K, int{})...>;
    }(std::make_index_sequence<R>{});
  }

  template <class... I>
  std::size_t offset(I... i) const {
    static_assert((std::is_integral_v<I> && ...), "tensor indices must be integers");
    if (static_cast<int>(sizeof...(I)) != rank()) throw TensorShapeError("Tensor: wrong number of indices");
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)), ...);
    return off;
  }

  std::size_t offset_span(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw TensorShapeError("Tensor: wrong number of indices");
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    return off;
  }
};

namespace detail {

inline void check_slot(int slot, int count, const char* what) {
  if (slot < 0 || slot >= count) throw TensorShapeError(std::string(what) + ": slot out of range");
}

}  // namespace detail

/// Traces upper slot `u` against lower slot `l` (lower slots numbered from 0).
template <class T>
Tensor<T> contract(const Tensor<T>& t, int u, int l) {
  detail::check_slot(u, t.upper(), "contract");
  detail::check_slot(l, t.lower(), "contract");
  const int n = t.dim();
  const int lu = u, ll = t.upper() + l;
  return Tensor<T>::generate(n, t.upper() - 1, t.lower() - 1, [&](std::span<const int> idx) {
    std::array<int, kMaxTensorRank> full{};
    int src = 0;
    for (int s = 0; s < t.rank(); ++s) {
      if (s == lu || s == ll) continue;
      full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(src++)];
    }
    T acc(0.0);
    for (int k = 0; k < n; ++k) {
      full[static_cast<std::size_t>(lu)] = k;
      full[static_cast<std::size_t>(ll)] = k;
      acc += t.at(std::span<const int>(full.data(), static_cast<std::size_t>(t.rank())));
    }
    return acc;
  });
}

/// Contracts slot `slot` (absolute position) with a vector or covector `v`.
template <class T, class V>
Tensor<T> transvect(const Tensor<T>& t, int slot, const std::vector<V>& v) {
  detail::check_slot(slot, t.rank(), "transvect");
  if (static_cast<int>(v.size()) != t.dim()) throw TensorShapeError("transvect: vector length mismatch");
  const bool is_upper = slot < t.upper();
  const int n = t.dim();
  return Tensor<T>::generate(n, t.upper() - (is_upper ? 1 : 0), t.lower() - (is_upper ? 0 : 1),
                             [&](std::span<const int> idx) {
                               std::array<int, kMaxTensorRank> full{};
                               int src = 0;
                               for (int s = 0; s < t.rank(); ++s) {
                                 if (s == slot) continue;
                                 full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(src++)];
                               }
                               T acc(0.0);
                               for (int k = 0; k < n; ++k) {
                                 full[static_cast<std::size_t>(slot)] = k;
                                 acc += t.at(std::span<const int>(full.data(), static_cast<std::size_t>(t.rank()))) *
                                        v[static_cast<std::size_t>(k)];
                               }
                               return acc;
                             });
}

/// Raises lower slot `l` with the inverse metric; the new upper slot is appended after existing ones.
template <class T>
Tensor<T> raise(const Tensor<T>& t, int l, const Tensor<T>& ginv) {
  detail::check_slot(l, t.lower(), "raise");
  if (ginv.upper() != 2 || ginv.lower() != 0 || ginv.dim() != t.dim()) {
    throw TensorShapeError("raise: expected a (2,0) inverse metric");
  }
  const int n = t.dim(), up = t.upper();
  return Tensor<T>::generate(n, up + 1, t.lower() - 1, [&](std::span<const int> idx) {
    std::array<int, kMaxTensorRank> full{};
    for (int s = 0; s < up; ++s) full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(s)];
    const int i = idx[static_cast<std::size_t>(up)];
    int src = up + 1;
    for (int s = 0; s < t.lower(); ++s) {
      if (s == l) continue;
      full[static_cast<std::size_t>(up + s)] = idx[static_cast<std::size_t>(src++)];
    }
    T acc(0.0);
    for (int k = 0; k < n; ++k) {
      full[static_cast<std::size_t>(up + l)] = k;
      acc += ginv(i, k) * t.at(std::span<const int>(full.data(), static_cast<std::size_t>(t.rank())));
    }
    return acc;
  });
}

/// Lowers upper slot `u` with the metric; the new lower slot is placed first among lower slots.
template <class T>
Tensor<T> lower(const Tensor<T>& t, int u, const Tensor<T>& g) {
  detail::check_slot(u, t.upper(), "lower");
  if (g.upper() != 0 || g.lower() != 2 || g.dim() != t.dim()) {
    throw TensorShapeError("lower: expected a (0,2) metric");
  }
  const int n = t.dim(), up = t.upper() - 1;
  return Tensor<T>::generate(n, up, t.lower() + 1, [&](std::span<const int> idx) {
    std::array<int, kMaxTensorRank> full{};
    int src = 0;
    for (int s = 0; s < t.upper(); ++s) {
      if (s == u) continue;
      full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(src++)];
    }
    const int i = idx[static_cast<std::size_t>(up)];
    for (int s = 0; s < t.lower(); ++s) {
      full[static_cast<std::size_t>(t.upper() + s)] = idx[static_cast<std::size_t>(up + 1 + s)];
    }
    T acc(0.0);
    for (int k = 0; k < n; ++k) {
      full[static_cast<std::size_t>(u)] = k;
      acc += g(i, k) * t.at(std::span<const int>(full.data(), static_cast<std::size_t>(t.rank())));
    }
    return acc;
  });
}

/// Swaps two slots of the same kind (absolute positions).
template <class T>
Tensor<T> swap_slots(const Tensor<T>& t, int a, int b) {
  detail::check_slot(a, t.rank(), "swap_slots");
  detail::check_slot(b, t.rank(), "swap_slots");
  if ((a < t.upper()) != (b < t.upper())) throw TensorShapeError("swap_slots: slots differ in kind");
  return Tensor<T>::generate(t.dim(), t.upper(), t.lower(), [&](std::span<const int> idx) {
    std::array<int, kMaxTensorRank> full{};
    std::copy(idx.begin(), idx.end(), full.begin());
    std::swap(full[static_cast<std::size_t>(a)], full[static_cast<std::size_t>(b)]);
    return t.at(std::span<const int>(full.data(), idx.size()));
  });
}

/// (t + t with slots a, b swapped) / 2.
template <class T>
Tensor<T> symmetrize(const Tensor<T>& t, int a, int b) {
  Tensor<T> s = t + swap_slots(t, a, b);
  s *= 0.5;
  return s;
}

/// Alternation in slots a, b: t - t with a, b swapped.
template <class T>
Tensor<T> alternate(const Tensor<T>& t, int a, int b) {
  return t - swap_slots(t, a, b);
}

/// X(j,k,r) - X(k,r,j) - X(r,j,k) over the last three slots.
template <class F>
auto cyclic_theta(F&& x, int j, int k, int r) {
  return x(j, k, r) - x(k, r, j) - x(r, j, k);
}

template <class T>
Tensor<T> identity(int n) {
  return Tensor<T>::generate(n, 1, 1, [](int i, int j) { return T(i == j ? 1.0 : 0.0); });
}

/// Inverse of a rank-2 tensor by Gauss-Jordan with partial pivoting on values.
template <class T>
Tensor<T> inverse(const Tensor<T>& m, double guard = kDefaultGuard) {
  if (m.rank() != 2 || m.upper() == 1) throw TensorShapeError("inverse: expected a (0,2) or (2,0) tensor");
  const int n = m.dim();
  std::vector<std::vector<T>> a(static_cast<std::size_t>(n), std::vector<T>(static_cast<std::size_t>(2 * n), T(0.0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = T(1.0);
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(value_of(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)])) >
          std::abs(value_of(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)]))) {
        piv = r;
      }
    }
    if (!(std::abs(value_of(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)])) > guard)) {
      throw InadmissibleSample("singular matrix");
    }
    std::swap(a[static_cast<std::size_t>(c)], a[static_cast<std::size_t>(piv)]);
    auto& row = a[static_cast<std::size_t>(c)];
    const T inv = recip(row[static_cast<std::size_t>(c)], guard);
    for (auto& v : row) v = v * inv;
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      auto& other = a[static_cast<std::size_t>(r)];
      const T f = other[static_cast<std::size_t>(c)];
      if (value_of(f) == 0.0 && std::is_same_v<T, double>) continue;
      for (int j = 0; j < 2 * n; ++j) {
        other[static_cast<std::size_t>(j)] -= f * row[static_cast<std::size_t>(j)];
      }
    }
  }
  return Tensor<T>::generate(n, m.upper() == 0 ? 2 : 0, m.upper() == 0 ? 0 : 2, [&](int i, int j) {
    return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + j)];
  });
}

/// Determinant value of a rank-2 tensor (LU on values).
template <class T>
double determinant(const Tensor<T>& m) {
  const int n = m.dim();
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] = value_of(m(i, j));
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[static_cast<std::size_t>(r * n + c)]) > std::abs(a[static_cast<std::size_t>(piv * n + c)])) piv = r;
    if (a[static_cast<std::size_t>(piv * n + c)] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a[static_cast<std::size_t>(c * n + j)], a[static_cast<std::size_t>(piv * n + j)]);
      det = -det;
    }
    const double d = a[static_cast<std::size_t>(c * n + c)];
    det *= d;
    for (int r = c + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r * n + c)] / d;
      for (int j = c; j < n; ++j) a[static_cast<std::size_t>(r * n + j)] -= f * a[static_cast<std::size_t>(c * n + j)];
    }
  }
  return det;
}

/// Worst entry of |a - b| / (1 + |a| + |b|) and where it occurs.
struct Residual {
  double value = 0.0;
  std::vector<int> index;
};

template <class T>
Residual residual(const Tensor<T>& a, const Tensor<T>& b) {
  a.require_same_shape(b);
  Residual r;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = value_of(a.data()[i]), y = value_of(b.data()[i]);
    double v = std::abs(x - y) / (1.0 + std::abs(x) + std::abs(y));
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    if (v > r.value) {
      r.value = v;
      worst = i;
    }
  }
  r.index = a.unflatten(worst);
  return r;
}

template <class T>
double max_abs(const Tensor<T>& a) {
  double m = 0.0;
  for (const auto& v : a.data()) m = std::max(m, std::abs(value_of(v)));
  return m;
}

}  // namespace bconf
