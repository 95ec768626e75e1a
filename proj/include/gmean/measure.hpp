#pragma once

// Finite atomic measure spaces and dense grids over their Cartesian powers.
//
// Layout: a grid of order k over n points stores n^k values row-major. The
// flat index of (x_0, ..., x_{k-1}) is sum_j x_j * n^(k-1-j); order 0 is a
// single value. "Almost everywhere" means "on every tuple of positive product
// weight": the only null sets of a purely atomic measure are the tuples that
// touch a zero-weight atom.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gmean/error.hpp"
#include "gmean/scalar.hpp"

namespace gmean {

using Tuple = std::vector<std::size_t>;

/// n^k; capacity-error if it does not fit in size_t.
std::size_t grid_size(std::size_t n, std::size_t k);

/// index-error if any component is outside [0, n).
std::size_t flat_index(std::span<const std::size_t> tuple, std::size_t n);

Tuple unflatten(std::size_t flat, std::size_t n, std::size_t k);
void unflatten_into(std::size_t flat, std::size_t n, std::span<std::size_t> out);

/// Odometer over Lambda^k in row-major order, starting at any flat index.
class TupleCursor {
 public:
  TupleCursor(std::size_t n, std::size_t k, std::size_t start = 0);

  const Tuple& tuple() const noexcept { return digits_; }
  std::size_t flat() const noexcept { return flat_; }
  void advance() noexcept;

 private:
  std::size_t n_;
  Tuple digits_;
  std::size_t flat_;
};

template <Scalar T>
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<T> weights) : weights_(std::move(weights)) {
    require(!weights_.empty(), ErrorCode::Validation, "measure space needs at least one point");
    total_ = from_int<T>(0);
    bool any_positive = false;
    for (const T& w : weights_) {
      require(is_finite(w), ErrorCode::Validation, "weights must be finite");
      require(sign(w) >= 0, ErrorCode::Validation, "weights must be nonnegative");
      any_positive = any_positive || sign(w) > 0;
      total_ += w;
    }
    require(any_positive, ErrorCode::Validation, "measure space needs a point of positive weight");
  }

  std::size_t size() const noexcept { return weights_.size(); }
  const T& weight(std::size_t i) const { return weights_.at(i); }
  std::span<const T> weights() const noexcept { return weights_; }
  const T& total_measure() const noexcept { return total_; }
  bool positive(std::size_t i) const { return sign(weights_.at(i)) > 0; }

  std::size_t first_positive() const noexcept {
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (sign(weights_[i]) > 0) return i;
    return 0;  // unreachable: construction guarantees a positive atom
  }

  T product_weight(std::span<const std::size_t> tuple) const {
    T w = from_int<T>(1);
    for (std::size_t x : tuple) {
      if (x >= size()) fail(ErrorCode::Index, "tuple component out of range");
      w *= weights_[x];
    }
    return w;
  }

  /// Product weights of every tuple in Lambda^k, flat-indexed.
  std::vector<T> product_weight_table(std::size_t k) const {
    std::vector<T> table{from_int<T>(1)};
    for (std::size_t level = 0; level < k; ++level) {
      std::vector<T> next;
      next.reserve(table.size() * size());
      for (const T& prefix : table)
        for (const T& w : weights_) next.push_back(prefix * w);
      table = std::move(next);
    }
    return table;
  }

  /// 1 where the product weight is positive, flat-indexed.
  std::vector<char> positive_table(std::size_t k) const {
    std::vector<char> table{1};
    for (std::size_t level = 0; level < k; ++level) {
      std::vector<char> next;
      next.reserve(table.size() * size());
      for (char prefix : table)
        for (const T& w : weights_) next.push_back(prefix && sign(w) > 0);
      table = std::move(next);
    }
    return table;
  }

  bool operator==(const MeasureSpace& other) const { return weights_ == other.weights_; }

 private:
  std::vector<T> weights_;
  T total_;
};

template <Scalar T>
using SpacePtr = std::shared_ptr<const MeasureSpace<T>>;

template <Scalar T>
SpacePtr<T> make_space(std::vector<T> weights) {
  return std::make_shared<const MeasureSpace<T>>(std::move(weights));
}

template <Scalar T>
bool same_space(const SpacePtr<T>& a, const SpacePtr<T>& b) {
  return a == b || (a && b && *a == *b);
}

template <Scalar T>
class GridFunction {
 public:
  GridFunction(SpacePtr<T> space, std::size_t order)
      : space_(std::move(space)), order_(order) {
    require(space_ != nullptr, ErrorCode::Validation, "grid needs a measure space");
    values_.assign(grid_size(space_->size(), order_), from_int<T>(0));
  }

  GridFunction(SpacePtr<T> space, std::size_t order, std::vector<T> values)
      : space_(std::move(space)), order_(order), values_(std::move(values)) {
    require(space_ != nullptr, ErrorCode::Validation, "grid needs a measure space");
    if (values_.size() != grid_size(space_->size(), order_))
      fail(ErrorCode::Validation, "grid of order " + std::to_string(order_) + " over " +
                                      std::to_string(space_->size()) + " points needs " +
                                      std::to_string(grid_size(space_->size(), order_)) +
                                      " values, got " + std::to_string(values_.size()));
    for (const T& v : values_) require(is_finite(v), ErrorCode::Validation, "grid values must be finite");
  }

  static GridFunction constant(SpacePtr<T> space, std::size_t order, const T& c) {
    GridFunction g(std::move(space), order);
    for (T& v : g.values_) v = c;
    return g;
  }

  const SpacePtr<T>& space_ptr() const noexcept { return space_; }
  const MeasureSpace<T>& space() const noexcept { return *space_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t points() const noexcept { return space_->size(); }
  std::size_t size() const noexcept { return values_.size(); }

  const T& operator[](std::size_t flat) const { return values_[flat]; }
  T& operator[](std::size_t flat) { return values_[flat]; }
  const T& at(std::span<const std::size_t> tuple) const {
    require(tuple.size() == order_, ErrorCode::Index, "tuple length differs from grid order");
    return values_[flat_index(tuple, points())];
  }
  T& at(std::span<const std::size_t> tuple) {
    require(tuple.size() == order_, ErrorCode::Index, "tuple length differs from grid order");
    return values_[flat_index(tuple, points())];
  }

  std::span<const T> values() const noexcept { return values_; }
  std::span<T> values() noexcept { return values_; }

  GridFunction& operator+=(const GridFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  GridFunction& operator-=(const GridFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  GridFunction& operator*=(const T& c) {
    for (T& v : values_) v *= c;
    return *this;
  }

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(const T& c, GridFunction a) { return a *= c; }

  bool operator==(const GridFunction& o) const {
    return order_ == o.order_ && same_space(space_, o.space_) && values_ == o.values_;
  }

  void check_compatible(const GridFunction& o) const {
    require(order_ == o.order_, ErrorCode::Domain, "grids have different orders");
    require(same_space(space_, o.space_), ErrorCode::Domain, "grids live on different spaces");
  }

 private:
  SpacePtr<T> space_;
  std::size_t order_;
  std::vector<T> values_;
};

template <Scalar T>
class MeasurableSet {
 public:
  MeasurableSet(SpacePtr<T> space, std::size_t order, bool full = false)
      : space_(std::move(space)), order_(order) {
    require(space_ != nullptr, ErrorCode::Validation, "set needs a measure space");
    indicator_.assign(grid_size(space_->size(), order_), full ? 1 : 0);
  }

  MeasurableSet(SpacePtr<T> space, std::size_t order, std::vector<char> indicator)
      : space_(std::move(space)), order_(order), indicator_(std::move(indicator)) {
    require(space_ != nullptr, ErrorCode::Validation, "set needs a measure space");
    require(indicator_.size() == grid_size(space_->size(), order_), ErrorCode::Validation,
            "indicator length must equal n^order");
    for (char& c : indicator_) c = c ? 1 : 0;
  }

  const SpacePtr<T>& space_ptr() const noexcept { return space_; }
  const MeasureSpace<T>& space() const noexcept { return *space_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t size() const noexcept { return indicator_.size(); }
  std::span<const char> indicator() const noexcept { return indicator_; }

  bool contains(std::size_t flat) const { return indicator_.at(flat) != 0; }
  void insert(std::size_t flat) { indicator_.at(flat) = 1; }
  void erase(std::size_t flat) { indicator_.at(flat) = 0; }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (char b : indicator_) c += b ? 1 : 0;
    return c;
  }

  MeasurableSet complement() const {
    MeasurableSet out = *this;
    for (char& b : out.indicator_) b = b ? 0 : 1;
    return out;
  }
  MeasurableSet intersect(const MeasurableSet& o) const {
    check_compatible(o);
    MeasurableSet out = *this;
    for (std::size_t i = 0; i < size(); ++i) out.indicator_[i] = indicator_[i] && o.indicator_[i];
    return out;
  }
  MeasurableSet unite(const MeasurableSet& o) const {
    check_compatible(o);
    MeasurableSet out = *this;
    for (std::size_t i = 0; i < size(); ++i) out.indicator_[i] = indicator_[i] || o.indicator_[i];
    return out;
  }
  bool subset_of(const MeasurableSet& o) const {
    check_compatible(o);
    for (std::size_t i = 0; i < size(); ++i)
      if (indicator_[i] && !o.indicator_[i]) return false;
    return true;
  }

  bool operator==(const MeasurableSet& o) const {
    return order_ == o.order_ && same_space(space_, o.space_) && indicator_ == o.indicator_;
  }

  void check_compatible(const MeasurableSet& o) const {
    require(order_ == o.order_, ErrorCode::Domain, "sets have different orders");
    require(same_space(space_, o.space_), ErrorCode::Domain, "sets live on different spaces");
  }

 private:
  SpacePtr<T> space_;
  std::size_t order_;
  std::vector<char> indicator_;
};

template <Scalar T>
T measure_of(const MeasurableSet<T>& set) {
  const auto weights = set.space().product_weight_table(set.order());
  T total = from_int<T>(0);
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set.contains(i)) total += weights[i];
  return total;
}

template <Scalar T>
bool is_null(const MeasurableSet<T>& set) {
  return sign(measure_of(set)) == 0;
}

template <Scalar T>
bool is_conull(const MeasurableSet<T>& set) {
  return sign(measure_of(set.complement())) == 0;
}

/// Tuples of positive product weight.
template <Scalar T>
MeasurableSet<T> positive_support(const SpacePtr<T>& space, std::size_t order) {
  return MeasurableSet<T>(space, order, space->positive_table(order));
}

/// Nonnegative integral exponents are handled exactly; others fall back to
/// binary floating point.
bool is_integral_exponent(double r);

template <Scalar T>
struct LrNorm {
  /// sum |f|^r * density * weight; present whenever it is representable in T
  /// (always in float mode, integral r in exact mode).
  std::optional<T> power;
  /// The norm itself, power^(1/r).
  double value = 0.0;
};

template <Scalar T>
LrNorm<T> weighted_lr_norm(const GridFunction<T>& f, const GridFunction<T>& density, double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) fail(ErrorCode::Domain, "norm exponent r must satisfy 1 <= r < inf");
  f.check_compatible(density);
  const auto weights = f.space().product_weight_table(f.order());
  LrNorm<T> out;
  if (is_integral_exponent(r)) {
    const auto e = static_cast<unsigned>(r);
    T total = from_int<T>(0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (sign(weights[i]) == 0 || sign(density[i]) == 0) continue;
      total += ipow(scalar_abs(f[i]), e) * density[i] * weights[i];
    }
    out.value = e == 1 ? to_double(total) : std::pow(to_double(total), 1.0 / r);
    out.power = std::move(total);
  } else {
    double total = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (sign(weights[i]) == 0 || sign(density[i]) == 0) continue;
      total += std::pow(std::fabs(to_double(f[i])), r) * to_double(density[i]) * to_double(weights[i]);
    }
    if constexpr (std::is_same_v<T, double>) out.power = total;
    out.value = std::pow(total, 1.0 / r);
  }
  return out;
}

namespace detail {

template <Scalar T, class Pick>
T ess_extreme(const GridFunction<T>& f, Pick pick) {
  const auto positive = f.space().positive_table(f.order());
  std::optional<T> best;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!positive[i]) continue;
    T v = pick.value(f[i]);
    if (!best || pick.better(v, *best)) best = std::move(v);
  }
  if (!best) fail(ErrorCode::EmptySupport, "no tuple of positive product weight");
  return *best;
}

}  // namespace detail

/// max |f| over tuples of positive product weight.
template <Scalar T>
T ess_sup_norm(const GridFunction<T>& f) {
  struct {
    T value(const T& v) const { return scalar_abs(v); }
    bool better(const T& a, const T& b) const { return a > b; }
  } pick;
  return detail::ess_extreme(f, pick);
}

template <Scalar T>
T ess_sup(const GridFunction<T>& f) {
  struct {
    T value(const T& v) const { return v; }
    bool better(const T& a, const T& b) const { return a > b; }
  } pick;
  return detail::ess_extreme(f, pick);
}

template <Scalar T>
T ess_inf(const GridFunction<T>& f) {
  struct {
    T value(const T& v) const { return v; }
    bool better(const T& a, const T& b) const { return a < b; }
  } pick;
  return detail::ess_extreme(f, pick);
}

namespace detail {

inline std::pair<std::size_t, std::size_t> section_layout(std::size_t order, std::size_t tail_len,
                                                          std::size_t n,
                                                          std::span<const std::size_t> tail) {
  if (tail_len == 0 || tail_len >= order)
    fail(ErrorCode::Domain, "section needs 1 <= m < N (tail length between 1 and N-1)");
  const std::size_t m = order - tail_len;
  return {m, flat_index(tail, n)};
}

}  // namespace detail

/// (x_1..x_m) -> f(x_1..x_m, tail), m = order - |tail|.
template <Scalar T>
GridFunction<T> section(const GridFunction<T>& f, std::span<const std::size_t> tail) {
  const std::size_t n = f.points();
  const auto [m, tail_flat] = detail::section_layout(f.order(), tail.size(), n, tail);
  const std::size_t stride = grid_size(n, tail.size());
  GridFunction<T> out(f.space_ptr(), m);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i * stride + tail_flat];
  return out;
}

template <Scalar T>
MeasurableSet<T> section(const MeasurableSet<T>& s, std::span<const std::size_t> tail) {
  const std::size_t n = s.space().size();
  const auto [m, tail_flat] = detail::section_layout(s.order(), tail.size(), n, tail);
  const std::size_t stride = grid_size(n, tail.size());
  MeasurableSet<T> out(s.space_ptr(), m);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (s.contains(i * stride + tail_flat)) out.insert(i);
  return out;
}

/// Lexicographically smallest tuple of length k made of positive-weight atoms.
template <Scalar T>
Tuple smallest_positive_tuple(const MeasureSpace<T>& space, std::size_t k) {
  return Tuple(k, space.first_positive());
}

template <Scalar T>
bool all_positive(const MeasureSpace<T>& space, std::span<const std::size_t> tuple) {
  for (std::size_t x : tuple)
    if (x >= space.size() || !space.positive(x)) return false;
  return true;
}

}  // namespace gmean
