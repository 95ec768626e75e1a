#pragma once

// Reproducible random instances.
//
// Generator: std::mt19937_64 seeded with the user seed. Every random rational
// is drawn as two consecutive engine outputs a, b:
//   numerator   = (a mod (2R + 1)) - R      (signed values)
//   numerator   = a mod (R + 1)             (nonnegative values)
//   numerator   = 1 + (a mod R)             (positive values)
//   denominator = 1 + (b mod Q)
// with R = 9 and Q = 7 by default. Grids are filled in ascending flat index.
// Float mode draws the same rationals and rounds them to double, so a seed
// describes the same instance in both modes.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "gmean/integrability.hpp"

namespace gmean {

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::int64_t range = 9, std::int64_t denominators = 7)
      : eng_(seed), range_(range), denominators_(denominators) {
    if (range < 1 || denominators < 1) fail(ErrorCode::Domain, "random ranges must be >= 1");
  }

  Rational signed_value() { return draw(static_cast<std::uint64_t>(2 * range_ + 1), -range_); }
  Rational nonnegative_value() { return draw(static_cast<std::uint64_t>(range_ + 1), 0); }
  Rational positive_value() { return draw(static_cast<std::uint64_t>(range_), 1); }

  std::uint64_t below(std::uint64_t bound) { return eng_() % bound; }

 private:
  Rational draw(std::uint64_t modulus, std::int64_t offset) {
    const auto num = static_cast<std::int64_t>(eng_() % modulus) + offset;
    const auto den = 1 + static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(denominators_));
    return from_ratio<Rational>(num, den);
  }

  std::mt19937_64 eng_;
  std::int64_t range_;
  std::int64_t denominators_;
};

/// Positive random weights; the atom at `zero_atom` (if any) gets weight 0.
template <Scalar T>
SpacePtr<T> random_space(RandomSource& src, std::size_t n, std::optional<std::size_t> zero_atom = std::nullopt) {
  if (zero_atom && *zero_atom >= n) fail(ErrorCode::Index, "zero atom outside the space");
  std::vector<T> weights;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational w = src.positive_value();
    weights.push_back(zero_atom && *zero_atom == i ? from_int<T>(0) : from_rational<T>(w));
  }
  return make_space<T>(std::move(weights));
}

template <Scalar T>
GridFunction<T> random_grid(RandomSource& src, const SpacePtr<T>& space, std::size_t order) {
  GridFunction<T> g(space, order);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = from_rational<T>(src.signed_value());
  return g;
}

namespace detail {

/// Draws at nondecreasing tuples (ascending flat index) and copies to every
/// permutation.
template <Scalar T, class Draw>
GridFunction<T> symmetric_fill(const SpacePtr<T>& space, std::size_t order, Draw draw) {
  GridFunction<T> g(space, order);
  const std::size_t n = space->size();
  Tuple sorted;
  for (TupleCursor c(n, order); c.flat() < g.size(); c.advance()) {
    sorted = c.tuple();
    if (std::is_sorted(sorted.begin(), sorted.end())) {
      g[c.flat()] = draw();
    } else {
      std::sort(sorted.begin(), sorted.end());
      g[c.flat()] = g[flat_index(sorted, n)];
    }
  }
  return g;
}

template <Scalar T>
T positive_mass(const GridFunction<T>& g) {
  const auto weights = g.space().product_weight_table(g.order());
  T total = from_int<T>(0);
  for (std::size_t i = 0; i < g.size(); ++i) total += g[i] * weights[i];
  return total;
}

}  // namespace detail

template <Scalar T>
GridFunction<T> random_symmetric_grid(RandomSource& src, const SpacePtr<T>& space, std::size_t order) {
  return detail::symmetric_fill(space, order, [&] { return from_rational<T>(src.signed_value()); });
}

/// Nonnegative symmetric values (zeros included) normalized to unit mass.
/// An all-zero draw on the positive support falls back to the uniform density.
template <Scalar T>
SymmetricDensity<T> random_symmetric_density(RandomSource& src, const SpacePtr<T>& space, std::size_t N) {
  SpacePtr<Rational> exact_space;
  if constexpr (std::is_same_v<T, Rational>) {
    exact_space = space;
  } else {
    std::vector<Rational> w;
    for (double x : space->weights()) w.emplace_back(x);
    exact_space = make_space<Rational>(std::move(w));
  }
  GridFunction<Rational> g = detail::symmetric_fill(exact_space, N, [&] { return src.nonnegative_value(); });
  Rational mass = detail::positive_mass(g);
  if (sgn(mass) == 0) {
    g = GridFunction<Rational>::constant(g.space_ptr(), N, Rational(1));
    mass = detail::positive_mass(g);
  }
  GridFunction<T> out(space, N);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = from_rational<T>(Rational(g[i] / mass));
  return SymmetricDensity<T>::make(std::move(out), true);
}

/// P = rho (x) ... (x) rho with rho normalized to unit mass.
template <Scalar T>
SymmetricDensity<T> product_density(const GridFunction<T>& factor, std::size_t N) {
  if (factor.order() != 1) fail(ErrorCode::Domain, "product density needs an order-1 factor");
  const T mass = detail::positive_mass(factor);
  if (sign(mass) <= 0) fail(ErrorCode::Validation, "product factor has no positive mass");
  GridFunction<T> rho = factor;
  for (T& v : rho.values()) {
    if (sign(v) < 0) fail(ErrorCode::Validation, "product factor must be nonnegative");
    v /= mass;
  }
  GridFunction<T> P(factor.space_ptr(), N);
  const std::size_t n = factor.points();
  for (TupleCursor c(n, N); c.flat() < P.size(); c.advance()) {
    T v = from_int<T>(1);
    for (std::size_t x : c.tuple()) v *= rho[x];
    P[c.flat()] = std::move(v);
  }
  return SymmetricDensity<T>::make(std::move(P), true);
}

/// Strictly positive random factor for product densities.
template <Scalar T>
GridFunction<T> random_positive_factor(RandomSource& src, const SpacePtr<T>& space) {
  GridFunction<T> f(space, 1);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = from_rational<T>(src.positive_value());
  return f;
}

}  // namespace gmean
