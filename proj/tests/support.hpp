#pragma once

// Test helpers: a hand-rolled instance generator (independent of the
// library's RandomSource) and brute-force reference implementations.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "gmean/measure.hpp"

namespace testing {

using gmean::GridFunction;
using gmean::MeasurableSet;
using gmean::Rational;
using gmean::SpacePtr;
using gmean::Tuple;

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline SpacePtr<Rational> space(std::initializer_list<long> weights) {
  std::vector<Rational> w;
  for (long x : weights) w.push_back(q(x));
  return gmean::make_space<Rational>(std::move(w));
}

inline SpacePtr<Rational> unit_space(std::size_t n) { return gmean::make_space<Rational>(std::vector<Rational>(n, 1)); }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }

  Rational rational() { return q(integer(-12, 12), integer(1, 5)); }
  Rational positive() { return q(integer(1, 9), integer(1, 4)); }
  Rational nonnegative() { return integer(0, 3) == 0 ? q(0) : positive(); }

  SpacePtr<Rational> weights(std::size_t n, bool with_zero) {
    std::vector<Rational> w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(positive());
    if (with_zero) w[static_cast<std::size_t>(integer(0, static_cast<long>(n) - 1))] = 0;
    return gmean::make_space<Rational>(std::move(w));
  }

  GridFunction<Rational> grid(const SpacePtr<Rational>& s, std::size_t order) {
    GridFunction<Rational> g(s, order);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = rational();
    return g;
  }

  /// Symmetric values; draw at sorted tuples, copy elsewhere.
  GridFunction<Rational> symmetric(const SpacePtr<Rational>& s, std::size_t order, bool nonneg = false) {
    GridFunction<Rational> g(s, order);
    const std::size_t n = s->size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      Tuple t = gmean::unflatten(i, n, order);
      Tuple sorted = t;
      std::sort(sorted.begin(), sorted.end());
      g[i] = t == sorted ? (nonneg ? nonnegative() : rational()) : g[gmean::flat_index(sorted, n)];
    }
    return g;
  }

  MeasurableSet<Rational> set(const SpacePtr<Rational>& s, std::size_t order) {
    MeasurableSet<Rational> out(s, order);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (integer(0, 2) != 0) out.insert(i);
    return out;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Mean over all N-bit masks with m set bits; arguments in increasing position.
template <class T>
GridFunction<T> brute_gmean(const GridFunction<T>& u, std::size_t N) {
  const std::size_t n = u.points();
  const std::size_t m = u.order();
  GridFunction<T> out(u.space_ptr(), N);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Tuple t = gmean::unflatten(i, n, N);
    T sum = 0;
    long count = 0;
    for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != m) continue;
      Tuple args;
      for (std::size_t p = 0; p < N; ++p)
        if (mask & (1u << p)) args.push_back(t[p]);
      sum += m == 0 ? u[0] : u.at(args);
      ++count;
    }
    out[i] = sum / T(count);
  }
  return out;
}

/// Brute-force marginal: sum the trailing coordinates against their weights.
template <class T>
GridFunction<T> brute_marginal(const GridFunction<T>& P, std::size_t m) {
  const std::size_t n = P.points();
  GridFunction<T> out(P.space_ptr(), m);
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Tuple t = gmean::unflatten(i, n, P.order());
    T w = 1;
    for (std::size_t j = m; j < t.size(); ++j) w *= P.space().weight(t[j]);
    const Tuple head(t.begin(), t.begin() + static_cast<long>(m));
    out[m == 0 ? 0 : gmean::flat_index(head, n)] += P[i] * w;
  }
  return out;
}

template <class T>
bool equal_on_support(const GridFunction<T>& a, const GridFunction<T>& b) {
  const std::size_t n = a.points();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Tuple t = gmean::unflatten(i, n, a.order());
    if (gmean::sign(a.space().product_weight(t)) > 0 && !(a[i] == b[i])) return false;
  }
  return true;
}

}  // namespace testing
