#pragma once

// The generalized N-mean of order m,
//
//   (G_{N,m} u)(x_1..x_N) = C(N,m)^{-1} * sum_{i_1<...<i_m} u(x_{i_1}, ..., x_{i_m}),
//
// and the set lift B_{N,m} E = { x in Lambda^N : every increasing m-subtuple of x lies in E }.
// Kernels are never symmetrized: u is always applied to its arguments in
// increasing position order.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <vector>

#include "gmean/combinatorics.hpp"
#include "gmean/measure.hpp"
#include "gmean/parallel.hpp"

namespace gmean {

namespace detail {

/// Subsets of positions flattened to one array: subset s occupies [s*m, s*m+m).
struct PositionTable {
  std::vector<unsigned> positions;
  std::size_t count = 0;
  std::size_t m = 0;

  PositionTable(unsigned N, unsigned m_) : m(m_) {
    for (CombEnumerator e(N, m_); !e.done(); e.next()) {
      positions.insert(positions.end(), e.current().begin(), e.current().end());
      ++count;
    }
  }
  const unsigned* subset(std::size_t s) const { return positions.data() + s * m; }
};

inline std::size_t kernel_index(const Tuple& digits, const unsigned* subset, std::size_t m,
                                 std::size_t n) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < m; ++j) idx = idx * n + digits[subset[j]];
  return idx;
}

/// Kernel index of the sorted selection; equal to kernel_index for symmetric kernels.
inline std::size_t sorted_kernel_index(const Tuple& digits, const unsigned* subset, std::size_t m,
                                       std::size_t n, std::vector<std::size_t>& scratch) {
  scratch.resize(m);
  for (std::size_t j = 0; j < m; ++j) scratch[j] = digits[subset[j]];
  std::sort(scratch.begin(), scratch.end());
  std::size_t idx = 0;
  for (std::size_t x : scratch) idx = idx * n + x;
  return idx;
}

inline void check_orders(std::size_t m, std::size_t N) {
  if (m > N) fail(ErrorCode::Domain, "generalized mean needs m <= N");
}

}  // namespace detail

template <Scalar T>
GridFunction<T> gmean_apply(const GridFunction<T>& u, std::size_t N, const ExecPolicy& policy = {}) {
  const std::size_t m = u.order();
  detail::check_orders(m, N);
  if (m == N) return u;
  if (m == 0) return GridFunction<T>::constant(u.space_ptr(), N, u[0]);

  const std::size_t n = u.points();
  const detail::PositionTable table(static_cast<unsigned>(N), static_cast<unsigned>(m));
  const T scale = from_uint<T>(binom(static_cast<unsigned>(N), static_cast<unsigned>(m)));
  GridFunction<T> out(u.space_ptr(), N);

  parallel_for(out.size(), policy, [&](std::size_t begin, std::size_t end) {
    TupleCursor cursor(n, N, begin);
    for (std::size_t i = begin; i < end; ++i, cursor.advance()) {
      T acc = from_int<T>(0);
      for (std::size_t s = 0; s < table.count; ++s)
        acc += u[detail::kernel_index(cursor.tuple(), table.subset(s), m, n)];
      acc /= scale;
      out[i] = std::move(acc);
    }
  });
  return out;
}

/// Exact equality under every permutation of the arguments (checked through
/// adjacent transpositions on every tuple).
template <Scalar T>
bool is_exactly_symmetric(const GridFunction<T>& u) {
  const std::size_t n = u.points();
  const std::size_t k = u.order();
  if (k < 2) return true;
  Tuple swapped(k);
  for (TupleCursor c(n, k); c.flat() < u.size(); c.advance()) {
    for (std::size_t j = 0; j + 1 < k; ++j) {
      if (c.tuple()[j] <= c.tuple()[j + 1]) continue;
      swapped = c.tuple();
      std::swap(swapped[j], swapped[j + 1]);
      if (!(u[c.flat()] == u[flat_index(swapped, n)])) return false;
    }
  }
  return true;
}

/// Symmetry with the mode's tolerance: exact equality for rationals,
/// max |u(t) - u(sigma t)| <= 1e-12 (1 + max|u|) for doubles.
template <Scalar T>
bool is_symmetric(const GridFunction<T>& u) {
  if constexpr (std::is_same_v<T, Rational>) {
    return is_exactly_symmetric(u);
  } else {
    const std::size_t n = u.points();
    const std::size_t k = u.order();
    if (k < 2) return true;
    double max_abs = 0.0;
    for (double v : u.values()) max_abs = std::max(max_abs, std::fabs(v));
    const double tol = 1e-12 * (1.0 + max_abs);
    Tuple swapped(k);
    for (TupleCursor c(n, k); c.flat() < u.size(); c.advance()) {
      for (std::size_t j = 0; j + 1 < k; ++j) {
        swapped = c.tuple();
        std::swap(swapped[j], swapped[j + 1]);
        if (std::fabs(u[c.flat()] - u[flat_index(swapped, n)]) > tol) return false;
      }
    }
    return true;
  }
}

struct GroupedStats {
  std::uint64_t kernel_reads = 0;
  bool used_symmetry = false;
};

/// Kernel reads performed by gmean_apply: C(N,m) * n^N.
inline std::uint64_t naive_kernel_reads(std::size_t n, std::size_t N, std::size_t m) {
  return binom(static_cast<unsigned>(N), static_cast<unsigned>(m)) * grid_size(n, N);
}

/// Same values as gmean_apply, bit for bit. Each output point caches the
/// kernel values it has already read; repeated coordinates hit the cache, and
/// an exactly symmetric kernel is keyed by the sorted selection so permuted
/// selections share one read. The summation order per point is unchanged.
template <Scalar T>
GridFunction<T> gmean_apply_grouped(const GridFunction<T>& u, std::size_t N,
                                    const ExecPolicy& policy = {}, GroupedStats* stats = nullptr) {
  const std::size_t m = u.order();
  detail::check_orders(m, N);
  GroupedStats local;
  if (m == N || m == 0) {
    local.kernel_reads = m == N ? u.size() : 1;
    if (stats) *stats = local;
    return gmean_apply(u, N, policy);
  }

  const std::size_t n = u.points();
  const bool symmetric = is_exactly_symmetric(u);
  local.used_symmetry = symmetric;
  const detail::PositionTable table(static_cast<unsigned>(N), static_cast<unsigned>(m));
  const T scale = from_uint<T>(binom(static_cast<unsigned>(N), static_cast<unsigned>(m)));
  GridFunction<T> out(u.space_ptr(), N);

  std::atomic<std::uint64_t> reads{0};

  parallel_for(out.size(), policy, [&](std::size_t begin, std::size_t end) {
    std::uint64_t my_reads = 0;
    std::vector<std::size_t> keys, scratch;
    std::vector<const T*> cached;
    keys.reserve(table.count);
    cached.reserve(table.count);
    TupleCursor cursor(n, N, begin);
    for (std::size_t i = begin; i < end; ++i, cursor.advance()) {
      keys.clear();
      cached.clear();
      T acc = from_int<T>(0);
      for (std::size_t s = 0; s < table.count; ++s) {
        const std::size_t key =
            symmetric ? detail::sorted_kernel_index(cursor.tuple(), table.subset(s), m, n, scratch)
                      : detail::kernel_index(cursor.tuple(), table.subset(s), m, n);
        const auto hit = std::find(keys.begin(), keys.end(), key);
        const T* value;
        if (hit != keys.end()) {
          value = cached[static_cast<std::size_t>(hit - keys.begin())];
        } else {
          value = &u[key];
          ++my_reads;
          keys.push_back(key);
          cached.push_back(value);
        }
        acc += *value;
      }
      acc /= scale;
      out[i] = std::move(acc);
    }
    reads += my_reads;
  });
  local.kernel_reads = reads.load();
  if (stats) *stats = local;
  return out;
}

template <Scalar T>
MeasurableSet<T> bhat(const MeasurableSet<T>& E, std::size_t N, const ExecPolicy& policy = {}) {
  const std::size_t m = E.order();
  if (m == 0 || m > N) fail(ErrorCode::Domain, "set lift needs 1 <= m <= N");
  const std::size_t n = E.space().size();
  const detail::PositionTable table(static_cast<unsigned>(N), static_cast<unsigned>(m));
  std::vector<char> indicator(grid_size(n, N), 0);
  parallel_for(indicator.size(), policy, [&](std::size_t begin, std::size_t end) {
    TupleCursor cursor(n, N, begin);
    for (std::size_t i = begin; i < end; ++i, cursor.advance()) {
      bool all = true;
      for (std::size_t s = 0; s < table.count && all; ++s)
        all = E.contains(detail::kernel_index(cursor.tuple(), table.subset(s), m, n));
      indicator[i] = all ? 1 : 0;
    }
  });
  return MeasurableSet<T>(E.space_ptr(), N, std::move(indicator));
}

template <Scalar T>
struct Lemma1Report {
  bool input_conull = false;
  bool image_conull = false;
  T input_complement_measure;
  T image_complement_measure;
  MeasurableSet<T> image;

  /// A violated precondition is reported, not thrown; the lemma itself only
  /// claims something for co-null input.
  bool precondition_violated() const { return !input_conull; }
};

template <Scalar T>
Lemma1Report<T> check_lemma1(const MeasurableSet<T>& conull_set, std::size_t N) {
  MeasurableSet<T> image = bhat(conull_set, N);
  T in_c = measure_of(conull_set.complement());
  T out_c = measure_of(image.complement());
  const bool in_ok = sign(in_c) == 0;
  const bool out_ok = sign(out_c) == 0;
  return Lemma1Report<T>{in_ok, out_ok, std::move(in_c), std::move(out_c), std::move(image)};
}

template <Scalar T>
struct Lemma2Report {
  bool holds = false;
  T discrepancy;  // max |G_{N,m} G_{m,k} u - G_{N,k} u| over the full grid
};

template <Scalar T>
Lemma2Report<T> check_lemma2(const GridFunction<T>& u, std::size_t m, std::size_t N) {
  const std::size_t k = u.order();
  if (!(k <= m && m <= N)) fail(ErrorCode::Domain, "composition check needs k <= m <= N");
  const GridFunction<T> lhs = gmean_apply(gmean_apply(u, m), N);
  const GridFunction<T> rhs = gmean_apply(u, N);
  T worst = from_int<T>(0);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    T d = scalar_abs(T(lhs[i] - rhs[i]));
    if (d > worst) worst = std::move(d);
  }
  bool holds;
  if constexpr (std::is_same_v<T, Rational>) {
    holds = sign(worst) == 0;
  } else {
    double max_abs = 0.0;
    for (double v : u.values()) max_abs = std::max(max_abs, std::fabs(v));
    holds = worst <= 1e-12 * (1.0 + max_abs);
  }
  return Lemma2Report<T>{holds, std::move(worst)};
}

}  // namespace gmean
