#pragma once

// Inversion of G_{N,m} up to null sets.
//
// m = 1: fix a positive-weight tail t = (t_2..t_N) and base tuple y. Then
//   C    = sum_i U(y_i, t) - U(y)      (the constant sum_j u(t_j))
//   u(x) = N U(x, t) - C.
// m >= 2: fix a positive-weight tail t of length N-m and write S = U(., t).
//   W = C(N,m) G_{N,m} S - U   is a generalized mean of order m-1, W = G_{N,m-1} w,
//   w is recovered recursively, and u = C(N,m) S - G_{m,m-1} w.
//
// Tails and base tuples default to the lexicographically smallest tuples of
// positive-weight atoms. Kernel values on zero-weight tuples are unconstrained;
// they are reported as 0 and flagged in `undetermined`.

#include <optional>
#include <vector>

#include "gmean/gmean_ops.hpp"

namespace gmean {

template <Scalar T>
struct RecoveryResult {
  GridFunction<T> kernel;
  T residual_sup;    // ess-sup |G_{N,m} kernel - U|
  bool in_range = false;
  std::vector<Tuple> tails;  // one per recursion level, outermost first
  Tuple base;                // base tuple of the order-1 step (empty when m = N)
  MeasurableSet<T> undetermined;
};

struct RecoverOptions {
  std::optional<Tuple> tail;  // outermost tail; inner levels use the default rule
  std::optional<Tuple> base;  // base tuple when m = 1
  ExecPolicy exec;
};

/// 0 in exact mode; 1e-9 (1 + ess-sup|U|) in float mode.
template <Scalar T>
T recovery_tolerance(const GridFunction<T>& U) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(0);
  } else {
    return 1e-9 * (1.0 + ess_sup_norm(U));
  }
}

namespace detail {

template <Scalar T>
Tuple checked_positive_tuple(const MeasureSpace<T>& space, const std::optional<Tuple>& given,
                             std::size_t length, const char* what) {
  if (!given) return smallest_positive_tuple(space, length);
  if (given->size() != length)
    fail(ErrorCode::Domain, std::string(what) + " must have length " + std::to_string(length));
  if (!all_positive(space, *given))
    fail(ErrorCode::Domain, std::string(what) + " must consist of positive-weight points");
  return *given;
}

template <Scalar T>
GridFunction<T> recover_m1_raw(const GridFunction<T>& U, const Tuple& tail, const Tuple& base) {
  const std::size_t N = U.order();
  const std::size_t n = U.points();
  const std::size_t stride = grid_size(n, N - 1);
  const std::size_t tail_flat = flat_index(tail, n);

  T c = from_int<T>(0);
  for (std::size_t y : base) c += U[y * stride + tail_flat];
  c -= U.at(base);

  const T scale = from_uint<T>(N);
  GridFunction<T> u(U.space_ptr(), 1);
  for (std::size_t x = 0; x < n; ++x) u[x] = scale * U[x * stride + tail_flat] - c;
  return u;
}

template <Scalar T>
GridFunction<T> recover_raw(const GridFunction<T>& U, std::size_t m, const std::optional<Tuple>& tail_opt,
                            const std::optional<Tuple>& base_opt, const ExecPolicy& exec,
                            std::vector<Tuple>& tails, Tuple& base) {
  const std::size_t N = U.order();
  if (m == N) return U;
  if (m == 1) {
    const Tuple tail = checked_positive_tuple(U.space(), tail_opt, N - 1, "tail");
    base = checked_positive_tuple(U.space(), base_opt, N, "base tuple");
    tails.push_back(tail);
    return recover_m1_raw(U, tail, base);
  }
  const Tuple tail = checked_positive_tuple(U.space(), tail_opt, N - m, "tail");
  tails.push_back(tail);
  const T scale = from_uint<T>(binom(static_cast<unsigned>(N), static_cast<unsigned>(m)));
  const GridFunction<T> S = section(U, tail);
  const GridFunction<T> W = scale * gmean_apply(S, N, exec) - U;
  const GridFunction<T> omega = recover_raw(W, m - 1, std::nullopt, std::nullopt, exec, tails, base);
  return scale * S - gmean_apply(omega, m, exec);
}

template <Scalar T>
RecoveryResult<T> finalize(GridFunction<T> kernel, const GridFunction<T>& U, std::vector<Tuple> tails,
                           Tuple base, const ExecPolicy& exec, bool zero_null_points = true) {
  MeasurableSet<T> undetermined = positive_support(kernel.space_ptr(), kernel.order()).complement();
  if (zero_null_points)
    for (std::size_t i = 0; i < kernel.size(); ++i)
      if (undetermined.contains(i)) kernel[i] = from_int<T>(0);
  T residual = ess_sup_norm(gmean_apply(kernel, U.order(), exec) - U);
  const bool in_range = residual <= recovery_tolerance(U);
  return RecoveryResult<T>{std::move(kernel), std::move(residual), in_range,
                           std::move(tails), std::move(base), std::move(undetermined)};
}

}  // namespace detail

template <Scalar T>
RecoveryResult<T> recover_kernel_m1(const GridFunction<T>& U, const RecoverOptions& opts = {}) {
  const std::size_t N = U.order();
  if (N < 2) fail(ErrorCode::Domain, "order-1 recovery needs N >= 2");
  std::vector<Tuple> tails;
  Tuple base;
  GridFunction<T> u = detail::recover_raw(U, 1, opts.tail, opts.base, opts.exec, tails, base);
  return detail::finalize(std::move(u), U, std::move(tails), std::move(base), opts.exec);
}

template <Scalar T>
RecoveryResult<T> recover_kernel(const GridFunction<T>& U, std::size_t m, const RecoverOptions& opts = {}) {
  const std::size_t N = U.order();
  if (m < 1 || m > N) fail(ErrorCode::Domain, "recovery needs 1 <= m <= N");
  if (m == N) return detail::finalize(U, U, {}, {}, opts.exec, false);
  std::vector<Tuple> tails;
  Tuple base;
  GridFunction<T> u = detail::recover_raw(U, m, opts.tail, opts.base, opts.exec, tails, base);
  return detail::finalize(std::move(u), U, std::move(tails), std::move(base), opts.exec);
}

template <Scalar T>
struct SectionDecomposition {
  /// parts[k-1] is the order-(m-k) function sum_{|J|=k} u(., t_J), k = 1..M,
  /// M = min(m, N-m). For k = m it is the order-0 constant.
  std::vector<GridFunction<T>> parts;
  GridFunction<T> omega;        // sum_k C(m, m-k) G_{m-1,m-k} parts[k-1]
  T discrepancy;                // max |C(N,m) (G_{N,m} u)(., t) - (u + G_{m,m-1} omega)|
  bool holds = false;
};

template <Scalar T>
SectionDecomposition<T> decompose_section(const GridFunction<T>& u, std::size_t N, const Tuple& tail) {
  const std::size_t m = u.order();
  if (m < 2 || m >= N) fail(ErrorCode::Domain, "section decomposition needs 2 <= m < N");
  if (tail.size() != N - m) fail(ErrorCode::Domain, "tail must have length N - m");
  const std::size_t n = u.points();
  flat_index(tail, n);  // range check

  const std::size_t M = std::min(m, N - m);
  std::vector<GridFunction<T>> parts;
  for (std::size_t k = 1; k <= M; ++k) {
    GridFunction<T> v(u.space_ptr(), m - k);
    const std::size_t stride = grid_size(n, k);
    for (CombEnumerator e(static_cast<unsigned>(N - m), static_cast<unsigned>(k)); !e.done(); e.next()) {
      Tuple chosen;
      for (unsigned j : e.current()) chosen.push_back(tail[j]);
      const std::size_t chosen_flat = flat_index(chosen, n);
      for (std::size_t z = 0; z < v.size(); ++z) v[z] += u[z * stride + chosen_flat];
    }
    parts.push_back(std::move(v));
  }

  GridFunction<T> omega(u.space_ptr(), m - 1);
  for (std::size_t k = 1; k <= M; ++k) {
    const T coeff = from_uint<T>(binom(static_cast<unsigned>(m), static_cast<unsigned>(m - k)));
    omega += coeff * gmean_apply(parts[k - 1], m - 1);
  }

  const T scale = from_uint<T>(binom(static_cast<unsigned>(N), static_cast<unsigned>(m)));
  const GridFunction<T> lhs = scale * section(gmean_apply(u, N), tail);
  const GridFunction<T> rhs = u + gmean_apply(omega, m);
  T worst = from_int<T>(0);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    T d = scalar_abs(T(lhs[i] - rhs[i]));
    if (d > worst) worst = std::move(d);
  }
  bool holds;
  if constexpr (std::is_same_v<T, Rational>) {
    holds = sign(worst) == 0;
  } else {
    holds = worst <= 1e-9 * (1.0 + ess_sup_norm(lhs));
  }
  return SectionDecomposition<T>{std::move(parts), std::move(omega), std::move(worst), holds};
}

struct OracleResult {
  RecoveryResult<Rational> result;
  bool consistent = false;              // elimination verdict; must match result.in_range
  std::size_t rank = 0;
  std::size_t support_unknowns = 0;     // kernel points of positive product weight
  bool full_column_rank_on_support = false;
};

/// Independent check of recover_kernel: assembles the linear system
/// A u = U over N-tuples of positive product weight, A(t, s) = C(N,m)^{-1} *
/// #{increasing selections of t equal to s}, and solves it by exact Gaussian
/// elimination. Free coordinates are set to 0.
OracleResult oracle_solve(const GridFunction<Rational>& U, std::size_t m, std::size_t max_unknowns = 512);

template <Scalar T>
struct ConvergenceReport {
  std::vector<T> kernel_increments;  // ess-sup |u_{k+1} - u_k|
  std::vector<T> mean_increments;    // ess-sup |G u_{k+1} - G u_k|
  bool bound_holds = true;           // mean increment <= kernel increment at every step
};

template <Scalar T>
ConvergenceReport<T> convergence_equivalence_report(const std::vector<GridFunction<T>>& kernels, std::size_t N) {
  if (kernels.empty()) fail(ErrorCode::Domain, "convergence report needs at least one kernel");
  for (const auto& k : kernels) kernels.front().check_compatible(k);
  ConvergenceReport<T> report;
  std::optional<GridFunction<T>> prev_mean;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    GridFunction<T> mean = gmean_apply(kernels[i], N);
    if (i > 0) {
      T d = ess_sup_norm(kernels[i] - kernels[i - 1]);
      T D = ess_sup_norm(mean - *prev_mean);
      bool ok;
      if constexpr (std::is_same_v<T, Rational>) {
        ok = D <= d;
      } else {
        ok = D <= d * (1.0 + 1e-12) + 1e-300;
      }
      report.bound_holds = report.bound_holds && ok;
      report.kernel_increments.push_back(std::move(d));
      report.mean_increments.push_back(std::move(D));
    }
    prev_mean = std::move(mean);
  }
  return report;
}

}  // namespace gmean
