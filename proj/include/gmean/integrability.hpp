#pragma once

// Symmetric densities P on Lambda^N, their marginals rho^(m), and the
// domination condition
//
//   P(., x_N) >= gamma(x_N) rho^(N-1)   a.e., for x_N in a set A of positive measure,
//
// under which ||G_{N,m} u||_{r,P} and ||u||_{r,rho^(m)} are equivalent norms.

#include <cstdint>
#include <optional>
#include <vector>

#include "gmean/gmean_ops.hpp"

namespace gmean {

template <Scalar T>
class SymmetricDensity {
 public:
  /// Validates nonnegativity, permutation symmetry on tuples of positive
  /// product weight, and (unless waived) unit normalization.
  static SymmetricDensity make(GridFunction<T> P, bool require_normalized = true) {
    require(P.order() >= 1, ErrorCode::Validation, "density needs order >= 1");
    for (const T& v : P.values()) require(sign(v) >= 0, ErrorCode::Validation, "density must be nonnegative");

    const std::size_t n = P.points();
    const std::size_t N = P.order();
    const auto positive = P.space().positive_table(N);
    double tol = 0.0;
    if constexpr (std::is_same_v<T, double>) {
      for (double v : P.values()) tol = std::max(tol, v);
      tol *= 1e-12;
    }
    Tuple swapped(N);
    for (TupleCursor c(n, N); c.flat() < P.size(); c.advance()) {
      if (!positive[c.flat()]) continue;
      for (std::size_t j = 0; j + 1 < N; ++j) {
        if (c.tuple()[j] <= c.tuple()[j + 1]) continue;
        swapped = c.tuple();
        std::swap(swapped[j], swapped[j + 1]);
        const T& a = P[c.flat()];
        const T& b = P[flat_index(swapped, n)];
        bool equal;
        if constexpr (std::is_same_v<T, Rational>) {
          equal = a == b;
        } else {
          equal = std::fabs(a - b) <= tol;
        }
        if (!equal) fail(ErrorCode::Validation, "density is not symmetric under coordinate permutation");
      }
    }

    const auto weights = P.space().product_weight_table(N);
    T total = from_int<T>(0);
    for (std::size_t i = 0; i < P.size(); ++i) total += P[i] * weights[i];
    require(sign(total) > 0, ErrorCode::Validation, "density has zero total mass");
    if (require_normalized) {
      bool unit;
      if constexpr (std::is_same_v<T, Rational>) {
        unit = total == 1;
      } else {
        unit = std::fabs(total - 1.0) <= 1e-9;
      }
      require(unit, ErrorCode::Validation, "density must integrate to 1");
    }
    return SymmetricDensity(std::move(P), std::move(total));
  }

  const GridFunction<T>& grid() const noexcept { return P_; }
  const SpacePtr<T>& space_ptr() const noexcept { return P_.space_ptr(); }
  const MeasureSpace<T>& space() const noexcept { return P_.space(); }
  std::size_t order() const noexcept { return P_.order(); }
  const T& normalization() const noexcept { return normalization_; }

 private:
  SymmetricDensity(GridFunction<T> P, T normalization)
      : P_(std::move(P)), normalization_(std::move(normalization)) {}

  GridFunction<T> P_;
  T normalization_;
};

/// rho^(m)(x_1..x_m) = sum over (x_{m+1}..x_N) of P(x) * prod_{j>m} w_{x_j},
/// summed in ascending tail index. m = 0 gives the total mass as an order-0 grid.
template <Scalar T>
GridFunction<T> marginal(const SymmetricDensity<T>& P, std::size_t m, const ExecPolicy& policy = {}) {
  const std::size_t N = P.order();
  if (m >= N) fail(ErrorCode::Domain, "marginal needs m < N");
  const auto tail_weights = P.space().product_weight_table(N - m);
  const std::size_t stride = tail_weights.size();
  GridFunction<T> rho(P.space_ptr(), m);
  parallel_for(rho.size(), policy, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      T acc = from_int<T>(0);
      for (std::size_t t = 0; t < stride; ++t)
        if (sign(tail_weights[t]) != 0) acc += P.grid()[i * stride + t] * tail_weights[t];
      rho[i] = std::move(acc);
    }
  });
  return rho;
}

/// rho^(m) for m < N, P itself for m = N.
template <Scalar T>
GridFunction<T> marginal_or_self(const SymmetricDensity<T>& P, std::size_t m) {
  return m == P.order() ? P.grid() : marginal(P, m);
}

template <Scalar T>
struct DominationCertificate {
  std::vector<T> gamma;  // per atom; 0 on zero-weight atoms
  MeasurableSet<T> A;    // {x : w_x > 0, gamma(x) > 0}
  T measure_A;
  bool condition_holds = false;  // |A| > 0
  // Populated when the condition holds; otherwise epsilon = alpha = 0, A_eps empty.
  T epsilon;
  MeasurableSet<T> A_eps;  // {x in A : gamma(x) >= epsilon}
  T measure_A_eps;
  T alpha;  // (epsilon |A_eps|)^{-1}
};

/// gamma(x_N) = ess-inf over (N-1)-tuples of f(., x_N), with f = P / rho^(N-1)
/// where rho^(N-1) > 0 and f = 1 elsewhere. epsilon is the positive value of
/// gamma maximising epsilon * |A_eps| (ties: the smaller epsilon).
template <Scalar T>
DominationCertificate<T> extract_gamma(const SymmetricDensity<T>& P) {
  const std::size_t N = P.order();
  if (N < 2) fail(ErrorCode::Domain, "domination condition needs N >= 2");
  const auto& space = P.space();
  const std::size_t n = space.size();
  const GridFunction<T> rho = marginal(P, N - 1);
  const auto head_positive = space.positive_table(N - 1);

  std::vector<T> gamma(n, from_int<T>(0));
  bool any_head = false;
  for (char b : head_positive) any_head = any_head || b;
  if (!any_head) fail(ErrorCode::EmptySupport, "no (N-1)-tuple of positive product weight");

  const T one = from_int<T>(1);
  for (std::size_t x = 0; x < n; ++x) {
    if (!space.positive(x)) continue;
    std::optional<T> best;
    for (std::size_t z = 0; z < rho.size(); ++z) {
      if (!head_positive[z]) continue;
      T f = sign(rho[z]) > 0 ? T(P.grid()[z * n + x] / rho[z]) : one;
      if (!best || f < *best) best = std::move(f);
    }
    gamma[x] = std::move(*best);
  }

  MeasurableSet<T> A(P.space_ptr(), 1);
  for (std::size_t x = 0; x < n; ++x)
    if (space.positive(x) && sign(gamma[x]) > 0) A.insert(x);
  T measure_A = measure_of(A);

  DominationCertificate<T> cert{std::move(gamma), A, measure_A, sign(measure_A) > 0, from_int<T>(0),
                                MeasurableSet<T>(P.space_ptr(), 1), from_int<T>(0), from_int<T>(0)};
  if (!cert.condition_holds) return cert;

  std::vector<T> levels;
  for (std::size_t x = 0; x < n; ++x)
    if (A.contains(x)) levels.push_back(cert.gamma[x]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::optional<T> best_score;
  for (const T& eps : levels) {
    T mass = from_int<T>(0);
    for (std::size_t x = 0; x < n; ++x)
      if (A.contains(x) && cert.gamma[x] >= eps) mass += space.weight(x);
    T score = eps * mass;
    if (!best_score || score > *best_score) {  // strict: ties keep the smaller epsilon
      best_score = score;
      cert.epsilon = eps;
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    if (A.contains(x) && cert.gamma[x] >= cert.epsilon) cert.A_eps.insert(x);
  cert.measure_A_eps = measure_of(cert.A_eps);
  cert.alpha = one / (cert.epsilon * cert.measure_A_eps);
  return cert;
}

template <Scalar T>
struct CascadeReport {
  bool holds = true;        // P >= gamma(x_N)...gamma(x_{m+1}) rho^(m) on Lambda^m x A^{N-m}
  T worst_margin;           // min of P - product over checked tuples (0 if none)
  bool steps_hold = true;   // rho^(j+1) >= gamma(x_{j+1}) rho^(j) on Lambda^j x A, j = 1..N-1
  T worst_step_margin;
  std::size_t checked = 0;  // tuples entering the chain check
};

template <Scalar T>
CascadeReport<T> check_cascade(const SymmetricDensity<T>& P, const DominationCertificate<T>& cert,
                               std::size_t m) {
  const std::size_t N = P.order();
  if (m < 1 || m >= N) fail(ErrorCode::Domain, "cascade check needs 1 <= m <= N-1");
  const std::size_t n = P.space().size();
  const auto positive = P.space().positive_table(N);
  CascadeReport<T> report{true, from_int<T>(0), true, from_int<T>(0), 0};

  const GridFunction<T> rho_m = marginal(P, m);
  std::optional<T> worst;
  const std::size_t stride = grid_size(n, N - m);
  for (TupleCursor c(n, N); c.flat() < P.grid().size(); c.advance()) {
    if (!positive[c.flat()]) continue;
    bool in_A = true;
    for (std::size_t j = m; j < N && in_A; ++j) in_A = cert.A.contains(c.tuple()[j]);
    if (!in_A) continue;
    T bound = rho_m[c.flat() / stride];
    for (std::size_t j = m; j < N; ++j) bound *= cert.gamma[c.tuple()[j]];
    T margin = P.grid()[c.flat()] - bound;
    if (!worst || margin < *worst) worst = std::move(margin);
    ++report.checked;
  }
  // Float mode allows rounding slack relative to the largest density value.
  T slack = from_int<T>(0);
  if constexpr (std::is_same_v<T, double>) {
    for (double v : P.grid().values()) slack = std::max(slack, v);
    slack *= -1e-12;
  }
  if (worst) {
    report.holds = *worst >= slack;
    report.worst_margin = *worst;
  }

  std::optional<T> worst_step;
  for (std::size_t j = 1; j < N; ++j) {
    const GridFunction<T> upper = marginal_or_self(P, j + 1);
    const GridFunction<T> lower = marginal(P, j);
    const auto pos = P.space().positive_table(j + 1);
    for (std::size_t i = 0; i < upper.size(); ++i) {
      const std::size_t last = i % n;
      if (!pos[i] || !cert.A.contains(last)) continue;
      T margin = upper[i] - cert.gamma[last] * lower[i / n];
      if (!worst_step || margin < *worst_step) worst_step = std::move(margin);
    }
  }
  if (worst_step) {
    report.steps_hold = *worst_step >= slack;
    report.worst_step_margin = *worst_step;
  }
  return report;
}

template <Scalar T>
struct TSetReport {
  MeasurableSet<T> set;  // order N-m, subset of A_eps^{N-m}
  T measure;
  bool positive = false;
  std::optional<T> threshold;  // alpha^{N-m} ||U||^r_{r,P} when representable
};

/// Tails t in A_eps^{N-m} with ||U(., t)||^r_{r,rho^(m)} <= alpha^{N-m} ||U||^r_{r,P}.
template <Scalar T>
TSetReport<T> t_set(const GridFunction<T>& U, const SymmetricDensity<T>& P, const DominationCertificate<T>& cert,
                    std::size_t m, double r) {
  const std::size_t N = P.order();
  if (U.order() != N) fail(ErrorCode::Domain, "mean and density orders differ");
  if (m < 1 || m >= N) fail(ErrorCode::Domain, "T-set needs 1 <= m <= N-1");
  if (!cert.condition_holds) fail(ErrorCode::Precondition, "domination condition does not hold");
  const std::size_t n = P.space().size();
  const GridFunction<T> rho_m = marginal(P, m);
  const LrNorm<T> whole = weighted_lr_norm(U, P.grid(), r);

  std::optional<T> threshold;
  if (whole.power) threshold = ipow(cert.alpha, static_cast<unsigned>(N - m)) * *whole.power;
  const double threshold_f =
      std::pow(to_double(cert.alpha), static_cast<double>(N - m)) * std::pow(whole.value, r);

  TSetReport<T> report{MeasurableSet<T>(P.space_ptr(), N - m), from_int<T>(0), false, threshold};
  for (TupleCursor c(n, N - m); c.flat() < report.set.size(); c.advance()) {
    bool in_eps = true;
    for (std::size_t x : c.tuple()) in_eps = in_eps && cert.A_eps.contains(x);
    if (!in_eps) continue;
    const LrNorm<T> part = weighted_lr_norm(section(U, c.tuple()), rho_m, r);
    bool inside;
    if (part.power && threshold) {
      if constexpr (std::is_same_v<T, Rational>) {
        inside = *part.power <= *threshold;
      } else {
        inside = *part.power <= *threshold * (1.0 + 1e-9);
      }
    } else {
      inside = std::pow(part.value, r) <= threshold_f * (1.0 + 1e-9);
    }
    if (inside) report.set.insert(c.flat());
  }
  report.measure = measure_of(report.set);
  report.positive = sign(report.measure) > 0;
  return report;
}

/// C(N,1) = 1; C(N,m) = C(N,m) (1 + C(N,m-1)) + C(N,m-1); 1 for m = N.
std::uint64_t theorem2_constant(unsigned N, unsigned m);

/// C(N,1) = 2N alpha^{(N-1)/r} + 1;
/// C(N,m) = C(N,m) alpha^{(N-m)/r} (1 + C(N,m-1)) + C(N,m-1).
double theorem3_constant(unsigned N, unsigned m, double r, double alpha);

/// The same constant in exact arithmetic, available when every power
/// alpha^{(N-j)/r} along the recursion is rational (e.g. r = 1).
std::optional<Rational> theorem3_constant_exact(unsigned N, unsigned m, unsigned r, const Rational& alpha);

/// Rational lo <= C <= hi for integral r, within about 2^-64 relative; lo == hi when C is rational.
std::pair<Rational, Rational> theorem3_constant_bounds(unsigned N, unsigned m, unsigned r, const Rational& alpha);

template <Scalar T>
struct Theorem2Report {
  T mean_norm;    // ||G_{N,m} u||_inf
  T kernel_norm;  // ||u||_inf
  std::uint64_t constant = 1;
  bool lower_holds = false;  // mean_norm <= kernel_norm
  bool upper_holds = false;  // kernel_norm <= constant * mean_norm
  bool holds() const { return lower_holds && upper_holds; }
};

template <Scalar T>
Theorem2Report<T> verify_theorem2(const GridFunction<T>& u, std::size_t N) {
  const std::size_t m = u.order();
  if (m < 1 || m > N) fail(ErrorCode::Domain, "L-infinity sandwich needs 1 <= m <= N");
  T mean_norm = ess_sup_norm(gmean_apply(u, N));
  T kernel_norm = ess_sup_norm(u);
  const std::uint64_t c = theorem2_constant(static_cast<unsigned>(N), static_cast<unsigned>(m));
  Theorem2Report<T> out{mean_norm, kernel_norm, c, false, false};
  if constexpr (std::is_same_v<T, Rational>) {
    out.lower_holds = mean_norm <= kernel_norm;
    out.upper_holds = kernel_norm <= from_uint<T>(c) * mean_norm;
  } else {
    out.lower_holds = mean_norm <= kernel_norm * (1.0 + 1e-12);
    out.upper_holds = kernel_norm <= static_cast<double>(c) * mean_norm * (1.0 + 1e-12);
  }
  return out;
}

template <Scalar T>
struct Theorem3Report {
  std::size_t N = 0;
  std::size_t m = 0;
  double r = 1.0;
  LrNorm<T> mean_norm;    // ||G_{N,m} u||_{r,P}
  LrNorm<T> kernel_norm;  // ||u||_{r,rho^(m)}
  bool if_direction_holds = false;
  bool condition_holds = false;
  std::optional<T> alpha;
  std::optional<double> constant;
  std::optional<T> constant_exact;
  std::optional<bool> only_if_holds;  // empty when the condition fails
  bool only_if_exact = false;         // only_if_holds was decided in exact arithmetic
  double ratio = 0.0;                 // kernel_norm / mean_norm
};

namespace detail {

template <Scalar T>
bool norm_leq(const LrNorm<T>& a, const LrNorm<T>& b) {
  if (a.power && b.power) {
    if constexpr (std::is_same_v<T, Rational>) {
      return *a.power <= *b.power;
    } else {
      return *a.power <= *b.power * (1.0 + 1e-9) + 1e-300;
    }
  }
  return a.value <= b.value * (1.0 + 1e-9) + 1e-300;
}

}  // namespace detail

/// Checks ||U||_{r,P} <= ||u||_{r,rho^(m)} <= C ||U||_{r,P}, U = G_{N,m} u.
/// The left inequality needs no hypothesis; the right one is asserted only
/// when extract_gamma certifies the domination condition.
template <Scalar T>
Theorem3Report<T> verify_theorem3(const SymmetricDensity<T>& P, const GridFunction<T>& u, double r) {
  const std::size_t N = P.order();
  const std::size_t m = u.order();
  if (m < 1 || m > N) fail(ErrorCode::Domain, "integrability sandwich needs 1 <= m <= N");
  Theorem3Report<T> out;
  out.N = N;
  out.m = m;
  out.r = r;
  out.mean_norm = weighted_lr_norm(gmean_apply(u, N), P.grid(), r);
  out.kernel_norm = weighted_lr_norm(u, marginal_or_self(P, m), r);
  out.if_direction_holds = detail::norm_leq(out.mean_norm, out.kernel_norm);
  out.ratio = out.mean_norm.value > 0 ? out.kernel_norm.value / out.mean_norm.value
                                      : (out.kernel_norm.value > 0 ? INFINITY : 1.0);

  if (m == N) {
    // U = u: both norms coincide and C = 1 needs no hypothesis.
    if (N >= 2) out.condition_holds = extract_gamma(P).condition_holds;
    out.constant = 1.0;
    out.constant_exact = from_int<T>(1);
    out.only_if_holds = detail::norm_leq(out.kernel_norm, out.mean_norm);
    out.only_if_exact = std::is_same_v<T, Rational> && out.kernel_norm.power && out.mean_norm.power;
    return out;
  }

  const DominationCertificate<T> cert = extract_gamma(P);
  out.condition_holds = cert.condition_holds;
  if (!cert.condition_holds) return out;
  out.alpha = cert.alpha;

  {
    out.constant = theorem3_constant(static_cast<unsigned>(N), static_cast<unsigned>(m), r, to_double(cert.alpha));
    if constexpr (std::is_same_v<T, Rational>) {
      if (is_integral_exponent(r))
        out.constant_exact = theorem3_constant_exact(static_cast<unsigned>(N), static_cast<unsigned>(m),
                                                     static_cast<unsigned>(r), cert.alpha);
    }
  }

  // ||u|| <= C ||U||: in exact mode with integral r the r-th powers are
  // compared against rational bounds on C, falling back to double only when
  // the bounds straddle the comparison.
  if constexpr (std::is_same_v<T, Rational>) {
    if (is_integral_exponent(r) && out.kernel_norm.power && out.mean_norm.power) {
      const auto ri = static_cast<unsigned>(r);
      const auto [lo, hi] =
          theorem3_constant_bounds(static_cast<unsigned>(N), static_cast<unsigned>(m), ri, cert.alpha);
      if (*out.kernel_norm.power <= ipow(lo, ri) * *out.mean_norm.power) {
        out.only_if_holds = true;
        out.only_if_exact = true;
      } else if (*out.kernel_norm.power > ipow(hi, ri) * *out.mean_norm.power) {
        out.only_if_holds = false;
        out.only_if_exact = true;
      }
    }
  } else {
    if (out.constant_exact && out.kernel_norm.power && out.mean_norm.power && is_integral_exponent(r)) {
      const T c_pow = ipow(*out.constant_exact, static_cast<unsigned>(r));
      out.only_if_holds = *out.kernel_norm.power <= c_pow * *out.mean_norm.power * (1.0 + 1e-9);
    }
  }
  if (!out.only_if_holds)
    out.only_if_holds = out.kernel_norm.value <= *out.constant * out.mean_norm.value * (1.0 + 1e-9) + 1e-300;
  return out;
}

}  // namespace gmean
