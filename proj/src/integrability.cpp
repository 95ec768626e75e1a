#include "gmean/integrability.hpp"

#include <cmath>
#include <limits>

namespace gmean {

namespace {

void check_constant_domain(unsigned N, unsigned m) {
  if (m < 1 || m > N) fail(ErrorCode::Domain, "constant needs 1 <= m <= N");
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    fail(ErrorCode::Overflow, "L-infinity constant exceeds 64 bits");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a)
    fail(ErrorCode::Overflow, "L-infinity constant exceeds 64 bits");
  return a + b;
}

void check_lr_constant_domain(unsigned N, unsigned m, unsigned r, const Rational& alpha) {
  if (m < 1 || m >= N) fail(ErrorCode::Domain, "integrability constant needs 1 <= m < N");
  if (r < 1) fail(ErrorCode::Domain, "integrability constant needs r >= 1");
  if (sgn(alpha) <= 0) fail(ErrorCode::Domain, "integrability constant needs alpha > 0");
}

/// lo <= (a/b)^(1/r) <= hi with lo, hi on the grid 2^-64 / b; equal when the root is rational.
std::pair<Rational, Rational> root_bounds(const Rational& x, unsigned r) {
  if (r == 1) return {x, x};
  const mpz_class& a = x.get_num();
  const mpz_class& b = x.get_den();
  mpz_class radicand = a;
  for (unsigned i = 1; i < r; ++i) radicand *= b;
  radicand <<= 64 * r;
  mpz_class root;
  const bool exact = mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), r) != 0;
  mpz_class scale = b;
  scale <<= 64;
  Rational lo(root, scale);
  lo.canonicalize();
  if (exact) return {lo, lo};
  Rational hi(root + 1, scale);
  hi.canonicalize();
  return {lo, hi};
}

}  // namespace

std::uint64_t theorem2_constant(unsigned N, unsigned m) {
  check_constant_domain(N, m);
  if (m == N) return 1;
  std::uint64_t c = 1;
  for (unsigned j = 2; j <= m; ++j) c = checked_add(checked_mul(binom(N, j), checked_add(1, c)), c);
  return c;
}

double theorem3_constant(unsigned N, unsigned m, double r, double alpha) {
  if (m < 1 || m >= N) fail(ErrorCode::Domain, "integrability constant needs 1 <= m < N");
  if (!(r >= 1.0) || !std::isfinite(r)) fail(ErrorCode::Domain, "integrability constant needs r >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::Domain, "integrability constant needs alpha > 0");
  double c = 2.0 * N * std::pow(alpha, (N - 1) / r) + 1.0;
  for (unsigned j = 2; j <= m; ++j)
    c = static_cast<double>(binom(N, j)) * std::pow(alpha, (N - j) / r) * (1.0 + c) + c;
  return c;
}

std::optional<Rational> theorem3_constant_exact(unsigned N, unsigned m, unsigned r, const Rational& alpha) {
  check_lr_constant_domain(N, m, r, alpha);
  for (unsigned j = 1; j <= m; ++j)
    if ((N - j) % r != 0) return std::nullopt;
  Rational c = Rational(2 * N) * ipow(alpha, (N - 1) / r) + 1;
  for (unsigned j = 2; j <= m; ++j)
    c = Rational(binom_big(N, j)) * ipow(alpha, (N - j) / r) * (1 + c) + c;
  return c;
}

std::pair<Rational, Rational> theorem3_constant_bounds(unsigned N, unsigned m, unsigned r, const Rational& alpha) {
  check_lr_constant_domain(N, m, r, alpha);
  // Every coefficient is positive, so bounding each alpha power bounds C.
  const auto [lo1, hi1] = root_bounds(ipow(alpha, N - 1), r);
  Rational lo = Rational(2 * N) * lo1 + 1;
  Rational hi = Rational(2 * N) * hi1 + 1;
  for (unsigned j = 2; j <= m; ++j) {
    const auto [plo, phi] = root_bounds(ipow(alpha, N - j), r);
    const Rational b(binom_big(N, j));
    lo = b * plo * (1 + lo) + lo;
    hi = b * phi * (1 + hi) + hi;
  }
  return {lo, hi};
}

}  // namespace gmean
