#pragma once

// Two scalar modes share every algorithm:
//   Rational (GMP mpq_class): exact, the reference mode for equality claims.
//   double: the fast path. All reductions run sequentially in ascending flat
//           index order so results are bit-reproducible.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

namespace gmean {

using Rational = mpq_class;

enum class Mode { Exact, Float };

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

template <class T>
concept Scalar = std::is_same_v<T, Rational> || std::is_same_v<T, double>;

template <Scalar T>
constexpr Mode mode_of() {
  return std::is_same_v<T, Rational> ? Mode::Exact : Mode::Float;
}

template <Scalar T>
T from_int(std::int64_t v) {
  if constexpr (std::is_same_v<T, Rational>) {
    Rational r;
    mpz_set_si(r.get_num_mpz_t(), static_cast<long>(v));
    return r;
  } else {
    return static_cast<double>(v);
  }
}

template <Scalar T>
T from_ratio(std::int64_t num, std::int64_t den) {
  if constexpr (std::is_same_v<T, Rational>) {
    Rational r(static_cast<long>(num), static_cast<unsigned long>(den < 0 ? -den : den));
    if (den < 0) r = -r;
    r.canonicalize();
    return r;
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

/// Exact binomial-sized integers (uint64) into either scalar type.
template <Scalar T>
T from_uint(std::uint64_t v) {
  if constexpr (std::is_same_v<T, Rational>) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return Rational(z);
  } else {
    return static_cast<double>(v);
  }
}

template <Scalar T>
T from_rational(const Rational& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return v;
  } else {
    return v.get_d();
  }
}

inline double to_double(const Rational& v) { return v.get_d(); }
inline double to_double(double v) { return v; }

inline Rational scalar_abs(const Rational& v) { return Rational(abs(v)); }
inline double scalar_abs(double v) { return std::fabs(v); }

inline bool is_finite(const Rational&) { return true; }
inline bool is_finite(double v) { return std::isfinite(v); }

inline int sign(const Rational& v) { return sgn(v); }
inline int sign(double v) { return (v > 0) - (v < 0); }

/// Integer power by repeated multiplication (identical in both modes).
template <Scalar T>
T ipow(const T& base, unsigned exponent) {
  T result = from_int<T>(1);
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

/// "p/q" (or "p") in exact mode; shortest round-trip decimal in float mode.
std::string format_scalar(const Rational& v);
std::string format_scalar(double v);

/// Accepts "p", "-p", "p/q". Throws validation-error otherwise.
Rational parse_rational(std::string_view text);

}  // namespace gmean
