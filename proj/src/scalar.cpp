#include "gmean/scalar.hpp"

#include <array>
#include <charconv>
#include <string>

#include "gmean/error.hpp"

namespace gmean {

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::Exact ? "exact" : "float";
}

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::Exact;
  if (text == "float") return Mode::Float;
  fail(ErrorCode::Validation, "unknown mode '" + std::string(text) + "' (expected exact|float)");
}

std::string format_scalar(const Rational& v) { return v.get_str(10); }

std::string format_scalar(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) fail(ErrorCode::Validation, "cannot format float value");
  return std::string(buf.data(), end);
}

namespace {

bool valid_integer(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer(num, true) || !valid_integer(den, false))
    fail(ErrorCode::Validation, "malformed rational '" + std::string(text) + "'");
  std::string num_s(num);
  if (num_s[0] == '+') num_s.erase(0, 1);
  mpz_class p(num_s, 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) fail(ErrorCode::Validation, "zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

}  // namespace gmean
