#include "gmean/measure.hpp"

#include <cmath>
#include <limits>

namespace gmean {

std::size_t grid_size(std::size_t n, std::size_t k) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (n != 0 && size > std::numeric_limits<std::size_t>::max() / n)
      fail(ErrorCode::Capacity, "grid of " + std::to_string(n) + "^" + std::to_string(k) +
                                    " entries does not fit in memory addressing");
    size *= n;
  }
  return size;
}

std::size_t flat_index(std::span<const std::size_t> tuple, std::size_t n) {
  std::size_t flat = 0;
  for (std::size_t x : tuple) {
    if (x >= n)
      fail(ErrorCode::Index, "tuple component " + std::to_string(x) + " outside [0, " +
                                 std::to_string(n) + ")");
    flat = flat * n + x;
  }
  return flat;
}

void unflatten_into(std::size_t flat, std::size_t n, std::span<std::size_t> out) {
  for (std::size_t j = out.size(); j-- > 0;) {
    out[j] = flat % n;
    flat /= n;
  }
  if (flat != 0) fail(ErrorCode::Index, "flat index outside [0, n^k)");
}

Tuple unflatten(std::size_t flat, std::size_t n, std::size_t k) {
  Tuple t(k);
  unflatten_into(flat, n, t);
  return t;
}

TupleCursor::TupleCursor(std::size_t n, std::size_t k, std::size_t start)
    : n_(n), digits_(k), flat_(start) {
  if (start < grid_size(n, k)) unflatten_into(start, n, digits_);
}

void TupleCursor::advance() noexcept {
  ++flat_;
  for (std::size_t j = digits_.size(); j-- > 0;) {
    if (++digits_[j] < n_) return;
    digits_[j] = 0;
  }
}

bool is_integral_exponent(double r) { return std::isfinite(r) && r == std::floor(r) && r < 1e6; }

}  // namespace gmean
