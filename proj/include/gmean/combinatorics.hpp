#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gmean/scalar.hpp"

namespace gmean {

/// Exact C(N, m) in 64 bits; overflow-error when it does not fit,
/// domain-error when m > N.
std::uint64_t binom(unsigned N, unsigned m);

/// Arbitrary-precision C(N, m); never overflows.
mpz_class binom_big(unsigned N, unsigned m);

/// Walks the strictly increasing m-subsets of {0, ..., N-1} in lexicographic
/// order. Positions are 0-based: the subset {i_1 < ... < i_m} of the 1-based
/// convention is stored as {i_1 - 1, ..., i_m - 1}.
class CombEnumerator {
 public:
  CombEnumerator(unsigned N, unsigned m);

  bool done() const noexcept { return done_; }
  std::span<const unsigned> current() const noexcept { return current_; }
  void next();

 private:
  unsigned N_;
  unsigned m_;
  std::vector<unsigned> current_;
  bool done_ = false;
};

/// All C(N, m) subsets, materialised in enumeration order.
std::vector<std::vector<unsigned>> combinations(unsigned N, unsigned m);

}  // namespace gmean
