#include "gmean/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "gmean/error.hpp"

namespace gmean {

std::uint64_t binom(unsigned N, unsigned m) {
  if (m > N) fail(ErrorCode::Domain, "binom: m > N");
  m = std::min(m, N - m);
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < m; ++i) {
    // acc * (N - i) is divisible by (i + 1): acc is C(N, i) * ... at each step.
    acc = acc * (N - i) / (i + 1);
    if (acc > std::numeric_limits<std::uint64_t>::max())
      fail(ErrorCode::Overflow,
           "binom(" + std::to_string(N) + ", " + std::to_string(m) + ") exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

mpz_class binom_big(unsigned N, unsigned m) {
  if (m > N) fail(ErrorCode::Domain, "binom: m > N");
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), N, m);
  return r;
}

CombEnumerator::CombEnumerator(unsigned N, unsigned m) : N_(N), m_(m), current_(m) {
  if (m > N) fail(ErrorCode::Domain, "CombEnumerator: m > N");
  std::iota(current_.begin(), current_.end(), 0u);
}

void CombEnumerator::next() {
  if (done_) return;
  // Rightmost position that can still advance.
  unsigned i = m_;
  while (i > 0) {
    --i;
    if (current_[i] < N_ - m_ + i) {
      ++current_[i];
      for (unsigned j = i + 1; j < m_; ++j) current_[j] = current_[j - 1] + 1;
      return;
    }
  }
  done_ = true;
}

std::vector<std::vector<unsigned>> combinations(unsigned N, unsigned m) {
  std::vector<std::vector<unsigned>> out;
  out.reserve(binom(N, m));
  for (CombEnumerator e(N, m); !e.done(); e.next())
    out.emplace_back(e.current().begin(), e.current().end());
  return out;
}

}  // namespace gmean
