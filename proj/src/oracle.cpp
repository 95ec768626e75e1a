#include <string>
#include <vector>

#include "gmean/recovery.hpp"

namespace gmean {

OracleResult oracle_solve(const GridFunction<Rational>& U, std::size_t m, std::size_t max_unknowns) {
  const std::size_t N = U.order();
  if (m < 1 || m > N) fail(ErrorCode::Domain, "oracle needs 1 <= m <= N");
  const std::size_t n = U.points();
  const std::size_t unknowns = grid_size(n, m);
  if (unknowns > max_unknowns)
    fail(ErrorCode::Capacity, "oracle system has " + std::to_string(unknowns) + " unknowns, cap is " +
                                  std::to_string(max_unknowns));

  // Rows scaled by C(N,m): integer selection counts against C(N,m) * U(t).
  const Rational scale(binom_big(static_cast<unsigned>(N), static_cast<unsigned>(m)));
  const auto positive = U.space().positive_table(N);
  const auto subsets = combinations(static_cast<unsigned>(N), static_cast<unsigned>(m));
  std::vector<std::vector<Rational>> rows;
  for (TupleCursor c(n, N); c.flat() < U.size(); c.advance()) {
    if (!positive[c.flat()]) continue;
    std::vector<Rational> row(unknowns + 1);
    for (const auto& s : subsets) {
      std::size_t idx = 0;
      for (unsigned pos : s) idx = idx * n + c.tuple()[pos];
      row[idx] += 1;
    }
    row[unknowns] = scale * U[c.flat()];
    rows.push_back(std::move(row));
  }

  // Reduced row echelon form.
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t col = 0; col < unknowns && r < rows.size(); ++col) {
    std::size_t p = r;
    while (p < rows.size() && sgn(rows[p][col]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    const Rational inv = 1 / rows[r][col];
    for (std::size_t j = col; j <= unknowns; ++j) rows[r][j] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || sgn(rows[i][col]) == 0) continue;
      const Rational f = rows[i][col];
      for (std::size_t j = col; j <= unknowns; ++j)
        if (sgn(rows[r][j]) != 0) rows[i][j] -= f * rows[r][j];
    }
    pivot_cols.push_back(col);
    ++r;
  }

  bool consistent = true;
  for (std::size_t i = r; i < rows.size(); ++i)
    if (sgn(rows[i][unknowns]) != 0) consistent = false;

  GridFunction<Rational> kernel(U.space_ptr(), m);
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) kernel[pivot_cols[i]] = rows[i][unknowns];

  const auto kernel_positive = U.space().positive_table(m);
  std::size_t support = 0;
  for (char b : kernel_positive) support += b ? 1 : 0;
  bool pivots_on_support = true;
  for (std::size_t col : pivot_cols) pivots_on_support = pivots_on_support && kernel_positive[col];

  return OracleResult{detail::finalize(std::move(kernel), U, {}, {}, ExecPolicy{}), consistent,
                      pivot_cols.size(), support, pivots_on_support && pivot_cols.size() == support};
}

}  // namespace gmean
