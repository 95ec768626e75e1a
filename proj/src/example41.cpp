#include <algorithm>
#include <cmath>
#include <vector>

#include "gmean/regularize.hpp"

namespace gmean {

namespace {

double band_p(std::size_t i, std::size_t j) {
  const double s = static_cast<double>(i + j);
  return 1.0 / (s * s);
}

double kernel_value(std::size_t i) {
  const double v = 2.0 * static_cast<double>(i);
  return i % 2 == 0 ? v : -v;
}

double relative_gap(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

Example41Report example_4_1(std::size_t M, std::size_t dense_limit) {
  if (M < 3) fail(ErrorCode::Domain, "counterexample needs M >= 3");
  Example41Report out;
  out.M = M;

  // Points are i = 1..M; neighbours of i inside the truncation.
  auto neighbours = [M](std::size_t i) {
    std::vector<std::size_t> nb;
    if (i > 1) nb.push_back(i - 1);
    if (i < M) nb.push_back(i + 1);
    return nb;
  };

  std::vector<double> rho(M + 1, 0.0);
  for (std::size_t i = 1; i <= M; ++i)
    for (std::size_t j : neighbours(i)) {
      const double p = band_p(i, j);
      const double mean = std::fabs(kernel_value(i) + kernel_value(j)) / 2.0;
      rho[i] += p;
      out.normalization += p;
      out.I1 += p * mean;
      out.max_abs_mean_on_support = std::max(out.max_abs_mean_on_support, mean);
    }
  for (std::size_t i = 1; i <= M; ++i) out.I2 += rho[i] * std::fabs(kernel_value(i));

  // gamma(x) = min over z of f(z, x). Off the band P(z, x) = 0, so any
  // off-band z with rho(z) > 0 contributes f = 0.
  std::size_t rho_positive = 0;
  for (std::size_t z = 1; z <= M; ++z) rho_positive += rho[z] > 0 ? 1 : 0;
  for (std::size_t x = 1; x <= M; ++x) {
    std::size_t band_positive = 0;
    double gamma = INFINITY;
    for (std::size_t z : neighbours(x)) {
      if (rho[z] > 0) {
        ++band_positive;
        gamma = std::min(gamma, band_p(z, x) / rho[z]);
      } else {
        gamma = std::min(gamma, 1.0);
      }
    }
    // z with rho(z) = 0 off the band give f = 1.
    if (rho_positive > band_positive) gamma = 0.0;
    else if (M > neighbours(x).size()) gamma = std::min(gamma, 1.0);
    if (gamma > 0) out.measure_A += 1.0;
  }

  out.growth = out.I2 / std::log(static_cast<double>(M));
  out.ratio = out.I2 / out.I1;
  out.if_direction_holds = out.I1 <= out.I2;

  if (M <= dense_limit) {
    const SymmetricDensity<double> P = example_4_1_density<double>(M);
    const GridFunction<double> u = example_4_1_kernel<double>(P.space_ptr());
    const GridFunction<double> U = gmean_apply(u, 2);
    const double I1 = weighted_lr_norm(U, P.grid(), 1.0).value;
    const double I2 = weighted_lr_norm(u, marginal(P, 1), 1.0).value;
    const DominationCertificate<double> cert = extract_gamma(P);
    out.dense_checked = true;
    out.dense_discrepancy = std::max({relative_gap(I1, out.I1), relative_gap(I2, out.I2),
                                      relative_gap(P.normalization(), out.normalization),
                                      relative_gap(cert.measure_A, out.measure_A)});
    out.dense_agrees = out.dense_discrepancy <= 1e-12;
  }
  return out;
}

}  // namespace gmean
