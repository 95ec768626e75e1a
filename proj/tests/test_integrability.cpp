#include "doctest.h"
#include "support.hpp"

#include "gmean/random.hpp"
#include "gmean/regularize.hpp"

using namespace gmean;
using testing::q;

namespace {

SymmetricDensity<Rational> product_of(const SpacePtr<Rational>& s, std::vector<Rational> factor, std::size_t N) {
  return product_density(GridFunction<Rational>(s, 1, std::move(factor)), N);
}

/// Random symmetric probability density with some zero entries.
SymmetricDensity<Rational> random_density(testing::Gen& gen, const SpacePtr<Rational>& s, std::size_t N) {
  auto g = gen.symmetric(s, N, true);
  Rational mass = 0;
  for (std::size_t i = 0; i < g.size(); ++i) mass += g[i] * s->product_weight(unflatten(i, s->size(), N));
  if (mass == 0) {
    g = GridFunction<Rational>::constant(s, N, 1);
    mass = 0;
    for (std::size_t i = 0; i < g.size(); ++i) mass += s->product_weight(unflatten(i, s->size(), N));
  }
  for (auto& v : g.values()) v /= mass;
  return SymmetricDensity<Rational>::make(std::move(g));
}

}  // namespace

TEST_CASE("density validation") {
  const auto s = testing::unit_space(2);
  CHECK_THROWS_AS(SymmetricDensity<Rational>::make(GridFunction<Rational>(s, 2, {q(1, 4), q(1, 2), 0, q(1, 4)})), Error);
  CHECK_THROWS_AS(SymmetricDensity<Rational>::make(GridFunction<Rational>(s, 2, {q(3, 4), q(1, 4), q(1, 4), q(-1, 4)})),
                  Error);
  CHECK_THROWS_AS(SymmetricDensity<Rational>::make(GridFunction<Rational>(s, 2, {1, 1, 1, 1})), Error);
  CHECK_NOTHROW(SymmetricDensity<Rational>::make(GridFunction<Rational>(s, 2, {1, 1, 1, 1}), false));
  CHECK_THROWS_AS(SymmetricDensity<Rational>::make(GridFunction<Rational>(s, 2), false), Error);
  // Asymmetry on null tuples is irrelevant.
  const auto z = testing::space({1, 0});
  CHECK_NOTHROW(SymmetricDensity<Rational>::make(GridFunction<Rational>(z, 2, {1, 5, 0, 0})));

  const auto sd = make_space<double>({1.0, 1.0});
  CHECK_NOTHROW(SymmetricDensity<double>::make(GridFunction<double>(sd, 2, {0.25, 0.25 + 1e-14, 0.25, 0.25})));
  CHECK_THROWS_AS(SymmetricDensity<double>::make(GridFunction<double>(sd, 2, {0.25, 0.26, 0.24, 0.25})), Error);
  CHECK_THROWS_AS(SymmetricDensity<double>::make(GridFunction<double>(sd, 2, {0.25, 0.25, 0.25, 0.26})), Error);
}

TEST_CASE("marginal examples") {
  const auto s = testing::space({1, 2});
  const auto P = product_of(s, {q(1, 2), q(1, 4)}, 3);
  const GridFunction<Rational> rho(s, 1, {q(1, 2), q(1, 4)});
  CHECK(marginal(P, 1) == rho);
  CHECK(marginal(P, 2) == product_density(rho, 2).grid());
  CHECK(marginal(P, 0)[0] == 1);

  const auto u2 = testing::unit_space(2);
  const auto uniform = SymmetricDensity<Rational>::make(GridFunction<Rational>::constant(u2, 2, q(1, 4)));
  CHECK(marginal(uniform, 1) == GridFunction<Rational>::constant(u2, 1, q(1, 2)));
  CHECK_THROWS_AS(marginal(uniform, 2), Error);
}

TEST_CASE("counterexample marginal matches the closed form") {
  const std::size_t M = 9;
  const auto P = example_4_1_density<Rational>(M);
  const auto rho = marginal(P, 1);
  CHECK(rho[0] == q(1, 9));
  for (long i = 2; i <= static_cast<long>(M) - 1; ++i)
    CHECK(rho[static_cast<std::size_t>(i - 1)] == q(1, (2 * i + 1) * (2 * i + 1)) + q(1, (2 * i - 1) * (2 * i - 1)));
  CHECK(rho[M - 1] == q(1, (2 * 9 - 1) * (2 * 9 - 1)));
}

TEST_CASE("marginals match the brute-force reference and the tower property") {
  testing::Gen gen(60);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 3));
    const std::size_t N = static_cast<std::size_t>(gen.integer(2, 4));
    const auto s = gen.weights(n, n > 1 && trial % 3 == 0);
    const auto P = random_density(gen, s, N);
    for (std::size_t m = 0; m < N; ++m) {
      const auto rho = marginal(P, m);
      REQUIRE(rho == testing::brute_marginal(P.grid(), m));
      if (m + 1 < N) {
        const auto up = SymmetricDensity<Rational>::make(marginal(P, m + 1));
        REQUIRE(marginal(up, m) == rho);
      }
      Rational mass = 0;
      for (std::size_t i = 0; i < rho.size(); ++i) mass += rho[i] * s->product_weight(unflatten(i, n, m));
      REQUIRE(mass == 1);
      REQUIRE(is_exactly_symmetric(rho) == true);
    }
  }
}

TEST_CASE("certificate of a product density on two points") {
  const auto s = testing::unit_space(2);
  const auto P = product_of(s, {q(1, 3), q(2, 3)}, 2);
  const auto c = extract_gamma(P);
  CHECK(c.gamma == std::vector<Rational>{q(1, 3), q(2, 3)});
  CHECK(c.A.count() == 2);
  CHECK(c.condition_holds);
  // Scores: 1/3 * 2 = 2/3 and 2/3 * 1 = 2/3; the tie keeps the smaller epsilon.
  CHECK(c.epsilon == q(1, 3));
  CHECK(c.measure_A_eps == 2);
  CHECK(c.alpha == q(3, 2));
  CHECK(c.alpha * c.epsilon * c.measure_A_eps == 1);
}

TEST_CASE("epsilon maximizes epsilon times |A_eps|") {
  const auto s = testing::unit_space(3);
  const auto P = product_of(s, {q(1, 10), q(4, 10), q(5, 10)}, 3);
  const auto c = extract_gamma(P);
  // Candidates: 0.1*3 = 0.3, 0.4*2 = 0.8, 0.5*1 = 0.5.
  CHECK(c.epsilon == q(4, 10));
  CHECK(c.A_eps.count() == 2);
  CHECK(c.alpha == q(5, 4));
}

TEST_CASE("a vanishing slice leaves its point out of A") {
  const auto s = testing::unit_space(2);
  const auto P = SymmetricDensity<Rational>::make(GridFunction<Rational>(s, 2, {1, 0, 0, 0}));
  const auto c = extract_gamma(P);
  CHECK(c.gamma[1] == 0);
  CHECK_FALSE(c.A.contains(1));
  CHECK(c.A.contains(0));
}

TEST_CASE("zero-weight atoms get gamma 0") {
  const auto s = testing::space({1, 0, 1});
  testing::Gen gen(61);
  const auto c = extract_gamma(random_density(gen, s, 2));
  CHECK(c.gamma[1] == 0);
  CHECK_FALSE(c.A.contains(1));
}

TEST_CASE("counterexample has no certificate") {
  for (std::size_t M : {3, 4, 7, 12}) {
    const auto c = extract_gamma(example_4_1_density<Rational>(M));
    CHECK_FALSE(c.condition_holds);
    CHECK(c.measure_A == 0);
    for (const auto& g : c.gamma) CHECK(g == 0);
  }
}

TEST_CASE("certificate maximality and the mass bound") {
  testing::Gen gen(62);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 3));
    const std::size_t N = static_cast<std::size_t>(gen.integer(2, 3));
    const auto s = gen.weights(n, trial % 4 == 0);
    const auto P = trial % 2 == 0 ? random_density(gen, s, N)
                                  : product_of(s, std::vector<Rational>(n, 1), N);
    const auto c = extract_gamma(P);
    const auto rho = marginal(P, N - 1);
    const auto head = s->positive_table(N - 1);
    for (std::size_t x = 0; x < n; ++x) {
      if (!s->positive(x)) continue;
      bool tight = false, capped = false;
      for (std::size_t z = 0; z < rho.size(); ++z) {
        if (!head[z]) continue;
        REQUIRE(P.grid()[z * n + x] >= c.gamma[x] * rho[z]);  // the condition itself
        if (sign(rho[z]) > 0 && P.grid()[z * n + x] == c.gamma[x] * rho[z]) tight = true;
        if (sign(rho[z]) == 0 && c.gamma[x] == 1) capped = true;
      }
      // Raising gamma(x) breaks the condition at a tight tuple, unless gamma
      // came from the f = 1 convention on a null slice of rho.
      REQUIRE((tight || capped));
    }
    if (c.condition_holds) REQUIRE(c.epsilon * c.measure_A_eps <= 1);
  }
}

TEST_CASE("cascade examples") {
  const auto s = testing::space({1, 2, 1});
  const auto P = product_of(s, {q(1, 2), q(1, 3), q(1, 1)}, 3);
  const auto c = extract_gamma(P);
  for (std::size_t m = 1; m <= 2; ++m) {
    const auto r = check_cascade(P, c, m);
    CHECK(r.holds);
    CHECK(r.steps_hold);
    CHECK(r.worst_margin == 0);  // product densities are tight all along the chain
    CHECK(r.checked > 0);
  }
  auto doubled = c;
  for (auto& g : doubled.gamma) g *= 2;
  const auto bad = check_cascade(P, doubled, 1);
  CHECK_FALSE(bad.holds);
  CHECK(bad.worst_margin < 0);
  CHECK_THROWS_AS(check_cascade(P, c, 3), Error);
}

TEST_CASE("cascade holds for every certified random density") {
  testing::Gen gen(63);
  int certified = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = gen.weights(static_cast<std::size_t>(gen.integer(2, 3)), trial % 5 == 0);
    const std::size_t N = static_cast<std::size_t>(gen.integer(2, 4));
    const auto P = random_density(gen, s, N);
    const auto c = extract_gamma(P);
    if (!c.condition_holds) continue;
    ++certified;
    for (std::size_t m = 1; m < N; ++m) {
      const auto r = check_cascade(P, c, m);
      REQUIRE(r.holds);
      REQUIRE(r.steps_hold);
    }
  }
  CHECK(certified > 5);
}

TEST_CASE("T-set examples") {
  const auto s = testing::unit_space(3);
  const auto uniform = SymmetricDensity<Rational>::make(GridFunction<Rational>::constant(s, 3, q(1, 27)));
  const auto c = extract_gamma(uniform);
  REQUIRE(c.condition_holds);

  const auto zero = t_set(GridFunction<Rational>(s, 3), uniform, c, 1, 1.0);
  CHECK(zero.set.count() == 9);  // all of A_eps^2

  const auto constant = t_set(GridFunction<Rational>::constant(s, 3, 4), uniform, c, 2, 2.0);
  CHECK(constant.positive);

  // Mass concentrated on tuples whose tail leaves A_eps is impossible here
  // (A_eps is everything), so concentrate it on one tail instead.
  GridFunction<Rational> spike(s, 3);
  for (std::size_t x = 0; x < 3; ++x) spike.at(Tuple{x, 2, 2}) = 100;
  const auto r = t_set(spike, uniform, c, 1, 1.0);
  CHECK(r.positive);
  CHECK_FALSE(r.set.contains(flat_index(Tuple{2, 2}, 3)));
}

TEST_CASE("T-set demands the domination condition") {
  const auto P = example_4_1_density<Rational>(5);
  const auto c = extract_gamma(P);
  try {
    t_set(GridFunction<Rational>(P.space_ptr(), 2), P, c, 1, 1.0);
    FAIL("expected precondition violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
}

TEST_CASE("T-sets have positive measure on random certified instances") {
  testing::Gen gen(64);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto s = gen.weights(static_cast<std::size_t>(gen.integer(2, 3)), trial % 4 == 0);
    const std::size_t N = static_cast<std::size_t>(gen.integer(2, 3));
    const auto P = random_density(gen, s, N);
    const auto c = extract_gamma(P);
    if (!c.condition_holds) continue;
    const auto U = gen.grid(s, N);
    for (std::size_t m = 1; m < N; ++m)
      for (double r : {1.0, 2.0}) {
        REQUIRE(t_set(U, P, c, m, r).positive);
        ++checked;
      }
  }
  CHECK(checked > 10);
}

TEST_CASE("L-infinity constants") {
  CHECK(theorem2_constant(3, 1) == 1);
  CHECK(theorem2_constant(3, 2) == 7);
  CHECK(theorem2_constant(4, 4) == 1);
  CHECK(theorem2_constant(4, 3) == 4 * (1 + 6 * 2 + 1) + 6 * 2 + 1);
  CHECK_THROWS_AS(theorem2_constant(3, 0), Error);
  CHECK_THROWS_AS(theorem2_constant(60, 30), Error);
}

TEST_CASE("rational bounds on the integrability constant") {
  // N = 2, m = 1, r = 2, alpha = 2: C = 4 sqrt(2) + 1.
  const auto [lo, hi] = theorem3_constant_bounds(2, 1, 2, Rational(2));
  CHECK(lo < hi);
  const Rational root_lo = (lo - 1) / 4, root_hi = (hi - 1) / 4;
  CHECK(root_lo * root_lo <= 2);
  CHECK(root_hi * root_hi >= 2);
  CHECK(hi - lo < q(1, 1000000000));
  for (unsigned N = 2; N <= 5; ++N)
    for (unsigned m = 1; m < N; ++m)
      for (unsigned r : {1u, 2u, 3u})
        for (const Rational& a : {q(1, 7), q(1, 2), q(1), q(9, 4), q(10)}) {
          const auto [l, h] = theorem3_constant_bounds(N, m, r, a);
          REQUIRE(l <= h);
          const auto exact = theorem3_constant_exact(N, m, r, a);
          if (exact) {
            REQUIRE(l == *exact);
            REQUIRE(h == *exact);
          }
          const double c = theorem3_constant(N, m, r, to_double(a));
          REQUIRE(to_double(l) <= c * (1 + 1e-12));
          REQUIRE(to_double(h) >= c * (1 - 1e-12));
        }
  CHECK(theorem3_constant_bounds(4, 1, 2, q(1, 4)).first == theorem3_constant_bounds(4, 1, 2, q(1, 4)).second);
}

TEST_CASE("integrability constants") {
  CHECK(theorem3_constant(2, 1, 1.0, 1.0) == 5.0);
  CHECK(theorem3_constant(3, 2, 1.0, 1.0) == 31.0);
  CHECK(*theorem3_constant_exact(3, 2, 1, Rational(1)) == 31);
  CHECK(*theorem3_constant_exact(3, 1, 2, q(1, 4)) == 2 * 3 * q(1, 4) + 1);
  CHECK_FALSE(theorem3_constant_exact(4, 1, 2, q(1, 4)));
  CHECK(theorem3_constant(4, 1, 2.0, 0.25) == doctest::Approx(2 * 4 * std::pow(0.25, 1.5) + 1));
  for (unsigned N = 2; N <= 5; ++N)
    for (unsigned m = 1; m < N; ++m)
      for (double r : {1.0, 2.0, 3.5}) {
        double prev = 0;
        for (double a : {0.1, 0.5, 1.0, 2.0, 10.0}) {
          const double c = theorem3_constant(N, m, r, a);
          CHECK(c > prev);
          prev = c;
        }
      }
  CHECK_THROWS_AS(theorem3_constant(3, 3, 1.0, 1.0), Error);
  CHECK_THROWS_AS(theorem3_constant(3, 1, 0.5, 1.0), Error);
  CHECK_THROWS_AS(theorem3_constant(3, 1, 1.0, 0.0), Error);
}

TEST_CASE("L-infinity sandwich") {
  testing::Gen gen(65);
  for (std::size_t N = 1; N <= 5; ++N)
    for (std::size_t m = 1; m <= N; ++m)
      for (int trial = 0; trial < 5; ++trial) {
        const auto s = gen.weights(static_cast<std::size_t>(gen.integer(2, 3)), trial == 4);
        const auto r = verify_theorem2(gen.grid(s, m), N);
        REQUIRE(r.holds());
      }
  const auto s = testing::unit_space(3);
  const auto c = verify_theorem2(GridFunction<Rational>::constant(s, 2, -3), 4);
  CHECK(c.mean_norm == c.kernel_norm);
}

TEST_CASE("integrability sandwich examples") {
  const auto s = testing::unit_space(3);
  const auto P = product_of(s, {1, 2, 3}, 3);
  const auto c = verify_theorem3(P, GridFunction<Rational>::constant(s, 2, q(-5, 2)), 2.0);
  CHECK(c.mean_norm.value == doctest::Approx(2.5));
  CHECK(c.kernel_norm.value == doctest::Approx(2.5));
  CHECK(*c.mean_norm.power == *c.kernel_norm.power);
  CHECK(*c.only_if_holds);

  testing::Gen gen(66);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = verify_theorem3(P, gen.grid(s, 2), 1.0);
    CHECK(r.condition_holds);
    CHECK(r.if_direction_holds);
    REQUIRE(r.constant_exact);
    CHECK(*r.only_if_holds);
    CHECK(r.only_if_exact);
    const auto r2 = verify_theorem3(P, gen.grid(s, 1), 2.0);
    CHECK(*r2.only_if_holds);
    CHECK(r2.only_if_exact);
  }
}

TEST_CASE("the Jensen direction never fails") {
  testing::Gen gen(67);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 3));
    const std::size_t N = static_cast<std::size_t>(gen.integer(1, 4));
    const std::size_t m = static_cast<std::size_t>(gen.integer(1, static_cast<long>(N)));
    const auto s = gen.weights(n, n > 1 && trial % 3 == 0);
    const auto P = N == 1 ? SymmetricDensity<Rational>::make(GridFunction<Rational>::constant(
                                s, 1, 1 / s->total_measure()))
                          : random_density(gen, s, N);
    const auto u = gen.grid(s, m);
    for (double r : {1.0, 2.0, 3.0, 1.5}) REQUIRE(verify_theorem3(P, u, r).if_direction_holds);
  }
}

TEST_CASE("counterexample: Jensen holds, the reverse ratio grows") {
  double prev_ratio = 0;
  for (std::size_t M : {10, 20, 40, 80}) {
    const auto P = example_4_1_density<Rational>(M);
    const auto u = example_4_1_kernel<Rational>(P.space_ptr());
    const auto r = verify_theorem3(P, u, 1.0);
    CHECK(r.if_direction_holds);
    CHECK_FALSE(r.condition_holds);
    CHECK_FALSE(r.only_if_holds);
    CHECK(r.ratio > prev_ratio);
    prev_ratio = r.ratio;
  }
}
