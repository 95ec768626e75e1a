#include "doctest.h"
#include "support.hpp"

#include <limits>

using namespace gmean;
using testing::q;

TEST_CASE("flat_index follows row-major order") {
  CHECK(flat_index(Tuple{1, 0}, 3) == 3);
  CHECK(flat_index(Tuple{0, 0, 0}, 5) == 0);
  CHECK(flat_index(Tuple{}, 4) == 0);

  // Enumerate Lambda^2 for n = 3 in row-major order by hand.
  std::size_t position = 0, found = 99;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b, ++position)
      if (a == 2 && b == 1) found = position;
  CHECK(found == 7);
  CHECK(flat_index(Tuple{2, 1}, 3) == 7);
}

TEST_CASE("flat_index rejects out-of-range components") {
  CHECK_THROWS_AS(flat_index(Tuple{3}, 3), Error);
  try {
    flat_index(Tuple{0, 5}, 5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Index);
  }
}

TEST_CASE("unflatten inverts flat_index exhaustively for k <= 6, n <= 5") {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t k = 0; k <= 6; ++k) {
      const std::size_t total = grid_size(n, k);
      for (std::size_t i = 0; i < total; ++i) {
        const Tuple t = unflatten(i, n, k);
        REQUIRE(t.size() == k);
        REQUIRE(flat_index(t, n) == i);
      }
    }
}

TEST_CASE("TupleCursor visits tuples in flat order") {
  std::size_t expected = 0;
  for (TupleCursor c(3, 3); c.flat() < 27; c.advance(), ++expected) {
    CHECK(c.flat() == expected);
    CHECK(flat_index(c.tuple(), 3) == expected);
  }
  CHECK(expected == 27);
  TupleCursor mid(4, 2, 6);
  CHECK(mid.tuple() == Tuple{1, 2});
}

TEST_CASE("grid_size reports capacity overflow") {
  CHECK(grid_size(3, 0) == 1);
  CHECK(grid_size(3, 4) == 81);
  try {
    grid_size(1000, 100);
    FAIL("expected capacity error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Capacity);
  }
}

TEST_CASE("MeasureSpace validation") {
  CHECK_THROWS_AS(MeasureSpace<Rational>(std::vector<Rational>{}), Error);
  CHECK_THROWS_AS(MeasureSpace<Rational>(std::vector<Rational>{0, 0}), Error);
  CHECK_THROWS_AS(MeasureSpace<Rational>(std::vector<Rational>{1, -1}), Error);
  CHECK_THROWS_AS(MeasureSpace<double>(std::vector<double>{1.0, std::numeric_limits<double>::infinity()}), Error);
  const MeasureSpace<Rational> s(std::vector<Rational>{q(1, 2), q(1, 3), 0});
  CHECK(s.total_measure() == q(5, 6));
  CHECK(s.first_positive() == 0);
  const MeasureSpace<Rational> z(std::vector<Rational>{0, 2});
  CHECK(z.first_positive() == 1);
}

TEST_CASE("float total measure within 4 eps n of the exact sum") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w;
    Rational exact = 0;
    for (int i = 0; i < 12; ++i) {
      const Rational x = gen.positive();
      w.push_back(x.get_d());
      exact += Rational(x.get_d());
    }
    const MeasureSpace<double> s(w);
    CHECK(std::fabs(s.total_measure() - exact.get_d()) <=
          4 * std::numeric_limits<double>::epsilon() * 12 * exact.get_d());
  }
}

TEST_CASE("product_weight examples") {
  const auto s11 = testing::space({1, 1});
  const auto s201 = testing::space({2, 0, 1});
  CHECK(s11->product_weight(Tuple{0, 1}) == 1);
  CHECK(s201->product_weight(Tuple{0, 2}) == 2);
  CHECK(s201->product_weight(Tuple{0, 1}) == 0);
  CHECK(s201->product_weight(Tuple{}) == 1);
  const auto table = s201->product_weight_table(2);
  for (std::size_t i = 0; i < table.size(); ++i) CHECK(table[i] == s201->product_weight(unflatten(i, 3, 2)));
}

TEST_CASE("measure_of examples") {
  const auto s11 = testing::space({1, 1});
  CHECK(measure_of(MeasurableSet<Rational>(s11, 2, true)) == 4);
  CHECK(measure_of(MeasurableSet<Rational>(s11, 2)) == 0);
  const auto s23 = testing::space({2, 3});
  MeasurableSet<Rational> e(s23, 2);
  e.insert(flat_index(Tuple{0, 0}, 2));
  e.insert(flat_index(Tuple{0, 1}, 2));
  CHECK(measure_of(e) == 10);
}

TEST_CASE("measure of a set plus its complement is total^k") {
  testing::Gen gen(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 4));
    const std::size_t k = static_cast<std::size_t>(gen.integer(0, 3));
    const auto s = gen.weights(n, gen.integer(0, 1) == 1 && n > 1);
    const auto set = gen.set(s, k);
    CHECK(measure_of(set) + measure_of(set.complement()) == ipow(s->total_measure(), static_cast<unsigned>(k)));
  }
}

TEST_CASE("null and co-null sets in the atomic model") {
  const auto s = testing::space({1, 0});
  MeasurableSet<Rational> only_zero(s, 1);
  only_zero.insert(1);
  CHECK(is_null(only_zero));
  CHECK(is_conull(only_zero.complement()));
  CHECK(positive_support(s, 2).count() == 1);
}

TEST_CASE("set algebra") {
  const auto s = testing::unit_space(3);
  MeasurableSet<Rational> a(s, 1), b(s, 1);
  a.insert(0);
  a.insert(1);
  b.insert(1);
  b.insert(2);
  CHECK(a.intersect(b).count() == 1);
  CHECK(a.unite(b).count() == 3);
  CHECK(a.intersect(b).subset_of(a));
  CHECK_FALSE(a.subset_of(b));
  CHECK_THROWS_AS(a.unite(MeasurableSet<Rational>(s, 2)), Error);
}

TEST_CASE("GridFunction validation") {
  const auto s = testing::unit_space(2);
  CHECK_THROWS_AS(GridFunction<Rational>(s, 2, std::vector<Rational>(3)), Error);
  const auto sd = make_space<double>({1.0, 1.0});
  CHECK_THROWS_AS(GridFunction<double>(sd, 1, {1.0, std::nan("")}), Error);
  GridFunction<Rational> g(s, 0);
  CHECK(g.size() == 1);
  const auto other = testing::unit_space(2);
  GridFunction<Rational> h(other, 0);
  CHECK_NOTHROW(g += h);  // equal weights count as the same space
  CHECK_THROWS_AS(g += GridFunction<Rational>(testing::unit_space(3), 0), Error);
}

TEST_CASE("weighted_lr_norm examples") {
  const auto s = testing::space({1, 1});
  const GridFunction<Rational> zero(s, 1);
  const auto half = GridFunction<Rational>::constant(s, 1, q(1, 2));
  CHECK(weighted_lr_norm(zero, half, 2.0).value == 0.0);

  const auto c = GridFunction<Rational>::constant(s, 1, q(-3, 2));
  for (double r : {1.0, 2.0, 3.0, 2.5}) CHECK(weighted_lr_norm(c, half, r).value == doctest::Approx(1.5));

  const GridFunction<Rational> f(s, 1, {1, 2});
  const auto n1 = weighted_lr_norm(f, half, 1.0);
  REQUIRE(n1.power);
  CHECK(*n1.power == q(3, 2));
  const auto n2 = weighted_lr_norm(f, half, 2.0);
  CHECK(*n2.power == q(5, 2));
  CHECK(n2.value == doctest::Approx(std::sqrt(2.5)));
  const auto nf = weighted_lr_norm(f, half, 1.5);
  CHECK_FALSE(nf.power);
  CHECK(nf.value == doctest::Approx(std::pow(0.5 + 0.5 * std::pow(2.0, 1.5), 1 / 1.5)));
  CHECK_THROWS_AS(weighted_lr_norm(f, half, 0.5), Error);
}

TEST_CASE("r = 1 norm is the plain weighted integral of |f| density") {
  testing::Gen gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = gen.weights(3, trial % 2 == 0);
    const auto f = gen.grid(s, 2);
    GridFunction<Rational> d(s, 2);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = gen.nonnegative();
    Rational integral = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
      integral += abs(f[i]) * d[i] * s->product_weight(unflatten(i, 3, 2));
    CHECK(*weighted_lr_norm(f, d, 1.0).power == integral);
  }
}

TEST_CASE("ess_sup_norm examples") {
  CHECK(ess_sup_norm(GridFunction<Rational>(testing::space({1, 1}), 1, {5, -7})) == 7);
  CHECK(ess_sup_norm(GridFunction<Rational>(testing::space({1, 0}), 1, {5, -7})) == 5);
  CHECK(ess_sup_norm(GridFunction<Rational>(testing::space({1, 0}), 2, {1, 2, 3, 4})) == 1);
  const GridFunction<Rational> g(testing::space({1, 1}), 1, {5, -7});
  CHECK(ess_sup(g) == 5);
  CHECK(ess_inf(g) == -7);
}

TEST_CASE("ess_sup_norm ignores zero-weight tuples") {
  testing::Gen gen(9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = gen.weights(3, true);
    auto f = gen.grid(s, 2);
    const Rational before = ess_sup_norm(f);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (sign(s->product_weight(unflatten(i, 3, 2))) == 0) f[i] = q(1000 + trial);
    CHECK(ess_sup_norm(f) == before);
  }
}

TEST_CASE("section examples") {
  const auto s = testing::unit_space(2);
  const GridFunction<Rational> f(s, 2, {0, 1, 2, 3});
  const auto sec = section(f, Tuple{1});
  CHECK(sec.order() == 1);
  CHECK(sec[0] == 1);
  CHECK(sec[1] == 3);
  const MeasurableSet<Rational> full(s, 3, true);
  CHECK(section(full, Tuple{0, 1}) == MeasurableSet<Rational>(s, 1, true));
  CHECK_THROWS_AS(section(f, Tuple{}), Error);
  CHECK_THROWS_AS(section(f, Tuple{0, 0}), Error);
}

TEST_CASE("scalar text round trip") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-6/4") == q(-3, 2));
  CHECK(parse_rational("+1/2") == q(1, 2));
  CHECK(format_scalar(q(-3, 2)) == "-3/2");
  CHECK(format_scalar(q(4)) == "4");
  for (const char* bad : {"", "1/0", "a", "1/-2", "1.5", "/3", "2/"}) CHECK_THROWS_AS(parse_rational(bad), Error);
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125}) {
    const std::string t = format_scalar(v);
    CHECK(std::stod(t) == v);
  }
  CHECK(format_scalar(0.1) == "0.1");
}
