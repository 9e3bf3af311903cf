#include <array>
#include <random>

#include "curvatura/poly.hpp"
#include "curvatura/rational.hpp"
#include "doctest.h"

using namespace curvatura;

TEST_CASE("rational normalization and arithmetic") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, 4) == Rat(1, -2));
  CHECK(Rat(3, -6).num() == -1);
  CHECK(Rat(3, -6).den() == 2);
  CHECK(Rat(0, 7) == Rat(0));
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 3) - Rat(1, 3) == Rat(0));
  CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
  CHECK(Rat(2, 3) / Rat(4, 3) == Rat(1, 2));
  CHECK(-Rat(5, 7) == Rat(-5, 7));
  CHECK(Rat(1, 2).to_double() == 0.5);
  CHECK_THROWS_AS(Rat(1, 0), invalid_parameter);
  CHECK_THROWS_AS(Rat(1, 2) / Rat(0), invalid_parameter);
}

TEST_CASE("rational overflow detection") {
  const Rat big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, invalid_parameter);
  // intermediate products use 128 bits, so reducible results survive
  const Rat a(INT64_MAX / 4, 3), b(3, INT64_MAX / 4);
  CHECK(a * b == Rat(1));
}

TEST_CASE("polynomial construction, equality, degree") {
  const Poly4 x = Poly4::var(0), y = Poly4::var(1);
  const Poly4 p = x * x - y * y + Poly4::constant(3.0);
  CHECK(p.degree() == 2);
  CHECK(p.coeff({2, 0, 0, 0}) == 1.0);
  CHECK(p.coeff({0, 2, 0, 0}) == -1.0);
  CHECK(p.coeff({0, 0, 0, 0}) == 3.0);
  CHECK(p.coeff({1, 1, 0, 0}) == 0.0);
  CHECK(p == p);
  CHECK(p != x);
  CHECK((p - p).is_zero());
  CHECK(Poly4::var(2, 3, 5.0).coeff({0, 0, 3, 0}) == 5.0);
  CHECK(Poly4::pow(x + y, 2) == x * x + 2.0 * (x * y) + y * y);
}

TEST_CASE("polynomial differentiation and evaluation") {
  const Poly4 x = Poly4::var(0), u = Poly4::var(2), v = Poly4::var(3);
  const Poly4 f = Poly4::pow(u, 3) - 3.0 * (u * v * v) + x * x;
  CHECK(f.diff(2) == 3.0 * (u * u) - 3.0 * (v * v));
  CHECK(f.diff(3) == -6.0 * (u * v));
  CHECK(f.diff(1).is_zero());
  std::array<double, 4> pt{1.5, -2.0, 0.3, 0.7};
  const double expect = 0.3 * 0.3 * 0.3 - 3 * 0.3 * 0.7 * 0.7 + 1.5 * 1.5;
  CHECK(f.eval(pt) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("substitutions") {
  using RP = MPoly<Rat, 2>;
  const RP w = RP::var(0), z = RP::var(1);

  SUBCASE("subst_const") {
    const RP p = w * w * z + RP::constant(Rat(1, 2)) * z;
    const RP q = p.subst_const(0, Rat(2));
    CHECK(q == RP::constant(Rat(9, 2)) * z);
  }

  SUBCASE("subst_square replaces even powers") {
    // w^4 + w^2 z with w^2 -> (1 - z): (1-z)^2 + (1-z) z = 1 - z
    const RP p = RP::pow(w, 4) + RP::pow(w, 2) * z;
    const RP repl = RP::constant(Rat(1)) - z;
    CHECK(p.subst_square(0, repl) == RP::constant(Rat(1)) - z);
  }

  SUBCASE("subst_square rejects odd exponents") {
    CHECK_THROWS_AS(RP::pow(w, 3).subst_square(0, z), invalid_parameter);
  }

  SUBCASE("div_exact_monomial") {
    const RP p = RP::pow(w, 3) * z * Rat(6) + w * z * z * Rat(4);
    const RP q = p.div_exact_monomial({1, 1}, Rat(2));
    CHECK(q == RP::pow(w, 2) * Rat(3) + z * Rat(2));
    CHECK_THROWS_AS(p.div_exact_monomial({2, 0}, Rat(1)), invalid_parameter);
    CHECK_THROWS_AS((p + RP::constant(Rat(1))).div_exact_monomial({1, 1}, Rat(1)),
                    invalid_parameter);
  }
}

TEST_CASE("double/rational evaluation agreement on a random polynomial") {
  std::mt19937 rng(20240811);
  using RP5 = MPoly<Rat, 5>;
  RP5 p;
  for (int t = 0; t < 40; ++t) {
    RP5 mono = RP5::constant(Rat((rng() % 19) - 9, 1 + rng() % 4));
    for (int v = 0; v < 5; ++v)
      if (int e = static_cast<int>(rng() % 3); e > 0) mono = mono * RP5::var(v, e);
    p = p + mono;
  }
  std::array<double, 5> x{};
  std::array<long double, 5> xl{};
  for (int i = 0; i < 5; ++i) {
    x[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
    xl[i] = x[i];
  }
  CHECK(static_cast<double>(p.eval(xl)) == doctest::Approx(p.eval(x)).epsilon(1e-13));
}
