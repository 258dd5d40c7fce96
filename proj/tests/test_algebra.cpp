#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lattice_ist/algebra.hpp"
#include "oracles.hpp"

using namespace lattice_ist;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    m = std::max(m, std::abs(x - y));
  }
  return m;
}

}  // namespace

TEST_CASE("lambda polynomials trim and evaluate") {
  LambdaPoly p({1.0, 2.0, 0.0, 1e-20});
  CHECK(p.degree() == 1);
  CHECK(p(3.0) == doctest::Approx(7.0));
  CHECK(LambdaPoly().degree() == -1);
  CHECK(LambdaPoly({0.0}).is_zero());
  const LambdaPoly q = p * p;
  CHECK(q.degree() == 2);
  CHECK(q.coeff(1) == doctest::Approx(4.0));
  CHECK((q - q).is_zero());
  CHECK(q.derivative().coeff(0) == doctest::Approx(4.0));
}

TEST_CASE("laurent polynomials trim both ends") {
  LaurentPoly L(-2, {0.0, 1.0, 2.0, 0.0});
  CHECK(L.lo() == -1);
  CHECK(L.hi() == 0);
  CHECK(L.coeff(-1) == 1.0);
  CHECK(L.reflected().coeff(1) == 1.0);
  CHECK(LaurentPoly(3, {0.0}).is_zero());
  const LaurentPoly one = LaurentPoly::constant(1.0);
  CHECK((one - one).is_zero());
  CHECK((one - one).lo() == 0);
  CHECK((one - one).hi() == -1);
}

TEST_CASE("lambda_to_laurent of lambda") {
  const LaurentPoly L = lambda_to_laurent(LambdaPoly::identity());
  CHECK(L.lo() == -1);
  CHECK(L.hi() == 1);
  CHECK(L.coeff(-1) == -1.0);
  CHECK(L.coeff(0) == 2.0);
  CHECK(L.coeff(1) == -1.0);
  CHECK(lambda_to_laurent(LambdaPoly::constant(5.0)).coeff(0) == 5.0);
}

TEST_CASE("laurent_to_lambda rejects non-palindromic input") {
  CHECK_THROWS_AS(laurent_to_lambda(LaurentPoly(-1, {1.0, 0.0, 2.0})), Error);
  try {
    laurent_to_lambda(LaurentPoly(-1, {1.0, 0.0, 2.0}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPalindromic);
  }
  const LambdaPoly p = laurent_to_lambda(LaurentPoly(-1, {-1.0, 2.0, -1.0}));
  CHECK(p.degree() == 1);
  CHECK(p.coeff(1) == doctest::Approx(1.0));
  CHECK(p.coeff(0) == doctest::Approx(0.0));
}

namespace {

double lambda_round_trip_error(std::uint64_t seed, int max_degree) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> deg(0, max_degree);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> c(static_cast<std::size_t>(deg(rng) + 1));
    for (double& x : c) x = u(rng);
    const LambdaPoly p(c);
    const LambdaPoly back = laurent_to_lambda(lambda_to_laurent(p));
    for (int j = 0; j <= p.degree(); ++j)
      worst = std::max(worst, std::abs(back.coeff(j) - p.coeff(j)) / std::max(1.0, p.scale()));
  }
  return worst;
}

}  // namespace

TEST_CASE("round trip lambda -> z -> lambda, degree up to 6") { CHECK(lambda_round_trip_error(20240612, 6) <= 1e-12); }

// Registered as its own test: the basis change is too ill-conditioned at
// degree 16 for 1e-12 in double, and this is expected to fail.
TEST_CASE("round trip lambda -> z -> lambda, degree up to 16") { CHECK(lambda_round_trip_error(20240611, 16) <= 1e-12); }

TEST_CASE("plus/minus/zero decomposition is exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(9);
    for (double& x : c) x = u(rng);
    const LaurentPoly L(-4, c);
    const LaurentPoly R = plus_part(L) + minus_part(L) + LaurentPoly::constant(zero_coeff(L));
    for (int k = -4; k <= 4; ++k) CHECK(R.coeff(k) == L.coeff(k));
    CHECK(plus_part(L).lo() >= 1);
    CHECK(minus_part(L).hi() <= -1);
  }
}

TEST_CASE("plus part extraction of palindromic products") {
  // z^3 - z^2 - 5z + 5/z + 1/z^2 - 1/z^3
  const LaurentPoly a(-3, {-1.0, 1.0, 5.0, 0.0, -5.0, -1.0, 1.0});
  const LaurentPoly pa = plus_part(a);
  CHECK(pa.lo() == 1);
  CHECK(pa.coeff(1) == -5.0);
  CHECK(pa.coeff(2) == -1.0);
  CHECK(pa.coeff(3) == 1.0);
  const LaurentPoly b(-3, {1.0, -1.5, 2.0, 0.0, -2.0, 1.5, 1.0});
  const LaurentPoly pb = plus_part(b);
  CHECK(pb.coeff(1) == -2.0);
  CHECK(pb.coeff(2) == 1.5);
  CHECK(pb.coeff(3) == 1.0);
  CHECK(plus_part(LaurentPoly::constant(7.0)).is_zero());
}

TEST_CASE("reciprocal series") {
  const LaurentPoly f0(0, {1.0, 1.0, -0.75, -0.5});
  const auto a = reciprocal_series(f0, 3);
  const auto oracle_a = oracle::long_division({1.0, 1.0, -0.75, -0.5}, 3);
  REQUIRE(a.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(a[k] == doctest::Approx(oracle_a[k]).epsilon(1e-15));
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] == doctest::Approx(-1.0));
  CHECK(a[2] == doctest::Approx(1.75));
  CHECK(a[3] == doctest::Approx(-2.0));

  const auto one = reciprocal_series(LaurentPoly::constant(1.0), 5);
  CHECK(one[0] == 1.0);
  for (int k = 1; k <= 5; ++k) CHECK(one[k] == 0.0);

  const auto geo = reciprocal_series(LaurentPoly(0, {1.0, 0.3}), 6);
  for (int k = 0; k <= 6; ++k) CHECK(geo[k] == doctest::Approx(std::pow(-0.3, k)));

  CHECK_THROWS_AS(reciprocal_series(LaurentPoly(0, {1e-15, 1.0}), 3), Error);
  CHECK_THROWS_AS(reciprocal_series(LaurentPoly(-1, {1.0, 1.0}), 3), Error);
}

TEST_CASE("reciprocal series convolution identity on random input") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> head(0.5, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> c(6);
    for (double& x : c) x = u(rng);
    c[0] = head(rng) * (trial % 2 ? 1.0 : -1.0);
    const LaurentPoly p(0, c);
    const auto a = reciprocal_series(p, 12);
    const auto conv = oracle::mul(c, a);
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    for (int k = 0; k <= 12; ++k) CHECK(std::abs(conv[k] - (k == 0 ? 1.0 : 0.0)) <= 1e-13 * std::max(1.0, s));
  }
}

TEST_CASE("exact division by z - 1/z") {
  // (z - 1/z)(1 + 2z) = z + 2z^2 - 1/z - 2
  const LaurentPoly L(-1, {-1.0, -2.0, 1.0, 2.0});
  const LaurentPoly q = divide_by_z_minus_zinv(L);
  CHECK(q.coeff(0) == doctest::Approx(1.0));
  CHECK(q.coeff(1) == doctest::Approx(2.0));
  CHECK(q.hi() == 1);
  CHECK(q.lo() == 0);
  try {
    divide_by_z_minus_zinv(LaurentPoly(0, {1.0, 1.0}));
    FAIL("expected DivisionRemainder");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionRemainder);
  }
  CHECK(divide_by_z_minus_zinv(LaurentPoly()).is_zero());
}

TEST_CASE("roots with multiplicity") {
  const RootSet r1 = roots(LambdaPoly({-4.0, -3.0, 1.0}));
  REQUIRE(r1.size() == 2);
  CHECK(r1[0].location.real() == doctest::Approx(-1.0));
  CHECK(r1[1].location.real() == doctest::Approx(4.0));
  CHECK(r1[0].multiplicity == 1);

  const RootSet r2 = roots(LambdaPoly({4.0, -4.0, 1.0}));
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].multiplicity == 2);
  CHECK(r2[0].location.real() == doctest::Approx(2.0));
  CHECK(r2[0].location.imag() == 0.0);

  // (l-1)^2 (l-3)^2
  const RootSet r3 = roots(LambdaPoly({9.0, -24.0, 22.0, -8.0, 1.0}));
  REQUIRE(r3.size() == 2);
  CHECK(r3[0].multiplicity == 2);
  CHECK(r3[1].multiplicity == 2);
  CHECK(r3[0].location.real() == doctest::Approx(1.0));
  CHECK(r3[1].location.real() == doctest::Approx(3.0));

  const RootSet r4 = roots(LambdaPoly({2.0, -2.0, 1.0}));
  REQUIRE(r4.size() == 2);
  CHECK(r4[0].location == Complex(1.0, -1.0));
  CHECK(r4[1].location == Complex(1.0, 1.0));
  CHECK(r4.degree() == 2);
}

TEST_CASE("roots of the gamma=7, epsilon=6 transmission determinant") {
  // E = (l^2 - 4l + 3 - V1^2)^2 ... built from the three values directly here:
  // product of the rounded eigenvalues reproduces the quartic to 1e-4.
  const std::vector<double> expected{-1.17741, 1.32164, 3.85577, 4.0};
  std::vector<double> c{1.0};
  for (double l : expected) c = oracle::mul(c, {-l, 1.0});
  const RootSet r = roots(LambdaPoly(c));
  REQUIRE(r.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(r[i].location.real() == doctest::Approx(expected[i]).epsilon(1e-4));
}

TEST_CASE("laurent roots include zeros at the origin") {
  const RootSet r = roots(LaurentPoly(2, {1.0, -1.0}));
  REQUIRE(r.size() == 2);
  CHECK(r[0].location == Complex(0.0, 0.0));
  CHECK(r[0].multiplicity == 2);
  CHECK(r[1].location.real() == doctest::Approx(1.0));
}

TEST_CASE("random roots: multiplicities sum to degree and residuals are small") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> deg(1, 15);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> c(static_cast<std::size_t>(deg(rng) + 1));
    for (double& x : c) x = u(rng);
    if (std::abs(c.back()) < 0.5) c.back() = 1.0;
    const LambdaPoly p(c);
    const RootSet r = roots(p);
    CHECK(r.degree() == p.degree());
    double scale = 0.0;
    for (double x : c) scale = std::max(scale, std::abs(x));
    for (const Root& root : r) {
      const double mag = std::max(1.0, std::pow(std::abs(root.location), p.degree()));
      CHECK(std::abs(p(root.location)) <= 1e-8 * scale * mag);
    }
    for (const Root& root : r) {
      if (root.location.imag() == 0.0) continue;
      const bool paired = std::any_of(r.begin(), r.end(), [&](const Root& o) {
        return o.location == std::conj(root.location) && o.multiplicity == root.multiplicity;
      });
      CHECK(paired);
    }
  }
}
