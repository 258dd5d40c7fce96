#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lattice_ist/forward.hpp"
#include "oracles.hpp"

using namespace lattice_ist;

namespace {

std::vector<Complex> unit_circle_points(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(0.05, std::numbers::pi - 0.05);
  std::bernoulli_distribution sign;
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(1.0, sign(rng) ? u(rng) : -u(rng)));
  return out;
}

void check_poly(const LambdaPoly& p, std::vector<double> expected, double tol = 1e-12) {
  CHECK(p.degree() == static_cast<int>(expected.size()) - 1);
  for (std::size_t j = 0; j < expected.size(); ++j) CHECK(std::abs(p.coeff(static_cast<int>(j)) - expected[j]) <= tol);
}

}  // namespace

TEST_CASE("jost table for short potentials") {
  const KTable one = jost_table(Potential({0.7}));
  CHECK(one(0, 0) == 1.0);
  CHECK(one(0, 1) == doctest::Approx(0.7));

  const KTable K = jost_table(Potential({1.5, -0.5}));
  CHECK(K(0, 0) == doctest::Approx(1.0));
  CHECK(K(0, 1) == doctest::Approx(1.0));
  CHECK(K(0, 2) == doctest::Approx(-0.75));
  CHECK(K(0, 3) == doctest::Approx(-0.5));
  CHECK(K(1, 1) == doctest::Approx(1.0));
  CHECK(K(1, 2) == doctest::Approx(-0.5));

  const KTable Z = jost_table(Potential({0.0, 0.0, 0.0}));
  for (int n = 0; n < 3; ++n) {
    CHECK(Z.m(n).hi() == 0);
    CHECK(Z.m(n).coeff(0) == 1.0);
  }
}

TEST_CASE("jost table closed-form entries") {
  std::mt19937_64 rng(11);
  for (int b = 1; b <= 8; ++b) {
    const auto v = oracle::random_potential(rng, b, 2.0);
    const KTable K = jost_table(Potential(v));
    for (int n = 0; n < b; ++n) {
      CHECK(K(n, n) == doctest::Approx(1.0));
      double tail = 0.0;
      for (int j = n + 1; j <= b; ++j) tail += v[j - 1];
      if (n + 1 <= 2 * b - n - 1) CHECK(K(n, n + 1) == doctest::Approx(tail));
      CHECK(K(n, 2 * b - n - 1) == doctest::Approx(v.back()));
    }
  }
}

TEST_CASE("jost function matches direct recursion") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const int b = 1 + trial % 8;
    const auto v = oracle::random_potential(rng, b, 2.0);
    const KTable K = jost_table(Potential(v));
    for (Complex z : unit_circle_points(rng, 4)) {
      const auto f = oracle::jost_values(v, z);
      for (int n = 0; n <= b + 1; ++n) CHECK(std::abs(K.jost_solution(n)(z) - f[n]) <= 1e-10 * std::max(1.0, std::abs(f[n])));
    }
  }
}

TEST_CASE("jost function for two-site potentials") {
  const double v1 = -0.3, v2 = 1.7;
  const LaurentPoly f0 = jost_function(Potential({v1, v2}));
  CHECK(f0.coeff(0) == doctest::Approx(1.0));
  CHECK(f0.coeff(1) == doctest::Approx(v1 + v2));
  CHECK(f0.coeff(2) == doctest::Approx(v1 * v2));
  CHECK(f0.coeff(3) == doctest::Approx(v2));

  const LaurentPoly g = jost_function(Potential({-1.0, 1.0 / 6.0}));
  CHECK(g.coeff(3) == doctest::Approx(1.0 / 6.0));
  CHECK(g.coeff(2) == doctest::Approx(-1.0 / 6.0));
  CHECK(g.coeff(1) == doctest::Approx(-5.0 / 6.0));  // V1 + V2
  CHECK(g.coeff(0) == doctest::Approx(1.0));

  const LaurentPoly z = jost_function(Potential({0.0}));
  CHECK(z.hi() == 0);
}

TEST_CASE("g and the scattering matrix") {
  const LaurentPoly f0(0, {1.0, 1.0, -0.75, -0.5});
  const LaurentPoly g0 = g_from_f(f0);
  CHECK(g0.lo() == -3);
  CHECK(g0.coeff(-1) == 1.0);
  CHECK(g0.coeff(-3) == -0.5);
  CHECK(g_from_f(LaurentPoly::constant(1.0)).coeff(0) == 1.0);

  const ScatteringMatrix S = scattering_matrix(LaurentPoly(0, {1.0, 0.4}));
  const Complex z = std::polar(1.0, 0.9);
  CHECK(std::abs(S(z) - (1.0 + 0.4 / z) / (1.0 + 0.4 * z)) <= 1e-15);
  CHECK(std::abs(scattering_matrix(LaurentPoly::constant(1.0))(z) - 1.0) == 0.0);
  CHECK_THROWS_AS(scattering_matrix(LaurentPoly(0, {2.0, 1.0})), Error);
}

TEST_CASE("unitarity of S on the unit circle") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = oracle::random_potential(rng, 1 + trial % 8, 2.0);
    const ScatteringMatrix S = scattering_matrix(jost_function(Potential(v)));
    for (Complex z : unit_circle_points(rng, 32)) CHECK(std::abs(std::abs(S(z)) - 1.0) <= 1e-10);
  }
}

TEST_CASE("Wronskian identity") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const int b = 1 + trial % 8;
    const KTable K = jost_table(Potential(oracle::random_potential(rng, b, 2.0)));
    for (Complex z : unit_circle_points(rng, 5)) {
      for (int n = 0; n <= b; ++n) {
        const LaurentPoly fn = K.jost_solution(n), fn1 = K.jost_solution(n + 1);
        const Complex w = fn(z) * fn1.reflected()(z) - fn1(z) * fn.reflected()(z);
        CHECK(std::abs(w - (1.0 / z - z)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("regular solutions") {
  const double v1 = 0.8, v3 = -1.3;
  const auto phi = regular_solution(Potential({v1, -v1, v3}), 4);
  check_poly(phi[0], {1.0});
  check_poly(phi[2], {3.0 - v1 * v1, -4.0, 1.0});
  check_poly(phi[3], {4.0 - v1 - 2.0 * v1 * v1 + 3.0 * v3 - v3 * v1 * v1, v1 * v1 - 4.0 * v3 - 10.0, 6.0 + v3, -1.0});

  std::mt19937_64 rng(15);
  const auto v = oracle::random_potential(rng, 6, 2.0);
  const auto ph = regular_solution(Potential(v), 9);
  for (int n = 1; n <= 9; ++n) {
    CHECK(ph[n - 1].degree() == n - 1);
    CHECK(ph[n - 1].leading() == doctest::Approx(n % 2 ? 1.0 : -1.0));
  }
  CHECK_THROWS_AS(regular_solution(Potential(v), 0), Error);
}

TEST_CASE("free regular solutions against the binomial formula") {
  check_poly(free_regular(3), {3.0, -4.0, 1.0});
  check_poly(free_regular(4), {4.0, -10.0, 6.0, -1.0});
  check_poly(free_regular(1), {1.0});
  CHECK(free_regular(0).is_zero());
  for (int n = 1; n <= 16; ++n) {
    const auto ref = oracle::free_regular_binomial(n);
    const LambdaPoly p = free_regular(n);
    REQUIRE(p.degree() == static_cast<int>(ref.size()) - 1);
    for (std::size_t j = 0; j < ref.size(); ++j)
      CHECK(p.coeff(static_cast<int>(j)) == doctest::Approx(ref[j]).epsilon(1e-12));
    const double sgn = n % 2 ? 1.0 : -1.0;
    CHECK(p.leading() == doctest::Approx(sgn));
    if (n >= 2) CHECK(p.coeff(n - 2) == doctest::Approx(-sgn * 2.0 * (n - 1)));
    if (n >= 3) CHECK(p.coeff(n - 3) == doctest::Approx(sgn * (n - 2) * (2 * n - 3)));
  }
}

TEST_CASE("representation of phi through the Jost solutions") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    const int b = 1 + trial % 8;
    const auto v = oracle::random_potential(rng, b, 2.0);
    const Potential V(v);
    const KTable K = jost_table(V);
    const auto phi = regular_solution(V, b + 2);
    const LaurentPoly f0 = K.jost_solution(0);
    for (Complex z : unit_circle_points(rng, 4)) {
      const Complex lambda = 2.0 - z - 1.0 / z;
      for (int n = 1; n <= b + 2; ++n) {
        const LaurentPoly fn = K.jost_solution(n);
        const Complex rhs = (f0.reflected()(z) * fn(z) - f0(z) * fn.reflected()(z)) / (z - 1.0 / z);
        CHECK(std::abs(phi[n - 1](lambda) - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("determinant-one identity at z = 1") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const KTable K = jost_table(Potential(oracle::random_potential(rng, 1 + trial % 8, 2.0)));
    const LaurentPoly f0 = K.jost_solution(0), f1 = K.jost_solution(1);
    const double det = f0(1.0) * f1.derivative()(1.0) - f1(1.0) * f0.derivative()(1.0);
    CHECK(det == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("bound states of one-site potentials") {
  const Potential V({2.0});
  const auto bs = bound_states(jost_function(V), V);
  REQUIRE(bs.size() == 1);
  CHECK(std::abs(bs[0].z + 0.5) <= 1e-12);
  CHECK(std::abs(bs[0].c - std::sqrt(3.0)) <= 1e-12);
  CHECK(bs[0].mu == doctest::Approx(4.5));

  const Potential W({0.5});
  CHECK(bound_states(jost_function(W), W).empty());
  CHECK(bound_states(jost_function(Potential({-2.0})), Potential({-2.0})).size() == 1);
}

TEST_CASE("bound state of the example with two sites") {
  const Potential V({1.5, -0.5});
  const LaurentPoly f0 = jost_function(V);
  const auto bs = bound_states(f0, V);
  REQUIRE(bs.size() == 1);
  CHECK(bs[0].z == doctest::Approx((1.0 - std::sqrt(17.0)) / 4.0).epsilon(1e-12));
  const auto bj = bound_states_from_jost(f0);
  REQUIRE(bj.size() == 1);
  CHECK(bj[0].c == doctest::Approx(bs[0].c).epsilon(1e-9));
  CHECK(bj[0].C == doctest::Approx(bs[0].C).epsilon(1e-9));
}

TEST_CASE("norming constants: bridge, simplicity, summed series") {
  std::mt19937_64 rng(18);
  int seen = 0;
  for (int trial = 0; trial < 200 && seen < 40; ++trial) {
    const auto v = oracle::random_potential(rng, 1 + trial % 5, 3.0);
    const Potential V(v);
    const LaurentPoly f0 = jost_function(V);
    std::vector<BoundState> bs;
    try {
      bs = bound_states(f0, V);
    } catch (const Error&) {
      continue;
    }
    for (const auto& s : bs) {
      ++seen;
      CHECK(std::abs(f0(s.z)) <= 1e-9);
      CHECK(std::abs(f0.derivative()(s.z)) > 1e-8);
      const double bridge = std::abs(g_from_f(f0)(s.z) / (s.z - 1.0 / s.z));
      CHECK(s.c == doctest::Approx(bridge * s.C).epsilon(1e-9));
      // Brute-force truncated series for c_s through the oracle recursion.
      const auto f = oracle::jost_values(v, s.z);
      double sum = 0.0;
      for (int n = 1; n <= static_cast<int>(v.size()); ++n) sum += std::norm(f[n]);
      for (int n = static_cast<int>(v.size()) + 1; n < 4000; ++n) sum += std::pow(s.z, 2 * n);
      CHECK(s.c == doctest::Approx(1.0 / std::sqrt(sum)).epsilon(1e-9));
      // Forward recursion for phi at a bound state is unstable, so the
      // brute-force sum is only run while the decaying tail is still visible.
      if (std::abs(s.z) < 0.8) {
        const int N = static_cast<int>(v.size()) + static_cast<int>(std::ceil(-18.0 / std::log10(s.z * s.z)));
        const auto ph = oracle::regular_values(v, s.mu, N);
        double sphi = 0.0;
        for (int n = 1; n <= N; ++n) sphi += std::norm(ph[n]);
        CHECK(s.C == doctest::Approx(1.0 / std::sqrt(sphi)).epsilon(1e-7));
      }
    }
  }
  CHECK(seen >= 10);
}

TEST_CASE("endpoint classification") {
  const LaurentPoly a = jost_function(Potential({-1.0}));
  CHECK(classify_endpoint(a, Endpoint::PlusOne) == EndpointClass::Exceptional);
  CHECK(classify_endpoint(a, Endpoint::MinusOne) == EndpointClass::Generic);
  const LaurentPoly b = jost_function(Potential({1.0}));
  CHECK(classify_endpoint(b, Endpoint::PlusOne) == EndpointClass::Generic);
  CHECK(classify_endpoint(b, Endpoint::MinusOne) == EndpointClass::Exceptional);
  const LaurentPoly c = jost_function(Potential({-std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));
  CHECK(classify_endpoint(c, Endpoint::PlusOne) == EndpointClass::Exceptional);
  CHECK(classify_endpoint(c, Endpoint::MinusOne) == EndpointClass::Exceptional);
  // Exceptional endpoints are skipped rather than reported as bound states.
  CHECK(bound_states(a, Potential({-1.0})).empty());
}

TEST_CASE("roots near the endpoints and complex roots inside the disc") {
  // f0 = 1 + V1 z with V1 = -1/(1 - 5e-8): zero within the window but f0(1) != 0.
  const Potential V({-1.0 / (1.0 - 5e-8)});
  try {
    bound_states(jost_function(V), V);
    FAIL("expected RootToleranceConflict");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RootToleranceConflict);
  }
  // (1 - z/r e^{it})(1 - z/r e^{-it}) with r < 1 is not a Jost function.
  const double r = 0.6, t = 1.0;
  const LaurentPoly fake(0, {1.0, -2.0 * std::cos(t) / r, 1.0 / (r * r)});
  try {
    bound_states_from_jost(fake);
    FAIL("expected ComplexRootInsideDisc");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ComplexRootInsideDisc);
  }
}

TEST_CASE("transmission determinant for one and two sites") {
  const auto d1 = transmission_det(Potential({0.37}));
  check_poly(d1.D, {0.37});
  check_poly(d1.E, {1.0});

  const double v1 = 0.9, v2 = -0.6;
  const auto d2 = transmission_det(Potential({v1, v2}));
  // D = V2 (l^2 - (4 + V1) l + ...) is cross-checked through the 2x2 determinant.
  const LambdaPoly ref = transmission_det_from_regular(Potential({v1, v2}));
  for (int j = 0; j <= 2; ++j) CHECK(d2.D.coeff(j) == doctest::Approx(ref.coeff(j)));
  CHECK(d2.E.degree() == 2);
  CHECK(d2.E.leading() == doctest::Approx(1.0));
  CHECK(d2.E.coeff(1) == doctest::Approx(-(4.0 + v1)));
}

TEST_CASE("E for V = (0,...,0,Vb) is the square of phi0_b") {
  for (int b = 2; b <= 7; ++b) {
    std::vector<double> v(static_cast<std::size_t>(b), 0.0);
    v.back() = 1.7;
    const auto d = transmission_det(Potential(v));
    const LambdaPoly sq = free_regular(b) * free_regular(b);
    for (int j = 0; j <= sq.degree(); ++j) CHECK(d.E.coeff(j) == doctest::Approx(sq.coeff(j)).epsilon(1e-10));
  }
}

TEST_CASE("transmission eigenvalues of two-site potentials") {
  struct Case {
    double v1, v2;
    std::vector<Complex> eig;
  };
  const std::vector<Case> cases{
      {-4.0, -1.0, {{0.0, 0.0}, {0.0, 0.0}}},
      {-4.0, -4.0 / 5.0, {{0.0, -1.0}, {0.0, 1.0}}},
      {-4.0, 4.0 / 5.0, {{-3.0, 0.0}, {3.0, 0.0}}},
      {-2.0, -1.0, {{1.0, -1.0}, {1.0, 1.0}}},
  };
  for (const auto& c : cases) {
    const auto spec = transmission_eigenvalues(Potential({c.v1, c.v2}));
    REQUIRE(spec.eigenvalues.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(spec.eigenvalues[i] - c.eig[i]) <= 1e-9);
  }
  const auto triple = transmission_eigenvalues(Potential({0.0, 0.0, 1.0}));
  REQUIRE(triple.eigenvalues.size() == 4);
  const std::vector<double> want{1.0, 1.0, 3.0, 3.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(triple.eigenvalues[i] - want[i]) <= 1e-7);
  CHECK_THROWS_AS(transmission_eigenvalues(Potential({1.0})), Error);
  CHECK_THROWS_AS(transmission_eigenvalues(Potential({1.0, 0.0})), Error);
}

TEST_CASE("sum rule and the S = 1 property at real eigenvalues in (0, 4)") {
  std::mt19937_64 rng(19);
  int real_hits = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int b = 2 + trial % 6;
    const auto v = oracle::random_potential(rng, b, 2.0);
    const Potential V(v);
    const auto spec = transmission_eigenvalues(V);
    CHECK(static_cast<int>(spec.eigenvalues.size()) == 2 * b - 2);
    Complex sum = 0.0;
    for (auto l : spec.eigenvalues) sum += l;
    double expect = 4.0 * (b - 1);
    for (int j = 0; j < b - 1; ++j) expect += v[j];
    CHECK(std::abs(sum - expect) <= 1e-8 * (1.0 + std::abs(sum)));
    const ScatteringMatrix S = scattering_matrix(jost_function(V));
    for (auto l : spec.eigenvalues) {
      if (std::abs(l.imag()) > 1e-12 || l.real() <= 1e-6 || l.real() >= 4.0 - 1e-6) continue;
      ++real_hits;
      // 2 - z - 1/z = l on |z| = 1: cos(theta) = 1 - l/2.
      const Complex z = std::polar(1.0, std::acos(1.0 - l.real() / 2.0));
      CHECK(std::abs(S(z) - 1.0) <= 1e-7);
    }
  }
  CHECK(real_hits > 0);
}

TEST_CASE("endpoint transmission eigenvalue at zero") {
  for (double v1 : {-1.0, 0.5, 1.3, -3.0}) {
    const double v2 = -v1 / (4.0 + 2.0 * v1);
    const Potential V({v1, v2});
    const auto d = transmission_det(V);
    CHECK(std::abs(d.E(0.0)) <= 1e-9);
    const LaurentPoly f0 = jost_function(V);
    CHECK(std::abs(f0(1.0)) > 1e-9);
    CHECK(std::abs(f0.derivative()(1.0)) <= 1e-9);
  }
}

TEST_CASE("D routes agree for random potentials up to b = 12") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 60; ++trial) {
    const int b = 1 + trial % 12;
    CHECK_NOTHROW(transmission_det(Potential(oracle::random_potential(rng, b, 2.0))));
  }
}

TEST_CASE("A coefficients") {
  const ATable I = a_coefficients(Potential({0.0, 0.0}), 4);
  for (int n = 1; n <= 4; ++n)
    for (int j = 1; j <= n; ++j) CHECK(I(n, j) == (j == n ? 1.0 : 0.0));

  const ATable A = a_coefficients(Potential({-1.0, 1.0 / 6.0}), 3);
  CHECK(A(2, 1) == doctest::Approx(-1.0));
  CHECK(A(3, 1) == doctest::Approx(-1.0 / 6.0));
  CHECK(A(3, 2) == doctest::Approx(-5.0 / 6.0));
  CHECK(A(1, 0) == 0.0);
  CHECK(A(3, 3) == 1.0);

  std::mt19937_64 rng(21);
  for (int b = 1; b <= 8; ++b) {
    const auto v = oracle::random_potential(rng, b, 2.0);
    const ATable T = a_coefficients(Potential(v), b + 1);
    double s = 0.0;
    for (int n = 1; n <= b; ++n) {
      s += v[n - 1];
      CHECK(T(n + 1, n) == doctest::Approx(s));
      // V_n = A_{n+1,n} - A_{n,n-1}
      CHECK(T(n + 1, n) - T(n, n - 1) == doctest::Approx(v[n - 1]));
    }
  }
}
