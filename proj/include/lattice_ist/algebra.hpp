#pragma once

// Polynomial infrastructure shared by every pipeline: polynomials in the
// spectral parameter lambda, Laurent polynomials in z, the substitution
// lambda = 2 - z - 1/z, and a root finder with multiplicity clustering.

#include <complex>
#include <span>
#include <vector>

#include "lattice_ist/error.hpp"

namespace lattice_ist {

using Complex = std::complex<double>;

/// Boundary coefficients with |c| <= kTrimThreshold * max|c| are dropped.
inline constexpr double kTrimThreshold = 1e-12;

/// Polynomial in lambda, coefficient of lambda^j at index j.
/// The zero polynomial has no coefficients and degree -1.
class LambdaPoly {
 public:
  LambdaPoly() = default;
  explicit LambdaPoly(std::vector<double> coeffs);

  static LambdaPoly constant(double c) { return LambdaPoly({c}); }
  /// The monomial lambda.
  static LambdaPoly identity() { return LambdaPoly({0.0, 1.0}); }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  double coeff(int j) const noexcept;
  double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  /// max |c_j|, 0 for the zero polynomial.
  double scale() const noexcept;

  double operator()(double x) const noexcept;
  Complex operator()(Complex x) const noexcept;
  LambdaPoly derivative() const;

  LambdaPoly& operator+=(const LambdaPoly& o);
  LambdaPoly& operator-=(const LambdaPoly& o);
  LambdaPoly& operator*=(double s);

  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  friend LambdaPoly operator*(LambdaPoly a, double s) { return a *= s; }
  friend LambdaPoly operator*(double s, LambdaPoly a) { return a *= s; }
  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);
  friend LambdaPoly operator-(LambdaPoly a) { return a *= -1.0; }

 private:
  std::vector<double> coeffs_;
};

/// Laurent polynomial sum_{k=lo}^{hi} c_k z^k. The zero element has no
/// coefficients, lo() == 0 and hi() == -1.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(int lo, std::vector<double> coeffs);

  static LaurentPoly constant(double c) { return LaurentPoly(0, {c}); }
  static LaurentPoly monomial(int power, double c = 1.0) { return LaurentPoly(power, {c}); }

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Coefficient of z^k; zero outside [lo, hi].
  double coeff(int k) const noexcept;
  /// Coefficients for z^lo .. z^hi.
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double scale() const noexcept;

  Complex operator()(Complex z) const noexcept;
  double operator()(double z) const noexcept;
  /// d/dz.
  LaurentPoly derivative() const;
  /// The substitution z -> 1/z.
  LaurentPoly reflected() const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(double s);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, double s) { return a *= s; }
  friend LaurentPoly operator*(double s, LaurentPoly a) { return a *= s; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

 private:
  int lo_ = 0;
  std::vector<double> coeffs_;
};

struct Root {
  Complex location;
  int multiplicity = 1;
};

/// Roots of a real polynomial, clustered, conjugate-paired and sorted by
/// (real, imag).
class RootSet {
 public:
  RootSet() = default;
  explicit RootSet(std::vector<Root> roots) : roots_(std::move(roots)) {}

  const std::vector<Root>& roots() const noexcept { return roots_; }
  std::size_t size() const noexcept { return roots_.size(); }
  const Root& operator[](std::size_t i) const { return roots_[i]; }
  auto begin() const noexcept { return roots_.begin(); }
  auto end() const noexcept { return roots_.end(); }

  /// Sum of multiplicities.
  int degree() const noexcept;
  /// Each root repeated by its multiplicity.
  std::vector<Complex> expanded() const;

 private:
  std::vector<Root> roots_;
};

/// p(2 - z - 1/z), palindromic with lo = -deg p, hi = deg p.
LaurentPoly lambda_to_laurent(const LambdaPoly& p);

/// Inverse of lambda_to_laurent. Throws NotPalindromic when
/// max |c_k - c_{-k}| > tol * max |c|.
LambdaPoly laurent_to_lambda(const LaurentPoly& L, double tol = 1e-9);

/// Strictly positive powers of L.
LaurentPoly plus_part(const LaurentPoly& L);
/// Strictly negative powers of L.
LaurentPoly minus_part(const LaurentPoly& L);
/// Coefficient of z^0.
double zero_coeff(const LaurentPoly& L);

/// Taylor coefficients a_0..a_order of 1/p at z = 0. Requires lo >= 0;
/// throws SingularAtOrigin when |p(0)| < 1e-14.
std::vector<double> reciprocal_series(const LaurentPoly& p, int order);

/// Exact division by (z - 1/z). Throws DivisionRemainder when the remainder
/// exceeds tol * max|c|.
LaurentPoly divide_by_z_minus_zinv(const LaurentPoly& L, double tol = 1e-10);

/// Roots of the real polynomial sum_j c[j] x^j (ascending coefficients).
/// Aberth-Ehrlich iteration with Newton polishing; roots closer than
/// 1e-7 * max(1, |r|) are merged. Throws DidNotConverge after 200 sweeps.
RootSet polynomial_roots(std::span<const double> ascending);

RootSet roots(const LambdaPoly& p);
/// Roots of z^{-lo} L(z): the nonzero roots of L, plus a root at 0 of
/// multiplicity lo when lo > 0.
RootSet roots(const LaurentPoly& L);

}  // namespace lattice_ist
