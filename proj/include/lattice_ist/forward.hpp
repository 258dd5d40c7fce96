#pragma once

// Forward map: from a compactly supported potential on the half-line lattice
// to the Jost function, scattering matrix, bound states, regular solutions
// and transmission eigenvalues.

#include <span>
#include <vector>

#include "lattice_ist/algebra.hpp"

namespace lattice_ist {

/// Real potential V_1..V_b on the lattice; V_n = 0 for n > b.
class Potential {
 public:
  Potential() = default;
  explicit Potential(std::vector<double> values);

  int support() const noexcept { return static_cast<int>(values_.size()); }
  /// V_n for n >= 1 (1-based); zero beyond the support.
  double operator[](int n) const noexcept;
  std::span<const double> values() const noexcept { return values_; }
  double last() const noexcept { return values_.empty() ? 0.0 : values_.back(); }
  /// Throws InvalidArgument unless |V_b| > 1e-12.
  void require_nonzero_last() const;

 private:
  std::vector<double> values_;
};

/// Jost coefficients K_{nm}, 0 <= n <= b-1, n <= m <= 2b-n-1. Row n holds the
/// coefficients of m_n = z^{-n} f_n in ascending powers of z.
class KTable {
 public:
  KTable() = default;
  KTable(int b, std::vector<std::vector<double>> rows);

  int support() const noexcept { return b_; }
  /// K_{nm}; zero outside the stored range (and for n >= b).
  double operator()(int n, int m) const noexcept;
  /// m_n as a polynomial in z (lo = 0). For n >= b this is 1.
  LaurentPoly m(int n) const;
  /// Jost solution f_n = z^n m_n.
  LaurentPoly jost_solution(int n) const;
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

 private:
  int b_ = 0;
  std::vector<std::vector<double>> rows_;
};

struct BoundState {
  double z = 0.0;        ///< zero of f_0 in (-1,0) or (0,1)
  double mu = 0.0;       ///< 2 - z - 1/z
  double c = 0.0;        ///< Marchenko norming constant
  double C = 0.0;        ///< Gel'fand-Levitan norming constant
};

/// Jost function plus bound-state data; input to both linear inversions.
struct SpectralData {
  LaurentPoly f0;
  std::vector<BoundState> bound_states;
  int b = 0;
};

/// 2b-2 transmission eigenvalues, conjugate-closed, with multiplicity.
struct TransmissionSpectrum {
  int b = 0;
  std::vector<Complex> eigenvalues;
};

/// g_0 / f_0 kept as its two Laurent polynomials.
struct ScatteringMatrix {
  LaurentPoly numerator;
  LaurentPoly denominator;
  Complex operator()(Complex z) const { return numerator(z) / denominator(z); }
};

enum class Endpoint { PlusOne, MinusOne };
enum class EndpointClass { Generic, Exceptional };

/// D and E = D / V_b of the transmission determinant.
struct TransmissionDeterminant {
  LambdaPoly D;
  LambdaPoly E;  ///< zero polynomial when V_b == 0
};

KTable jost_table(const Potential& V);
LaurentPoly jost_function(const Potential& V);
/// g_0: coefficient of z^-j equals that of z^j in f0.
LaurentPoly g_from_f(const LaurentPoly& f0);
ScatteringMatrix scattering_matrix(const LaurentPoly& f0);

/// phi_1..phi_{n_max} of phi_{n+1} + phi_{n-1} = (2 - lambda + V_n) phi_n,
/// phi_0 = 0, phi_1 = 1.
std::vector<LambdaPoly> regular_solution(const Potential& V, int n_max);
/// Regular solution of the free problem; free_regular(0) is the zero polynomial.
LambdaPoly free_regular(int n);

/// Bound states with both norming constants. Throws RootToleranceConflict
/// for a root within 1e-7 of +-1 that is not an exceptional endpoint zero, and
/// ComplexRootInsideDisc for a non-real zero strictly inside the unit disc.
std::vector<BoundState> bound_states(const LaurentPoly& f0, const Potential& V);

/// Bound states from the Jost function alone: c_s from the residue of S/z at
/// z_s, and C_s through c_s = |g_0(z_s) / (z_s - 1/z_s)| C_s.
std::vector<BoundState> bound_states_from_jost(const LaurentPoly& f0);

SpectralData spectral_data(const Potential& V);
SpectralData spectral_data_from_jost(const LaurentPoly& f0, int b);

EndpointClass classify_endpoint(const LaurentPoly& f0, Endpoint end);

/// D via (f0 - g0)/(z - 1/z), cross-checked against det[[phi0_b, phi_b],[phi0_{b+1}, phi_{b+1}]].
TransmissionDeterminant transmission_det(const Potential& V);
/// The same determinant evaluated only through the regular solutions.
LambdaPoly transmission_det_from_regular(const Potential& V);

/// Roots of E with multiplicity. Needs b >= 2 and V_b != 0.
TransmissionSpectrum transmission_eigenvalues(const Potential& V);

/// Expansion coefficients of phi_n over the free regular solutions,
/// phi_n = phi0_n + sum_{j<n} A_{nj} phi0_j, for 1 <= n <= size().
/// The diagonal is 1; A_{nj} = 0 for j > n or j < 1.
class ATable {
 public:
  ATable() = default;
  explicit ATable(int size);

  int size() const noexcept { return size_; }
  double operator()(int n, int j) const noexcept;
  /// Strictly-lower entries only (1 <= j < n <= size()).
  void set(int n, int j, double value);

 private:
  int size_ = 0;
  std::vector<double> lower_;  // row-major packed strict lower triangle
};

ATable a_coefficients(const Potential& V, int n_max);

}  // namespace lattice_ist
