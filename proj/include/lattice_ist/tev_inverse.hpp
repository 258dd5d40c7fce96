#pragma once

// Inversion from transmission eigenvalues: the determinant E from its zeros,
// the Jost function up to the unknown V_b, V_b from the trace identity, and
// delegation to one of the linear inversions.

#include <optional>
#include <string>
#include <vector>

#include "lattice_ist/forward.hpp"

namespace lattice_ist {

/// Tolerance of both unusual-case detectors.
inline constexpr double kUnusualTolerance = 1e-7;

enum class InversionStatus { Unique, Unusual, Inconsistent };
enum class InversionMethod { Marchenko, GelfandLevitan };

const char* to_string(InversionStatus s) noexcept;

/// Members of the b = 3 unusual family (V_1, -V_1, V_3) sharing one quartic E.
struct UnusualFamily {
  /// (gamma, epsilon) = (0, 0): V_1 = V_2 = 0 and any V_3 != 0.
  bool one_parameter_family = false;
  std::vector<Potential> potentials;
};

struct InversionDiagnostics {
  int b = 0;
  double K01_over_Vb = 0.0;
  double eigenvalue_sum = 0.0;
  double four_b_minus_1 = 0.0;
  /// eigenvalue_sum - 4(b-1)
  double gap = 0.0;
  std::vector<std::string> warnings;
  /// Why the status is not Unique.
  std::string message;
  /// Only for an unusual spectrum with b = 3.
  std::optional<double> gamma, epsilon;
  std::optional<UnusualFamily> family;
};

struct InversionReport {
  InversionStatus status = InversionStatus::Inconsistent;
  std::optional<Potential> potential;
  std::optional<LaurentPoly> f0;
  InversionDiagnostics diagnostics;
};

/// Builds a spectrum from a list of eigenvalues; b = count/2 + 1.
/// Throws OddCount for an odd count.
TransmissionSpectrum make_spectrum(std::vector<Complex> eigenvalues);

/// prod (lambda - lambda_j), monic and real. A real eigenvalue may carry an
/// imaginary part up to 1e-9 max(1, |lambda|); the others must pair with a
/// conjugate within the same tolerance (NotConjugateClosed otherwise).
/// The empty spectrum gives E = 1 (b = 1).
LambdaPoly build_E(const TransmissionSpectrum& spec);

/// plus_part((z - 1/z) E(2 - z - 1/z)) = (f0 - 1) / V_b. Throws
/// ZeroCoefficientResidual when the z^0 term of the product exceeds 1e-10
/// relative, InvalidArgument when E is not monic.
LaurentPoly f0_scaled(const LambdaPoly& E);
/// Same quantity built directly from the eigenvalues, factor by factor in z;
/// accurate where the monomial form of E is not (degree 2b - 2 above ~6).
LaurentPoly f0_scaled(const TransmissionSpectrum& spec);

/// V_b = (sum lambda_j - 4(b-1)) / (K01_over_Vb - 1). Throws UnusualCase
/// when |K01_over_Vb - 1| <= kUnusualTolerance.
double recover_Vb(const TransmissionSpectrum& spec, double K01_over_Vb);

/// Unique: potential and f0 present, and the potential's transmission
/// eigenvalues match the input within 1e-6 max(1, |lambda|). Unusual: the
/// trace identity leaves V_b undetermined. Inconsistent: the detectors
/// disagree, the delegated inversion fails, or the re-match fails.
/// Invalid input (odd count, not conjugate-closed) throws.
InversionReport tev_invert(const TransmissionSpectrum& spec, InversionMethod method = InversionMethod::Marchenko);

/// Real roots V_1 != 0 of V_1^3 - gamma V_1 + epsilon = 0, each with
/// V_3 = V_1^2 / epsilon. For epsilon = 0 and gamma != 0 no member exists.
UnusualFamily unusual_family_b3(double gamma, double epsilon);

/// (gamma, epsilon) of a b = 3 unusual-case determinant
/// E = l^4 - 8 l^3 + (22 - gamma) l^2 + (4 gamma + epsilon - 24) l + (9 - 3 gamma - 2 epsilon).
std::pair<double, double> unusual_b3_parameters(const LambdaPoly& E);

}  // namespace lattice_ist
