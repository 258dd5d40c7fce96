#pragma once

// Gel'fand-Levitan inversion: the kernel G_{nm} of the spectral measure
// relative to the free one, the triangular GL system for the A-coefficients,
// and recovery of the potential.

#include <string>
#include <vector>

#include "lattice_ist/forward.hpp"

namespace lattice_ist {

/// Symmetric G_{nm}, 1 <= n, m <= size().
class GLKernel {
 public:
  GLKernel() = default;
  explicit GLKernel(int size);

  int size() const noexcept { return size_; }
  double operator()(int n, int m) const noexcept;
  /// Sets both G_{nm} and G_{mn}.
  void set(int n, int m, double value);

  /// True when the continuous part came from the quadrature fallback.
  bool used_quadrature = false;
  std::vector<std::string> warnings;

 private:
  int size_ = 0;
  std::vector<double> g_;
};

/// G_{nm} = -(1/2)(1/2 pi i) \oint (z^n - z^-n)(z^m - z^-m) dz / (z f0 g0)
///          + sum_s C_s^2 phi0_n(mu_s) phi0_m(mu_s) - delta_{nm},
/// the contour integral evaluated by residues at z = 0 and at the zeros of
/// f0 g0 inside the unit disc. When a zero of f0 lies within 1e-7 of the
/// circle the midpoint-rule fallback is used instead and a RootNearCircle
/// warning is attached.
GLKernel gl_kernel(const SpectralData& data, int size);

/// The same kernel with the continuous part from (2/pi) \int_0^pi
/// sin(n t) sin(m t) / |f0(e^{it})|^2 dt on `nodes` midpoints.
GLKernel gl_kernel_quadrature(const SpectralData& data, int size, int nodes = 4096);

/// Solves A_{nm} + G_{nm} + sum_{j<n} A_{nj} G_{jm} = 0, m < n, for
/// n = 2..b+1. Throws SingularSystem with the row n.
ATable gl_solve(const GLKernel& G, int b);

/// V_n = A_{n+1,n} - A_{n,n-1}, with A_{10} = 0.
Potential potential_from_A(const ATable& A, int b);

/// Kernel, system and recovery; the recovered potential's Jost function
/// must match data.f0 within 1e-7 per coefficient (Inconsistent otherwise).
Potential gl_invert(const SpectralData& data);

/// gl_invert, keeping the kernel's warnings.
struct GLInversion {
  Potential potential;
  std::vector<std::string> warnings;
};
GLInversion gl_invert_with_warnings(const SpectralData& data);

}  // namespace lattice_ist
