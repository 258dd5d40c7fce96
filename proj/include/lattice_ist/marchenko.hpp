#pragma once

// Marchenko inversion: kernel M_n from the Jost function, the finite
// Marchenko system for the Jost coefficients, and recovery of V.

#include <vector>

#include "lattice_ist/forward.hpp"

namespace lattice_ist {

/// M_1..M_{2b-1}; M_n = 0 for n >= 2b.
class MarchenkoKernel {
 public:
  MarchenkoKernel() = default;
  /// `values` holds M_1..M_{2b-1}.
  MarchenkoKernel(int b, std::vector<double> values);

  int support() const noexcept { return b_; }
  /// M_n for n >= 1; zero for n >= 2b.
  double operator()(int n) const noexcept;
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  int b_ = 0;
  std::vector<double> values_;
};

/// M_n = -sum_{j=n}^{2b-1} K_{0j} a_{j-n} with a the Taylor coefficients of 1/f0.
/// This is -Res[S z^{n-1}, 0]; the bound-state terms cancel the residues at
/// the bound-state poles.
MarchenkoKernel marchenko_kernel(const LaurentPoly& f0, int b);

/// Kernel values for n = 1..n_max without truncation at 2b (diagnostic).
std::vector<double> marchenko_kernel_extended(const LaurentPoly& f0, int b, int n_max);

/// Smallest b with |M_n| <= 1e-9 for all n >= 2b, given M_1..M_N.
int infer_support(const std::vector<double>& M);

/// Solves K_{nm} + M_{n+m} + sum_j K_{nj} M_{j+m} = 0 row by row.
/// Throws SingularSystem with the row n.
KTable marchenko_solve(const MarchenkoKernel& M);

/// V_n = K_{n-1,n} - K_{n,n+1}, K_{b,b+1} = 0.
Potential potential_from_K(const KTable& K);

/// Kernel, system and recovery; the result's Jost function must reproduce
/// f0 within 1e-9 per coefficient (Inconsistent otherwise).
Potential marchenko_invert(const LaurentPoly& f0, int b);

}  // namespace lattice_ist
