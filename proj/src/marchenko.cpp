#include "lattice_ist/marchenko.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "linear.hpp"
#include "refine.hpp"

namespace lattice_ist {

namespace {

constexpr double kRoundTrip = 1e-9;

void check_jost_input(const LaurentPoly& f0, int b) {
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "b >= 1 required");
  if (f0.is_zero() || f0.lo() != 0) throw Error(ErrorCode::InvalidArgument, "f0 must be a polynomial in z");
  if (std::abs(f0.coeff(0) - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "f0 must have constant term 1");
  if (f0.hi() > 2 * b - 1) throw Error(ErrorCode::InvalidArgument, "deg f0 exceeds 2b - 1");
}

}  // namespace

MarchenkoKernel::MarchenkoKernel(int b, std::vector<double> values) : b_(b), values_(std::move(values)) {
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "b >= 1 required");
  if (static_cast<int>(values_.size()) != 2 * b - 1)
    throw Error(ErrorCode::InvalidArgument, "kernel needs 2b - 1 values");
  for (double m : values_)
    if (!std::isfinite(m)) throw Error(ErrorCode::InvalidArgument, "non-finite kernel value");
}

double MarchenkoKernel::operator()(int n) const noexcept {
  return (n < 1 || n >= 2 * b_) ? 0.0 : values_[static_cast<std::size_t>(n - 1)];
}

namespace {

using Wide = long double;

// 1/f0 has Taylor coefficients growing like |z_s|^{-k} for a bound state z_s
// near the origin, and M_n is a cancelling sum of them: work in long double.
std::vector<Wide> kernel_wide(const LaurentPoly& f0, int b, int n_max) {
  const int top = std::max(2 * b - 1, n_max);
  const Wide c0 = f0.coeff(0);
  std::vector<Wide> a(static_cast<std::size_t>(top + 1));
  a[0] = 1 / c0;
  for (int k = 1; k <= top; ++k) {
    Wide s = 0;
    for (int j = 1; j <= std::min(k, f0.hi()); ++j) s += static_cast<Wide>(f0.coeff(j)) * a[static_cast<std::size_t>(k - j)];
    a[static_cast<std::size_t>(k)] = -s / c0;
  }
  std::vector<Wide> M(static_cast<std::size_t>(n_max + 1), 0);
  for (int n = 1; n <= n_max; ++n) {
    // for n >= 2b the sum is empty: g0 z^{n-1} has no pole at the origin
    Wide s = 0;
    for (int j = n; j <= 2 * b - 1; ++j) s += static_cast<Wide>(f0.coeff(j)) * a[static_cast<std::size_t>(j - n)];
    M[static_cast<std::size_t>(n)] = -s;
  }
  return M;
}

// M holds M_0..M_{>=2b-1}; entries past the end are zero.
KTable solve_wide(int b, const std::vector<Wide>& M) {
  auto m_at = [&](int k) -> Wide {
    return (k < 1 || k >= 2 * b || k >= static_cast<int>(M.size())) ? 0 : M[static_cast<std::size_t>(k)];
  };
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(b));
  for (int n = 0; n < b; ++n) {
    const int lo = n + 1, hi = 2 * b - n - 1;
    const int size = hi - lo + 1;
    std::vector<double> row{1.0};
    if (size > 0) {
      std::vector<Wide> A(static_cast<std::size_t>(size * size));
      std::vector<Wide> rhs(static_cast<std::size_t>(size));
      for (int r = 0; r < size; ++r) {
        const int m = lo + r;
        rhs[static_cast<std::size_t>(r)] = -m_at(n + m);
        for (int c = 0; c < size; ++c) {
          const int j = lo + c;
          A[static_cast<std::size_t>(r * size + c)] = (j == m ? 1 : 0) + m_at(j + m);
        }
      }
      for (Wide x : detail::solve_dense(std::move(A), std::move(rhs), n)) row.push_back(static_cast<double>(x));
    }
    rows[static_cast<std::size_t>(n)] = std::move(row);
  }
  return KTable(b, std::move(rows));
}

}  // namespace

std::vector<double> marchenko_kernel_extended(const LaurentPoly& f0, int b, int n_max) {
  check_jost_input(f0, b);
  const auto M = kernel_wide(f0, b, n_max);
  return std::vector<double>(M.begin() + 1, M.end());
}

MarchenkoKernel marchenko_kernel(const LaurentPoly& f0, int b) {
  return MarchenkoKernel(b, marchenko_kernel_extended(f0, b, 2 * b - 1));
}

int infer_support(const std::vector<double>& M) {
  int last = 0;  // largest n with |M_n| > threshold
  for (std::size_t i = 0; i < M.size(); ++i)
    if (std::abs(M[i]) > 1e-9) last = static_cast<int>(i) + 1;
  // need 2b > last
  return std::max(1, last / 2 + 1);
}

KTable marchenko_solve(const MarchenkoKernel& M) {
  const int b = M.support();
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "b >= 1 required");
  std::vector<Wide> wide{0};
  for (double m : M.values()) wide.push_back(m);
  return solve_wide(b, wide);
}

Potential potential_from_K(const KTable& K) {
  const int b = K.support();
  std::vector<double> V(static_cast<std::size_t>(b));
  for (int n = 1; n <= b; ++n) V[static_cast<std::size_t>(n - 1)] = K(n - 1, n) - K(n, n + 1);
  return Potential(std::move(V));
}

Potential marchenko_invert(const LaurentPoly& f0, int b) {
  check_jost_input(f0, b);
  const Potential V = detail::refine_to_jost(potential_from_K(solve_wide(b, kernel_wide(f0, b, 2 * b - 1))), f0);
  const LaurentPoly back = jost_function(V);
  double err = 0.0;
  for (int k = 0; k <= 2 * b - 1; ++k) err = std::max(err, std::abs(back.coeff(k) - f0.coeff(k)));
  if (err > kRoundTrip * std::max(1.0, f0.scale()))
    throw Error(ErrorCode::Inconsistent, "recovered potential does not reproduce f0");
  return V;
}

}  // namespace lattice_ist
