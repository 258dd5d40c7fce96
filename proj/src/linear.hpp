#pragma once

// Dense Gaussian elimination with partial pivoting, shared by the two
// linear inversion schemes. Systems here are at most a few dozen wide.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lattice_ist/error.hpp"

namespace lattice_ist::detail {

/// Solves A x = rhs for a row-major n x n matrix. Throws SingularSystem
/// carrying `label` when a pivot falls below 1e-12 times the largest entry
/// of A. T is double or long double.
template <class T>
std::vector<T> solve_dense(std::vector<T> A, std::vector<T> rhs, int label) {
  using std::abs;
  const std::size_t n = rhs.size();
  T scale = 0;
  for (T a : A) scale = std::max(scale, abs(a));
  const T floor = T(1e-12) * std::max(T(1), scale);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A[i * n + k]) > std::abs(A[p * n + k])) p = i;
    if (std::abs(A[p * n + k]) < floor)
      throw Error(ErrorCode::SingularSystem, "pivot below threshold in system " + std::to_string(label), label);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A[k * n + j], A[p * n + j]);
      std::swap(rhs[k], rhs[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = A[i * n + k] / A[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t k = n; k-- > 0;) {
    T s = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A[k * n + j] * x[j];
    x[k] = s / A[k * n + k];
  }
  return x;
}

}  // namespace lattice_ist::detail
