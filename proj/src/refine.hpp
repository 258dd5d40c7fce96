#pragma once

// Gauss-Newton polish of a recovered potential against the Jost function it
// came from. The linear inversions lose digits when the kernel spans many
// orders of magnitude (large norming constants); the forward map stays well
// conditioned, so a couple of least-squares steps on V -> f0 restore them.

#include <algorithm>
#include <cmath>
#include <vector>

#include "lattice_ist/forward.hpp"

namespace lattice_ist::detail {

using Wide = long double;

// Coefficients z^0..z^{2b-1} of f0 and of d f0 / d V_k, k = 1..b, from
//   f_{n-1} = (z + 1/z + V_n) f_n - f_{n+1},  f_n = z^n for n >= b.
// Polys are stored with offset b so negative powers of the intermediate f_n fit.
inline void jost_with_jacobian(const std::vector<Wide>& V, std::vector<Wide>& f0, std::vector<std::vector<Wide>>& J) {
  const int b = static_cast<int>(V.size());
  const int width = 3 * b + 2;
  using Poly = std::vector<Wide>;
  auto step = [&](const Poly& fn, const Poly& fn1, Wide v) {
    Poly out(static_cast<std::size_t>(width), 0);
    for (int i = 0; i < width; ++i) {
      Wide s = v * fn[static_cast<std::size_t>(i)] - fn1[static_cast<std::size_t>(i)];
      if (i > 0) s += fn[static_cast<std::size_t>(i - 1)];
      if (i + 1 < width) s += fn[static_cast<std::size_t>(i + 1)];
      out[static_cast<std::size_t>(i)] = s;
    }
    return out;
  };
  auto mono = [&](int p) {
    Poly m(static_cast<std::size_t>(width), 0);
    m[static_cast<std::size_t>(p + b)] = 1;
    return m;
  };
  Poly next = mono(b + 1), cur = mono(b);
  std::vector<Poly> dnext(static_cast<std::size_t>(b), Poly(static_cast<std::size_t>(width), 0)), dcur = dnext;
  for (int n = b; n >= 1; --n) {
    Poly prev = step(cur, next, V[static_cast<std::size_t>(n - 1)]);
    std::vector<Poly> dprev(static_cast<std::size_t>(b));
    for (int k = 0; k < b; ++k) {
      dprev[static_cast<std::size_t>(k)] =
          step(dcur[static_cast<std::size_t>(k)], dnext[static_cast<std::size_t>(k)], V[static_cast<std::size_t>(n - 1)]);
      if (k == n - 1)
        for (int i = 0; i < width; ++i) dprev[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] += cur[static_cast<std::size_t>(i)];
    }
    next = std::move(cur);
    cur = std::move(prev);
    dnext = std::move(dcur);
    dcur = std::move(dprev);
  }
  f0.assign(static_cast<std::size_t>(2 * b), 0);
  J.assign(static_cast<std::size_t>(2 * b), std::vector<Wide>(static_cast<std::size_t>(b), 0));
  for (int p = 0; p < 2 * b; ++p) {
    f0[static_cast<std::size_t>(p)] = cur[static_cast<std::size_t>(p + b)];
    for (int k = 0; k < b; ++k) J[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] = dcur[static_cast<std::size_t>(k)][static_cast<std::size_t>(p + b)];
  }
}

// min ||A x - r||_2 by Householder QR; A is m x n with m >= n. Returns empty
// when A is numerically rank deficient.
inline std::vector<Wide> least_squares(std::vector<std::vector<Wide>> A, std::vector<Wide> r) {
  const std::size_t m = A.size(), n = A.empty() ? 0 : A[0].size();
  Wide scale = 0;
  for (const auto& row : A)
    for (Wide a : row) scale = std::max(scale, std::fabs(a));
  for (std::size_t k = 0; k < n; ++k) {
    Wide norm = 0;
    for (std::size_t i = k; i < m; ++i) norm += A[i][k] * A[i][k];
    norm = std::sqrt(norm);
    if (norm <= Wide(1e-14) * scale) return {};
    const Wide alpha = A[k][k] > 0 ? -norm : norm;
    std::vector<Wide> v(m, 0);
    for (std::size_t i = k; i < m; ++i) v[i] = A[i][k];
    v[k] -= alpha;
    Wide vv = 0;
    for (std::size_t i = k; i < m; ++i) vv += v[i] * v[i];
    if (vv == 0) continue;
    for (std::size_t j = k; j < n; ++j) {
      Wide s = 0;
      for (std::size_t i = k; i < m; ++i) s += v[i] * A[i][j];
      s = 2 * s / vv;
      for (std::size_t i = k; i < m; ++i) A[i][j] -= s * v[i];
    }
    Wide s = 0;
    for (std::size_t i = k; i < m; ++i) s += v[i] * r[i];
    s = 2 * s / vv;
    for (std::size_t i = k; i < m; ++i) r[i] -= s * v[i];
  }
  std::vector<Wide> x(n, 0);
  for (std::size_t k = n; k-- > 0;) {
    Wide s = r[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
    x[k] = s / A[k][k];
  }
  return x;
}

/// Refines V so that jost_function(V) matches f0 in the least-squares sense.
/// Steps that do not reduce the residual are discarded.
inline Potential refine_to_jost(const Potential& V, const LaurentPoly& f0) {
  const int b = V.support();
  std::vector<Wide> v(V.values().begin(), V.values().end());
  std::vector<Wide> f, best_f;
  std::vector<std::vector<Wide>> J;
  auto residual = [&](const std::vector<Wide>& g) {
    std::vector<Wide> r(static_cast<std::size_t>(2 * b));
    for (int p = 0; p < 2 * b; ++p) r[static_cast<std::size_t>(p)] = Wide(f0.coeff(p)) - g[static_cast<std::size_t>(p)];
    return r;
  };
  auto norm = [](const std::vector<Wide>& r) {
    Wide s = 0;
    for (Wide x : r) s = std::max(s, std::fabs(x));
    return s;
  };
  jost_with_jacobian(v, f, J);
  Wide best = norm(residual(f));
  for (int it = 0; it < 4 && best > 0; ++it) {
    const std::vector<Wide> dv = least_squares(J, residual(f));
    if (dv.empty()) break;
    std::vector<Wide> trial = v;
    for (int k = 0; k < b; ++k) trial[static_cast<std::size_t>(k)] += dv[static_cast<std::size_t>(k)];
    std::vector<Wide> tf;
    std::vector<std::vector<Wide>> tJ;
    jost_with_jacobian(trial, tf, tJ);
    const Wide r = norm(residual(tf));
    if (!(r < best)) break;
    best = r;
    v = std::move(trial);
    f = std::move(tf);
    J = std::move(tJ);
  }
  if (v.back() == 0) return V;
  return Potential(std::vector<double>(v.begin(), v.end()));
}

}  // namespace lattice_ist::detail
