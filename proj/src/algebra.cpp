#include "lattice_ist/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace lattice_ist {

namespace {

double max_abs(std::span<const double> c) {
  double m = 0.0;
  for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

void check_finite(std::span<const double> c) {
  for (double x : c)
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPalindromic: return "NotPalindromic";
    case ErrorCode::SingularAtOrigin: return "SingularAtOrigin";
    case ErrorCode::DidNotConverge: return "DidNotConverge";
    case ErrorCode::RootToleranceConflict: return "RootToleranceConflict";
    case ErrorCode::ComplexRootInsideDisc: return "ComplexRootInsideDisc";
    case ErrorCode::NonSimpleEndpointZero: return "NonSimpleEndpointZero";
    case ErrorCode::DivisionRemainder: return "DivisionRemainder";
    case ErrorCode::RouteMismatch: return "RouteMismatch";
    case ErrorCode::NormingMismatch: return "NormingMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::RootNearCircle: return "RootNearCircle";
    case ErrorCode::NotConjugateClosed: return "NotConjugateClosed";
    case ErrorCode::OddCount: return "OddCount";
    case ErrorCode::ZeroCoefficientResidual: return "ZeroCoefficientResidual";
    case ErrorCode::UnusualCase: return "UnusualCase";
    case ErrorCode::Inconsistent: return "Inconsistent";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- LambdaPoly

LambdaPoly::LambdaPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  check_finite(coeffs_);
  const double cut = kTrimThreshold * max_abs(coeffs_);
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= cut) coeffs_.pop_back();
}

double LambdaPoly::coeff(int j) const noexcept {
  return (j < 0 || j > degree()) ? 0.0 : coeffs_[static_cast<std::size_t>(j)];
}

double LambdaPoly::scale() const noexcept { return max_abs(coeffs_); }

double LambdaPoly::operator()(double x) const noexcept {
  double r = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
  return r;
}

Complex LambdaPoly::operator()(Complex x) const noexcept {
  Complex r = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
  return r;
}

LambdaPoly LambdaPoly::derivative() const {
  if (degree() < 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = static_cast<double>(j) * coeffs_[j];
  return LambdaPoly(std::move(d));
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& o) {
  std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j] += coeffs_[j];
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[j] += o.coeffs_[j];
  *this = LambdaPoly(std::move(c));
  return *this;
}

LambdaPoly& LambdaPoly::operator-=(const LambdaPoly& o) { return *this += o * -1.0; }

LambdaPoly& LambdaPoly::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  *this = LambdaPoly(std::move(coeffs_));
  return *this;
}

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return LambdaPoly(std::move(c));
}

// --------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(int lo, std::vector<double> coeffs) : lo_(lo), coeffs_(std::move(coeffs)) {
  check_finite(coeffs_);
  const double cut = kTrimThreshold * max_abs(coeffs_);
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= cut) coeffs_.pop_back();
  std::size_t front = 0;
  while (front < coeffs_.size() && std::abs(coeffs_[front]) <= cut) ++front;
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(front));
  lo_ = coeffs_.empty() ? 0 : lo_ + static_cast<int>(front);
}

double LaurentPoly::coeff(int k) const noexcept {
  return (k < lo_ || k > hi()) ? 0.0 : coeffs_[static_cast<std::size_t>(k - lo_)];
}

double LaurentPoly::scale() const noexcept { return max_abs(coeffs_); }

Complex LaurentPoly::operator()(Complex z) const noexcept {
  if (coeffs_.empty()) return 0.0;
  Complex r = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * z + *it;
  return r * std::pow(z, lo_);
}

double LaurentPoly::operator()(double z) const noexcept {
  if (coeffs_.empty()) return 0.0;
  double r = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * z + *it;
  return r * std::pow(z, lo_);
}

LaurentPoly LaurentPoly::derivative() const {
  if (coeffs_.empty()) return {};
  std::vector<double> d(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) d[i] = static_cast<double>(lo_ + static_cast<int>(i)) * coeffs_[i];
  return LaurentPoly(lo_ - 1, std::move(d));
}

LaurentPoly LaurentPoly::reflected() const {
  if (coeffs_.empty()) return {};
  std::vector<double> r(coeffs_.rbegin(), coeffs_.rend());
  return LaurentPoly(-hi(), std::move(r));
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  const int lo = std::min(lo_, o.lo_);
  const int hi = std::max(this->hi(), o.hi());
  std::vector<double> c(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (int k = lo_; k <= this->hi(); ++k) c[static_cast<std::size_t>(k - lo)] += coeff(k);
  for (int k = o.lo_; k <= o.hi(); ++k) c[static_cast<std::size_t>(k - lo)] += o.coeff(k);
  return *this = LaurentPoly(lo, std::move(c));
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += o * -1.0; }

LaurentPoly& LaurentPoly::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this = LaurentPoly(lo_, std::move(coeffs_));
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return LaurentPoly(a.lo_ + b.lo_, std::move(c));
}

// ------------------------------------------------------------ substitutions

// Both directions of the basis change cancel heavily; they accumulate in
// long double and round once at the end.
LaurentPoly lambda_to_laurent(const LambdaPoly& p) {
  if (p.is_zero()) return {};
  const int d = p.degree();
  // Horner in lambda; acc holds powers -d..d, multiplication by (-1/z + 2 - z).
  std::vector<long double> acc(static_cast<std::size_t>(2 * d + 1), 0.0L);
  const auto at = [d](int k) { return static_cast<std::size_t>(k + d); };
  acc[at(0)] = p.coeff(d);
  for (int j = d - 1; j >= 0; --j) {
    const int reach = d - 1 - j;  // acc currently spans -reach..reach
    std::vector<long double> next(acc.size(), 0.0L);
    for (int k = -reach; k <= reach; ++k) {
      const long double c = acc[at(k)];
      next[at(k)] += 2.0L * c;
      next[at(k - 1)] -= c;
      next[at(k + 1)] -= c;
    }
    next[at(0)] += p.coeff(j);
    acc = std::move(next);
  }
  return LaurentPoly(-d, std::vector<double>(acc.begin(), acc.end()));
}

LambdaPoly laurent_to_lambda(const LaurentPoly& L, double tol) {
  if (L.is_zero()) return {};
  const int K = std::max(std::abs(L.lo()), std::abs(L.hi()));
  double asym = 0.0;
  for (int k = 1; k <= K; ++k) asym = std::max(asym, std::abs(L.coeff(k) - L.coeff(-k)));
  if (asym > tol * L.scale())
    throw Error(ErrorCode::NotPalindromic, "asymmetry " + std::to_string(asym) + " exceeds tolerance");

  // z^k + z^-k = s_k(lambda): s_0 = 2, s_1 = 2 - lambda, s_{k+1} = (2 - lambda) s_k - s_{k-1}.
  using W = std::vector<long double>;
  const auto size = static_cast<std::size_t>(K + 1);
  W prev(size, 0.0L), cur(size, 0.0L), out(size, 0.0L);
  prev[0] = 2.0L;
  cur[0] = 2.0L;
  if (K >= 1) cur[1] = -1.0L;
  out[0] = L.coeff(0);
  for (int k = 1; k <= K; ++k) {
    const long double c = 0.5L * (static_cast<long double>(L.coeff(k)) + L.coeff(-k));
    for (int j = 0; j <= k; ++j) out[static_cast<std::size_t>(j)] += c * cur[static_cast<std::size_t>(j)];
    if (k == K) break;
    W next(size, 0.0L);
    for (int j = 0; j <= k; ++j) {
      next[static_cast<std::size_t>(j)] += 2.0L * cur[static_cast<std::size_t>(j)] - prev[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(j + 1)] -= cur[static_cast<std::size_t>(j)];
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return LambdaPoly(std::vector<double>(out.begin(), out.end()));
}

LaurentPoly plus_part(const LaurentPoly& L) {
  if (L.hi() < 1) return {};
  const int lo = std::max(1, L.lo());
  std::vector<double> c;
  for (int k = lo; k <= L.hi(); ++k) c.push_back(L.coeff(k));
  return LaurentPoly(lo, std::move(c));
}

LaurentPoly minus_part(const LaurentPoly& L) {
  if (L.is_zero() || L.lo() > -1) return {};
  const int hi = std::min(-1, L.hi());
  std::vector<double> c;
  for (int k = L.lo(); k <= hi; ++k) c.push_back(L.coeff(k));
  return LaurentPoly(L.lo(), std::move(c));
}

double zero_coeff(const LaurentPoly& L) { return L.coeff(0); }

std::vector<double> reciprocal_series(const LaurentPoly& p, int order) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative series order");
  if (!p.is_zero() && p.lo() < 0)
    throw Error(ErrorCode::InvalidArgument, "reciprocal_series needs nonnegative powers only");
  const double p0 = p.coeff(0);
  if (std::abs(p0) < 1e-14) throw Error(ErrorCode::SingularAtOrigin, "p(0) vanishes");
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  a[0] = 1.0 / p0;
  for (int k = 1; k <= order; ++k) {
    double s = 0.0;
    for (int j = 1; j <= std::min(k, p.hi()); ++j) s += p.coeff(j) * a[static_cast<std::size_t>(k - j)];
    a[static_cast<std::size_t>(k)] = -s / p0;
  }
  return a;
}

LaurentPoly divide_by_z_minus_zinv(const LaurentPoly& L, double tol) {
  if (L.is_zero()) return {};
  const int lo = L.lo();
  const int hi = L.hi();
  // L_k = Q_{k-1} - Q_{k+1}; solve downward from the top power.
  const int qlo = lo + 1;
  const int qhi = hi - 1;
  std::vector<double> q(static_cast<std::size_t>(std::max(0, qhi - qlo + 1)), 0.0);
  const auto Q = [&](int k) { return (k < qlo || k > qhi) ? 0.0 : q[static_cast<std::size_t>(k - qlo)]; };
  for (int k = qhi; k >= qlo; --k) q[static_cast<std::size_t>(k - qlo)] = L.coeff(k + 1) + Q(k + 2);
  const double r1 = L.coeff(lo + 1) + Q(lo + 2);
  const double r0 = L.coeff(lo) + Q(lo + 1);
  const double rem = std::max(std::abs(r0), std::abs(r1));
  if (rem > tol * L.scale())
    throw Error(ErrorCode::DivisionRemainder, "remainder " + std::to_string(rem) + " after division by z - 1/z");
  return LaurentPoly(qlo, std::move(q));
}

// --------------------------------------------------------------------- roots

int RootSet::degree() const noexcept {
  int d = 0;
  for (const auto& r : roots_) d += r.multiplicity;
  return d;
}

std::vector<Complex> RootSet::expanded() const {
  std::vector<Complex> out;
  for (const auto& r : roots_)
    for (int i = 0; i < r.multiplicity; ++i) out.push_back(r.location);
  return out;
}

namespace {

using Wide = long double;
using WComplex = std::complex<Wide>;

constexpr int kMaxSweeps = 200;
constexpr double kClusterRadius = 1e-7;

struct HornerResult {
  WComplex p, dp;
  Wide bound;  // sum |a_j| |z|^j, scale of the rounding error in p
};

HornerResult horner(const std::vector<Wide>& a, WComplex z) {
  WComplex p = a.back(), dp = 0.0L;
  Wide bound = std::abs(a.back());
  const Wide az = std::abs(z);
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[i];
    bound = bound * az + std::abs(a[i]);
  }
  return {p, dp, bound};
}

std::vector<WComplex> aberth(const std::vector<Wide>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  const Wide eps = std::numeric_limits<Wide>::epsilon();
  // Start on a circle of radius |a_0 / a_n|^(1/n), rotated off the real axis.
  const Wide a0 = std::abs(a.front());
  Wide radius = a0 > 0 ? std::pow(a0 / std::abs(a.back()), 1.0L / n) : 1.0L;
  if (!(radius > 0) || !std::isfinite(static_cast<double>(radius))) radius = 1.0L;
  std::vector<WComplex> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Wide ang = 2.0L * std::numbers::pi_v<Wide> * k / n + 0.7L;
    z[static_cast<std::size_t>(k)] = std::polar(radius, ang);
  }
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool all = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (done[k]) continue;
      const auto h = horner(a, z[k]);
      if (std::abs(h.p) <= 4.0L * n * eps * h.bound) {
        done[k] = true;
        continue;
      }
      all = false;
      const WComplex ratio = h.p / h.dp;
      WComplex sum = 0.0L;
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != k) sum += 1.0L / (z[k] - z[j]);
      const WComplex w = ratio / (1.0L - ratio * sum);
      z[k] -= w;
      if (std::abs(w) <= eps * std::abs(z[k])) done[k] = true;
    }
    if (all) return z;
  }
  for (bool d : done)
    if (!d) throw Error(ErrorCode::DidNotConverge, "Aberth iteration exceeded " + std::to_string(kMaxSweeps) + " sweeps");
  return z;
}

void polish(const std::vector<Wide>& a, std::vector<WComplex>& z) {
  for (auto& r : z) {
    for (int it = 0; it < 3; ++it) {
      const auto h = horner(a, r);
      if (h.dp == 0.0L) break;
      const WComplex cand = r - h.p / h.dp;
      if (std::abs(horner(a, cand).p) < std::abs(h.p))
        r = cand;
      else
        break;
    }
  }
}

double cluster_scale(Complex r) { return std::max(1.0, std::abs(r)); }

// A root of multiplicity m is a simple root of the (m-1)-th derivative;
// Newton there recovers it far better than the mean of the cluster.
void polish_multiple(const std::vector<Wide>& a, std::size_t zeros, std::vector<Root>& roots) {
  for (auto& r : roots) {
    // clusters at the origin contain the exact zeros divided out of a
    if (zeros > 0 && std::abs(r.location) <= kClusterRadius) continue;
    if (r.multiplicity < 2 || static_cast<int>(a.size()) <= r.multiplicity) continue;
    std::vector<Wide> d = a;
    for (int k = 1; k < r.multiplicity; ++k) {
      for (std::size_t j = 1; j < d.size(); ++j) d[j - 1] = d[j] * static_cast<Wide>(j);
      d.pop_back();
    }
    const WComplex start(r.location.real(), r.location.imag());
    const Wide limit = kClusterRadius * cluster_scale(r.location);
    WComplex x = start;
    for (int it = 0; it < 8; ++it) {
      const auto h = horner(d, x);
      if (h.dp == 0.0L) break;
      const WComplex step = h.p / h.dp;
      x -= step;
      if (std::abs(step) <= std::numeric_limits<Wide>::epsilon() * std::abs(x)) break;
    }
    if (std::abs(x - start) <= limit) r.location = {static_cast<double>(x.real()), static_cast<double>(x.imag())};
  }
}

std::vector<Root> cluster(const std::vector<Complex>& z) {
  const std::size_t n = z.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double tol = kClusterRadius * std::max(cluster_scale(z[i]), cluster_scale(z[j]));
      if (std::abs(z[i] - z[j]) <= tol) parent[find(i)] = find(j);
    }
  std::vector<Root> out;
  std::vector<std::size_t> slot(n, n);
  std::vector<Complex> sums;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = out.size();
      out.push_back({0.0, 0});
      sums.push_back(0.0);
    }
    sums[slot[r]] += z[i];
    ++out[slot[r]].multiplicity;
  }
  for (std::size_t c = 0; c < out.size(); ++c) out[c].location = sums[c] / static_cast<double>(out[c].multiplicity);
  return out;
}

void enforce_conjugate_symmetry(std::vector<Root>& roots) {
  for (auto& r : roots)
    if (std::abs(r.location.imag()) <= 0.5 * kClusterRadius * cluster_scale(r.location))
      r.location = {r.location.real(), 0.0};
  std::vector<bool> paired(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (paired[i] || roots[i].location.imag() <= 0.0) continue;
    std::size_t best = roots.size();
    double best_d = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (paired[j] || roots[j].location.imag() >= 0.0 || roots[j].multiplicity != roots[i].multiplicity) continue;
      const double d = std::abs(roots[i].location - std::conj(roots[j].location));
      if (best == roots.size() || d < best_d) best = j, best_d = d;
    }
    if (best == roots.size()) continue;
    const Complex mean = 0.5 * (roots[i].location + std::conj(roots[best].location));
    roots[i].location = mean;
    roots[best].location = std::conj(mean);
    paired[i] = paired[best] = true;
  }
  // A lone non-real root of a real polynomial can only be a real root that
  // drifted; pull it back.
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (!paired[i]) roots[i].location = {roots[i].location.real(), 0.0};
}

}  // namespace

RootSet polynomial_roots(std::span<const double> ascending) {
  check_finite(ascending);
  std::vector<double> c(ascending.begin(), ascending.end());
  const double cut = kTrimThreshold * max_abs(c);
  while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
  if (c.size() < 2) throw Error(ErrorCode::InvalidArgument, "root finding needs degree >= 1");

  std::size_t zeros = 0;
  while (c[zeros] == 0.0) ++zeros;
  std::vector<Wide> a(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
  const Wide lead = a.back();
  for (auto& x : a) x /= lead;

  std::vector<Complex> found(zeros, Complex{0.0, 0.0});
  if (a.size() == 2) {
    found.emplace_back(static_cast<double>(-a[0]), 0.0);
  } else if (a.size() > 2) {
    auto z = aberth(a);
    polish(a, z);
    for (const auto& r : z) found.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  }
  auto clustered = cluster(found);
  if (a.size() > 2) polish_multiple(a, zeros, clustered);
  enforce_conjugate_symmetry(clustered);
  std::sort(clustered.begin(), clustered.end(), [](const Root& x, const Root& y) {
    if (x.location.real() != y.location.real()) return x.location.real() < y.location.real();
    return x.location.imag() < y.location.imag();
  });
  return RootSet(std::move(clustered));
}

RootSet roots(const LambdaPoly& p) { return polynomial_roots(p.coeffs()); }

RootSet roots(const LaurentPoly& L) {
  if (L.is_zero()) throw Error(ErrorCode::InvalidArgument, "roots of the zero element");
  std::vector<double> c(static_cast<std::size_t>(std::max(0, L.lo())), 0.0);
  c.insert(c.end(), L.coeffs().begin(), L.coeffs().end());
  return polynomial_roots(c);
}

}  // namespace lattice_ist
