#include "lattice_ist/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lattice_ist {

namespace {

constexpr double kBoundMargin = 1e-9;
constexpr double kEndpointWindow = 1e-7;
constexpr double kNormingCrossCheck = 1e-6;
constexpr double kRouteAgreement = 1e-10;

double abs_sum(std::span<const double> c) {
  double s = 0.0;
  for (double x : c) s += std::abs(x);
  return s;
}

}  // namespace

// ----------------------------------------------------------------- Potential

Potential::Potential(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite potential value");
}

double Potential::operator[](int n) const noexcept {
  return (n < 1 || n > support()) ? 0.0 : values_[static_cast<std::size_t>(n - 1)];
}

void Potential::require_nonzero_last() const {
  if (values_.empty() || std::abs(values_.back()) <= 1e-12)
    throw Error(ErrorCode::InvalidArgument, "the last potential value V_b must be nonzero");
}

// -------------------------------------------------------------------- KTable

KTable::KTable(int b, std::vector<std::vector<double>> rows) : b_(b), rows_(std::move(rows)) {
  if (b < 0 || static_cast<int>(rows_.size()) != b)
    throw Error(ErrorCode::InvalidArgument, "K table needs exactly b rows");
  for (int n = 0; n < b; ++n) rows_[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(2 * b - 2 * n), 0.0);
}

double KTable::operator()(int n, int m) const noexcept {
  if (n < 0 || n >= b_ || m < n) return 0.0;
  const auto& row = rows_[static_cast<std::size_t>(n)];
  const auto j = static_cast<std::size_t>(m - n);
  return j < row.size() ? row[j] : 0.0;
}

LaurentPoly KTable::m(int n) const {
  if (n >= b_) return LaurentPoly::constant(1.0);
  return LaurentPoly(0, rows_[static_cast<std::size_t>(n)]);
}

LaurentPoly KTable::jost_solution(int n) const {
  if (n >= b_) return LaurentPoly::monomial(n);
  return LaurentPoly(n, rows_[static_cast<std::size_t>(n)]);
}

// -------------------------------------------------------------------- ATable

ATable::ATable(int size) : size_(size), lower_(static_cast<std::size_t>(size * (size - 1) / 2), 0.0) {
  if (size < 0) throw Error(ErrorCode::InvalidArgument, "negative A table size");
}

double ATable::operator()(int n, int j) const noexcept {
  if (n < 1 || n > size_ || j < 1 || j > n) return 0.0;
  if (j == n) return 1.0;
  return lower_[static_cast<std::size_t>((n - 1) * (n - 2) / 2 + (j - 1))];
}

void ATable::set(int n, int j, double value) {
  if (n < 2 || n > size_ || j < 1 || j >= n) throw Error(ErrorCode::InvalidArgument, "A table index out of range");
  lower_[static_cast<std::size_t>((n - 1) * (n - 2) / 2 + (j - 1))] = value;
}

// ---------------------------------------------------------------- Jost data

KTable jost_table(const Potential& V) {
  const int b = V.support();
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "b >= 1 required");
  // m_{n-1} = -z^2 m_{n+1} + (z^2 + V_n z + 1) m_n with m_b = m_{b+1} = 1.
  const auto width = static_cast<std::size_t>(2 * b + 2);
  std::vector<double> upper(width, 0.0), cur(width, 0.0);
  upper[0] = cur[0] = 1.0;
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(b));
  for (int n = b; n >= 1; --n) {
    std::vector<double> next(width, 0.0);
    const double v = V[n];
    for (std::size_t j = 0; j < width; ++j) {
      const double c = cur[j];
      if (c == 0.0) continue;
      next[j] += c;
      if (j + 1 < width) next[j + 1] += v * c;
      if (j + 2 < width) next[j + 2] += c;
    }
    for (std::size_t j = 0; j + 2 < width; ++j) next[j + 2] -= upper[j];
    upper = std::move(cur);
    cur = std::move(next);
    // cur is m_{n-1}, of degree at most 2b - 2(n-1) - 1.
    const auto len = static_cast<std::size_t>(2 * b - 2 * (n - 1));
    rows[static_cast<std::size_t>(n - 1)] = std::vector<double>(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(len));
  }
  return KTable(b, std::move(rows));
}

LaurentPoly jost_function(const Potential& V) { return jost_table(V).m(0); }

LaurentPoly g_from_f(const LaurentPoly& f0) {
  if (!f0.is_zero() && f0.lo() != 0) throw Error(ErrorCode::InvalidArgument, "f0 must start at z^0");
  return f0.reflected();
}

ScatteringMatrix scattering_matrix(const LaurentPoly& f0) {
  if (std::abs(f0.coeff(0) - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "f0 must have constant term 1");
  return {g_from_f(f0), f0};
}

// --------------------------------------------------------- regular solutions

std::vector<LambdaPoly> regular_solution(const Potential& V, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max >= 1 required");
  std::vector<LambdaPoly> phi;
  phi.reserve(static_cast<std::size_t>(n_max));
  LambdaPoly prev;  // phi_0 = 0
  LambdaPoly cur = LambdaPoly::constant(1.0);
  for (int n = 1; n <= n_max; ++n) {
    phi.push_back(cur);
    LambdaPoly next = LambdaPoly({2.0 + V[n], -1.0}) * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return phi;
}

LambdaPoly free_regular(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n >= 0 required");
  if (n == 0) return {};
  return regular_solution(Potential{}, n).back();
}

// --------------------------------------------------------------- bound states

EndpointClass classify_endpoint(const LaurentPoly& f0, Endpoint end) {
  const double x = end == Endpoint::PlusOne ? 1.0 : -1.0;
  const double value = f0(x);
  if (std::abs(value) >= 1e-9 * std::max(1.0, abs_sum(f0.coeffs()))) return EndpointClass::Generic;
  const LaurentPoly df = f0.derivative();
  if (std::abs(df(x)) <= 1e-9 * std::max(1.0, abs_sum(df.coeffs())))
    throw Error(ErrorCode::NonSimpleEndpointZero, "f0 has a multiple zero at z = " + std::to_string(x));
  return EndpointClass::Exceptional;
}

namespace {

// Real zeros of f0 in (-1+eps,-eps) u (eps,1-eps), each checked to be simple.
std::vector<double> bound_state_locations(const LaurentPoly& f0) {
  if (f0.is_zero() || f0.lo() != 0 || std::abs(f0.coeff(0) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "f0 must be a polynomial with constant term 1");
  std::vector<double> out;
  if (f0.hi() < 1) return out;
  for (const Root& r : roots(f0)) {
    const Complex z = r.location;
    const double to_plus = std::abs(z - 1.0);
    const double to_minus = std::abs(z + 1.0);
    if (std::min(to_plus, to_minus) < kEndpointWindow) {
      const Endpoint end = to_plus < to_minus ? Endpoint::PlusOne : Endpoint::MinusOne;
      if (classify_endpoint(f0, end) == EndpointClass::Exceptional) continue;
      throw Error(ErrorCode::RootToleranceConflict,
                  "zero of f0 within 1e-7 of " + std::string(end == Endpoint::PlusOne ? "+1" : "-1"));
    }
    if (z.imag() != 0.0) {
      if (std::abs(z) < 1.0 - kEndpointWindow)
        throw Error(ErrorCode::ComplexRootInsideDisc, "non-real zero of f0 inside the unit disc");
      continue;
    }
    const double x = z.real();
    const double ax = std::abs(x);
    if (ax <= kBoundMargin || ax >= 1.0 - kBoundMargin) continue;
    if (r.multiplicity != 1) throw Error(ErrorCode::Inconsistent, "bound-state zero of f0 is not simple");
    out.push_back(x);
  }
  return out;
}

// c_s^2 = Res[S/z, z_s] = g0(z_s) / (z_s f0'(z_s)).
double residue_norming_squared(const LaurentPoly& f0, double z) {
  const double g0 = f0.reflected()(z);
  return g0 / (z * f0.derivative()(z));
}

}  // namespace

std::vector<BoundState> bound_states(const LaurentPoly& f0, const Potential& V) {
  const auto zs = bound_state_locations(f0);
  std::vector<BoundState> out;
  if (zs.empty()) return out;
  const int b = V.support();
  const KTable K = jost_table(V);
  const auto phi = regular_solution(V, std::max(1, b - 1));
  for (double z : zs) {
    BoundState s;
    s.z = z;
    s.mu = 2.0 - z - 1.0 / z;
    const double tail = std::pow(z, 2 * b) / (1.0 - z * z);
    double sum_f = tail;
    for (int n = 1; n < b; ++n) sum_f += std::pow(K.jost_solution(n)(z), 2);
    s.c = 1.0 / std::sqrt(sum_f);

    const double c2 = residue_norming_squared(f0, z);
    if (!(c2 > 0.0) || std::abs(c2 - s.c * s.c) > kNormingCrossCheck * s.c * s.c)
      throw Error(ErrorCode::NormingMismatch, "residue and summed norming constants disagree at z = " + std::to_string(z));

    const double kappa = f0.reflected()(z) / (z - 1.0 / z);
    double sum_phi = kappa * kappa * tail;
    for (int n = 1; n < b; ++n) sum_phi += std::pow(phi[static_cast<std::size_t>(n - 1)](s.mu), 2);
    s.C = 1.0 / std::sqrt(sum_phi);
    out.push_back(s);
  }
  return out;
}

std::vector<BoundState> bound_states_from_jost(const LaurentPoly& f0) {
  std::vector<BoundState> out;
  for (double z : bound_state_locations(f0)) {
    const double c2 = residue_norming_squared(f0, z);
    if (!(c2 > 0.0)) throw Error(ErrorCode::NormingMismatch, "residue of S/z is not positive at z = " + std::to_string(z));
    BoundState s;
    s.z = z;
    s.mu = 2.0 - z - 1.0 / z;
    s.c = std::sqrt(c2);
    s.C = s.c / std::abs(f0.reflected()(z) / (z - 1.0 / z));
    out.push_back(s);
  }
  return out;
}

SpectralData spectral_data(const Potential& V) {
  LaurentPoly f0 = jost_function(V);
  auto bs = bound_states(f0, V);
  return {std::move(f0), std::move(bs), V.support()};
}

SpectralData spectral_data_from_jost(const LaurentPoly& f0, int b) {
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "b >= 1 required");
  if (f0.hi() > 2 * b - 1) throw Error(ErrorCode::InvalidArgument, "deg f0 exceeds 2b - 1");
  return {f0, bound_states_from_jost(f0), b};
}

// --------------------------------------------------- transmission determinant

LambdaPoly transmission_det_from_regular(const Potential& V) {
  const int b = V.support();
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "b >= 1 required");
  const auto phi = regular_solution(V, b + 1);
  const LambdaPoly free_b = free_regular(b);
  const LambdaPoly free_b1 = free_regular(b + 1);
  return free_b * phi[static_cast<std::size_t>(b)] - free_b1 * phi[static_cast<std::size_t>(b - 1)];
}

TransmissionDeterminant transmission_det(const Potential& V) {
  const int b = V.support();
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "b >= 1 required");
  const LaurentPoly f0 = jost_function(V);
  const LaurentPoly q = divide_by_z_minus_zinv(f0 - g_from_f(f0));
  TransmissionDeterminant out;
  out.D = laurent_to_lambda(q);

  const LambdaPoly check = transmission_det_from_regular(V);
  const LambdaPoly diff = out.D - check;
  if (diff.scale() > kRouteAgreement * std::max(1.0, std::max(out.D.scale(), check.scale())))
    throw Error(ErrorCode::RouteMismatch, "Jost-function and regular-solution routes to D disagree");

  if (std::abs(V.last()) > 1e-12) {
    out.E = out.D * (1.0 / V.last());
    if (out.E.degree() != 2 * b - 2 || std::abs(out.E.leading() - 1.0) > 1e-9 * std::max(1.0, out.E.scale()))
      throw Error(ErrorCode::Inconsistent, "E is not monic of degree 2b - 2");
  }
  return out;
}

namespace {

// Newton refinement of a simple zero of E, evaluating E = (f0 - g0)/((z - 1/z) V_b)
// on the z side, where the monomial coefficients of f0 stay moderate even
// when those of E in lambda do not.
Complex polish_in_z(const LaurentPoly& f0, double vb, Complex lambda) {
  const Complex start = lambda;
  const LaurentPoly num = (f0 - g_from_f(f0)) * (1.0 / vb);
  const LaurentPoly dnum = num.derivative();
  auto eval = [&](Complex l, Complex& value, Complex& slope) {
    // z with |z| <= 1 solving z + 1/z = 2 - l
    const Complex w = 2.0 - l;
    Complex z = 0.5 * (w + std::sqrt(w * w - 4.0));
    if (std::abs(z) > 1.0) z = 1.0 / z;
    const Complex s = z - 1.0 / z;
    if (std::abs(s) < 1e-3) return false;
    value = num(z) / s;
    const Complex dvalue_dz = (dnum(z) - value * (1.0 + 1.0 / (z * z))) / s;
    slope = dvalue_dz / (-1.0 + 1.0 / (z * z));
    return true;
  };
  Complex value, slope;
  if (!eval(lambda, value, slope)) return lambda;
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, num.scale());
  for (int it = 0; it < 8 && std::abs(value) > tol; ++it) {
    if (slope == 0.0) break;
    const Complex next = lambda - value / slope;
    Complex nv, ns;
    if (!eval(next, nv, ns) || std::abs(nv) >= std::abs(value)) break;
    // a correction, not a search: never drift towards a neighbouring root
    if (std::abs(next - start) > 1e-6 * std::max(1.0, std::abs(start))) break;
    lambda = next;
    value = nv;
    slope = ns;
  }
  return lambda;
}

}  // namespace

TransmissionSpectrum transmission_eigenvalues(const Potential& V) {
  const int b = V.support();
  if (b < 2) throw Error(ErrorCode::InvalidArgument, "transmission eigenvalues need b >= 2");
  V.require_nonzero_last();
  const auto det = transmission_det(V);
  const LaurentPoly f0 = jost_function(V);
  TransmissionSpectrum spec{b, {}};
  for (const Root& r : roots(det.E)) {
    if (r.location.imag() < 0.0) continue;  // taken with its partner
    Complex l = r.location;
    if (r.multiplicity == 1) l = polish_in_z(f0, V.last(), l);
    if (r.location.imag() == 0.0) l = l.real();
    for (int k = 0; k < r.multiplicity; ++k) {
      spec.eigenvalues.push_back(l);
      if (r.location.imag() > 0.0) spec.eigenvalues.push_back(std::conj(l));
    }
  }
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });

  Complex sum = 0.0;
  for (const auto& l : spec.eigenvalues) sum += l;
  double expected = 4.0 * (b - 1);
  for (int j = 1; j < b; ++j) expected += V[j];
  if (std::abs(sum - expected) > 1e-8 * (1.0 + std::abs(sum)))
    throw Error(ErrorCode::Inconsistent, "transmission eigenvalues violate the trace identity");
  return spec;
}

ATable a_coefficients(const Potential& V, int n_max) {
  const auto phi = regular_solution(V, n_max);
  std::vector<LambdaPoly> basis;
  basis.reserve(static_cast<std::size_t>(n_max));
  for (int j = 1; j <= n_max; ++j) basis.push_back(free_regular(j));
  ATable A(n_max);
  for (int n = 2; n <= n_max; ++n) {
    LambdaPoly r = phi[static_cast<std::size_t>(n - 1)] - basis[static_cast<std::size_t>(n - 1)];
    for (int j = n - 1; j >= 1; --j) {
      const LambdaPoly& e = basis[static_cast<std::size_t>(j - 1)];
      const double a = r.coeff(j - 1) / e.leading();
      A.set(n, j, a);
      if (a != 0.0) r -= e * a;
    }
  }
  return A;
}

}  // namespace lattice_ist
