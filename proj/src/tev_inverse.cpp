#include "lattice_ist/tev_inverse.hpp"

#include <algorithm>
#include <cmath>

#include "lattice_ist/gelfand_levitan.hpp"
#include "lattice_ist/marchenko.hpp"

namespace lattice_ist {

namespace {

constexpr double kPairTolerance = 1e-9;
constexpr double kMatchTolerance = 1e-6;
constexpr double kConditioningLimit = 1e-3;

double pair_tol(Complex l) { return kPairTolerance * std::max(1.0, std::abs(l)); }

// Backward error of the recovered potential: largest coefficient difference
// between its E and the input one, relative to the input's scale. Roots near
// a multiple root move like the square root of this, so comparing
// coefficients rather than eigenvalues keeps clustered spectra invertible.
double backward_error(const LambdaPoly& want, const LambdaPoly& got) {
  if (want.degree() != got.degree()) return HUGE_VAL;
  double worst = 0.0;
  for (int j = 0; j <= want.degree(); ++j) worst = std::max(worst, std::abs(got.coeff(j) - want.coeff(j)));
  return worst / std::max(1.0, want.scale());
}

InversionReport inconsistent(InversionDiagnostics d, std::string why) {
  InversionReport r;
  r.status = InversionStatus::Inconsistent;
  d.message = std::move(why);
  r.diagnostics = std::move(d);
  return r;
}

}  // namespace

const char* to_string(InversionStatus s) noexcept {
  switch (s) {
    case InversionStatus::Unique: return "unique";
    case InversionStatus::Unusual: return "unusual";
    case InversionStatus::Inconsistent: return "inconsistent";
  }
  return "?";
}

TransmissionSpectrum make_spectrum(std::vector<Complex> eigenvalues) {
  if (eigenvalues.size() % 2 != 0)
    throw Error(ErrorCode::OddCount, "expected an even number of transmission eigenvalues, got " +
                                         std::to_string(eigenvalues.size()));
  const int b = static_cast<int>(eigenvalues.size()) / 2 + 1;
  return {b, std::move(eigenvalues)};
}

namespace {

// Real factors of E: (-a, 1) for a real eigenvalue, (|l|^2, -2 Re l, 1) for a
// conjugate pair (averaged).
std::vector<std::vector<double>> real_factors(const TransmissionSpectrum& spec) {
  const auto& ev = spec.eigenvalues;
  if (ev.size() % 2 != 0) throw Error(ErrorCode::OddCount, "odd number of transmission eigenvalues");
  if (spec.b != static_cast<int>(ev.size()) / 2 + 1)
    throw Error(ErrorCode::InvalidArgument, "b does not match the eigenvalue count");
  for (const auto& l : ev)
    if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
      throw Error(ErrorCode::InvalidArgument, "non-finite eigenvalue");

  std::vector<std::vector<double>> out;
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(ev[i].imag()) <= pair_tol(ev[i])) {
      out.push_back({-ev[i].real(), 1.0});
      continue;
    }
    std::size_t best = ev.size();
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(ev[j] - std::conj(ev[i]));
      if (d <= pair_tol(ev[i]) && (best == ev.size() || d < std::abs(ev[best] - std::conj(ev[i])))) best = j;
    }
    if (best == ev.size())
      throw Error(ErrorCode::NotConjugateClosed, "eigenvalue (" + std::to_string(ev[i].real()) + ", " +
                                                     std::to_string(ev[i].imag()) + ") has no conjugate partner");
    used[best] = true;
    const Complex l = 0.5 * (ev[i] + std::conj(ev[best]));
    out.push_back({std::norm(l), -2.0 * l.real(), 1.0});
  }
  return out;
}

}  // namespace

LambdaPoly build_E(const TransmissionSpectrum& spec) {
  LambdaPoly E = LambdaPoly::constant(1.0);
  for (auto& f : real_factors(spec)) E = E * LambdaPoly(std::move(f));
  return E;
}

namespace {

// p[k + n] is the coefficient of z^k of a symmetric Laurent polynomial; returns
// the positive part of (z - 1/z) p after checking that the z^0 coefficient
// vanishes.
LaurentPoly times_z_minus_zinv(const std::vector<long double>& p, int n) {
  const auto at = [&](int k) { return (k >= -n && k <= n) ? p[static_cast<std::size_t>(k + n)] : 0.0L; };
  long double scale = 0.0L;
  for (const auto c : p) scale = std::max(scale, std::abs(c));
  const long double residual = at(-1) - at(1);
  if (std::abs(residual) > 1e-10L * std::max(1.0L, scale))
    throw Error(ErrorCode::ZeroCoefficientResidual, "z^0 coefficient " + std::to_string(static_cast<double>(residual)));
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  for (int k = 1; k <= n + 1; ++k) out[static_cast<std::size_t>(k - 1)] = static_cast<double>(at(k - 1) - at(k + 1));
  return LaurentPoly(1, std::move(out));
}

}  // namespace

LaurentPoly f0_scaled(const LambdaPoly& E) {
  if (E.is_zero() || std::abs(E.leading() - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "E must be monic");
  // Horner in lambda = 2 - z - 1/z; the substitution cancels heavily, so it
  // runs in long double. p[k + n] is the coefficient of z^k.
  const int n = E.degree();
  std::vector<long double> p(static_cast<std::size_t>(2 * n + 1), 0.0L);
  p[static_cast<std::size_t>(n)] = E.leading();
  for (int j = n - 1; j >= 0; --j) {
    std::vector<long double> q(p.size(), 0.0L);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] == 0.0L) continue;
      q[k] += 2.0L * p[k];
      if (k > 0) q[k - 1] -= p[k];
      if (k + 1 < p.size()) q[k + 1] -= p[k];
    }
    q[static_cast<std::size_t>(n)] += E.coeff(j);
    p = std::move(q);
  }
  return times_z_minus_zinv(p, n);
}

LaurentPoly f0_scaled(const TransmissionSpectrum& spec) {
  // Multiplies the z-images of the real factors; the monomial form of E loses
  // digits at high degree because lambda = 2 - z - 1/z cancels heavily.
  const int n = 2 * spec.b - 2;
  std::vector<long double> p(static_cast<std::size_t>(2 * n + 1), 0.0L);
  p[static_cast<std::size_t>(n)] = 1.0L;
  int width = 0;  // current degree in z
  for (const auto& f : real_factors(spec)) {
    // lambda - a -> -z^{-1} + (2 - a) - z; quadratics as (lambda - al)^2 + be^2
    const long double shift = f.size() == 2 ? -static_cast<long double>(f[0]) : -0.5L * f[1];
    const long double c = 2.0L - shift;
    const auto times_linear = [&] {
      std::vector<long double> q(p.size(), 0.0L);
      for (int k = -width; k <= width; ++k) {
        const long double v = p[static_cast<std::size_t>(k + n)];
        if (v == 0.0L) continue;
        q[static_cast<std::size_t>(k + n)] += c * v;
        q[static_cast<std::size_t>(k + n - 1)] -= v;
        q[static_cast<std::size_t>(k + n + 1)] -= v;
      }
      p = std::move(q);
      ++width;
    };
    if (f.size() == 2) {
      times_linear();
    } else {
      const std::vector<long double> old = p;
      const long double beta2 = static_cast<long double>(f[0]) - shift * shift;
      times_linear();
      times_linear();
      for (std::size_t k = 0; k < p.size(); ++k) p[k] += beta2 * old[k];
    }
  }
  return times_z_minus_zinv(p, n);
}

double recover_Vb(const TransmissionSpectrum& spec, double K01_over_Vb) {
  const double denom = K01_over_Vb - 1.0;
  if (std::abs(denom) <= kUnusualTolerance)
    throw Error(ErrorCode::UnusualCase, "K01/V_b = " + std::to_string(K01_over_Vb) + " leaves V_b undetermined");
  Complex sum = 0.0;
  for (const auto& l : spec.eigenvalues) sum += l;
  return (sum.real() - 4.0 * (spec.b - 1)) / denom;
}

std::pair<double, double> unusual_b3_parameters(const LambdaPoly& E) {
  const double gamma = 22.0 - E.coeff(2);
  const double epsilon = E.coeff(1) - 4.0 * gamma + 24.0;
  return {gamma, epsilon};
}

UnusualFamily unusual_family_b3(double gamma, double epsilon) {
  UnusualFamily fam;
  if (gamma == 0.0 && epsilon == 0.0) {
    fam.one_parameter_family = true;
    return fam;
  }
  if (epsilon == 0.0) return fam;  // gamma = V1^2 + V1/V3 has no solution with V1^2 = gamma
  const double c[] = {epsilon, -gamma, 0.0, 1.0};
  for (const Root& r : polynomial_roots(c)) {
    if (r.location.imag() != 0.0) continue;
    const double v1 = r.location.real();
    if (v1 == 0.0) continue;
    fam.potentials.emplace_back(std::vector<double>{v1, -v1, v1 * v1 / epsilon});
  }
  return fam;
}

InversionReport tev_invert(const TransmissionSpectrum& spec, InversionMethod method) {
  const LambdaPoly E = build_E(spec);
  const int b = spec.b;
  const LaurentPoly scaled = f0_scaled(spec);
  if (scaled.hi() != 2 * b - 1 || std::abs(scaled.coeff(2 * b - 1) - 1.0) > 1e-10)
    throw Error(ErrorCode::Inconsistent, "scaled Jost function is not normalised at z^(2b-1)");

  InversionDiagnostics d;
  d.b = b;
  d.K01_over_Vb = scaled.coeff(1);
  Complex sum = 0.0;
  for (const auto& l : spec.eigenvalues) sum += l;
  d.eigenvalue_sum = sum.real();
  d.four_b_minus_1 = 4.0 * (b - 1);
  d.gap = d.eigenvalue_sum - d.four_b_minus_1;

  const double denom = d.K01_over_Vb - 1.0;
  const bool by_sum = std::abs(d.gap) <= kUnusualTolerance * (1.0 + std::abs(d.eigenvalue_sum));
  const bool by_k01 = std::abs(denom) <= kUnusualTolerance;
  if (by_sum != by_k01)
    return inconsistent(std::move(d), "unusual-case detectors disagree (sum gap " + std::to_string(d.gap) +
                                          ", K01/V_b - 1 = " + std::to_string(denom) + ")");
  if (by_sum) {
    InversionReport r;
    r.status = InversionStatus::Unusual;
    d.message = "eigenvalue sum equals 4(b-1); V_b is not determined by the transmission eigenvalues";
    if (b == 3) {
      auto [gamma, epsilon] = unusual_b3_parameters(E);
      const double snap = 1e-9 * (1.0 + std::abs(gamma) + std::abs(epsilon));
      if (std::abs(gamma) <= snap) gamma = 0.0;
      if (std::abs(epsilon) <= snap) epsilon = 0.0;
      d.gamma = gamma;
      d.epsilon = epsilon;
      const double e0 = 9.0 - 3.0 * gamma - 2.0 * epsilon;
      if (std::abs(E.coeff(0) - e0) > 1e-7 * std::max(1.0, E.scale()))
        d.warnings.push_back("constant term of E does not fit the V2 = -V1 family; no potential has this spectrum");
      else
        d.family = unusual_family_b3(gamma, epsilon);
    }
    r.diagnostics = std::move(d);
    return r;
  }

  if (std::abs(denom) < kConditioningLimit)
    d.warnings.push_back("near-unusual spectrum: V_b error is amplified by 1/|K01/V_b - 1| = " +
                         std::to_string(1.0 / std::abs(denom)));
  const double vb = recover_Vb(spec, d.K01_over_Vb);
  if (!std::isfinite(vb) || std::abs(vb) <= 1e-12) return inconsistent(std::move(d), "recovered V_b vanishes");
  LaurentPoly f0 = LaurentPoly::constant(1.0) + scaled * vb;
  if (f0.lo() != 0 || f0.hi() != 2 * b - 1 || f0.coeff(0) != 1.0)
    return inconsistent(std::move(d), "reconstructed Jost function has the wrong shape");

  Potential V;
  try {
    // f0 rebuilt from rounded eigenvalues is only approximately a Jost
    // function, so the delegates' own f0 re-check is replaced by the
    // eigenvalue re-match below.
    if (method == InversionMethod::Marchenko) {
      V = potential_from_K(marchenko_solve(marchenko_kernel(f0, b)));
    } else {
      const GLKernel G = gl_kernel(spectral_data_from_jost(f0, b), b + 1);
      V = potential_from_A(gl_solve(G, b), b);
      for (const auto& w : G.warnings) d.warnings.push_back(w);
    }
  } catch (const Error& e) {
    return inconsistent(std::move(d), std::string("inversion of the reconstructed Jost function failed: ") + e.what());
  }

  double dist = HUGE_VAL;
  try {
    dist = backward_error(E, transmission_det(V).E);
  } catch (const Error& e) {
    return inconsistent(std::move(d), std::string("recomputing E failed: ") + e.what());
  }
  if (!(dist <= kMatchTolerance))
    return inconsistent(std::move(d), "recovered potential reproduces E only to relative " + std::to_string(dist));

  InversionReport r;
  r.status = InversionStatus::Unique;
  r.potential = std::move(V);
  r.f0 = std::move(f0);
  r.diagnostics = std::move(d);
  return r;
}

}  // namespace lattice_ist
