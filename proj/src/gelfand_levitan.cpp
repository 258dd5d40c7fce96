#include "lattice_ist/gelfand_levitan.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "linear.hpp"

namespace lattice_ist {

namespace {

using Wide = long double;
using WideC = std::complex<long double>;

constexpr double kCircleProximity = 1e-7;
constexpr double kRoundTrip = 1e-7;

void check_data(const SpectralData& data, int size) {
  if (size < 1) throw Error(ErrorCode::InvalidArgument, "kernel size >= 1 required");
  const LaurentPoly& f0 = data.f0;
  if (f0.is_zero() || f0.lo() != 0 || std::abs(f0.coeff(0) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "f0 must be a polynomial with constant term 1");
  if (data.b < 1 || f0.hi() > 2 * data.b - 1) throw Error(ErrorCode::InvalidArgument, "deg f0 exceeds 2b - 1");
  for (const auto& s : data.bound_states) {
    if (!(std::abs(s.z) > 0.0 && std::abs(s.z) < 1.0) || !(s.C > 0.0) || !std::isfinite(s.C))
      throw Error(ErrorCode::InvalidArgument, "bound states need z in (-1,0) u (0,1) and C > 0");
  }
}

// phi0_n at lambda = 2 - z - 1/z, i.e. (z^n - z^-n)/(z - 1/z).
double free_at_z(int n, double z) {
  return (std::pow(z, n) - std::pow(z, -n)) / (z - 1.0 / z);
}

void add_discrete_and_delta(const SpectralData& data, GLKernel& G) {
  for (int n = 1; n <= G.size(); ++n) {
    for (int m = 1; m <= n; ++m) {
      double s = G(n, m) - (n == m ? 1.0 : 0.0);
      for (const auto& b : data.bound_states) s += b.C * b.C * free_at_z(n, b.z) * free_at_z(m, b.z);
      G.set(n, m, s);
    }
  }
}

// Continuous part (2/pi) \int_0^pi sin(nt) sin(mt)/|f0|^2 dt by the midpoint
// rule; the nodes avoid t = 0 and t = pi where an exceptional f0 vanishes.
void continuous_by_quadrature(const LaurentPoly& f0, GLKernel& G, int nodes) {
  const int size = G.size();
  std::vector<double> acc(static_cast<std::size_t>(size * size), 0.0);
  const double h = std::numbers::pi / nodes;
  for (int k = 0; k < nodes; ++k) {
    const double t = (k + 0.5) * h;
    const double w = (2.0 / std::numbers::pi) * h / std::norm(f0(std::polar(1.0, t)));
    for (int n = 1; n <= size; ++n) {
      const double sn = std::sin(n * t);
      for (int m = 1; m <= n; ++m) acc[static_cast<std::size_t>((n - 1) * size + (m - 1))] += w * sn * std::sin(m * t);
    }
  }
  for (int n = 1; n <= size; ++n)
    for (int m = 1; m <= n; ++m) G.set(n, m, acc[static_cast<std::size_t>((n - 1) * size + (m - 1))]);
}

template <class T>
T horner(const std::vector<Wide>& c, T x) {
  T r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

struct Pole {
  WideC z;
  int multiplicity;
};

// Zeros of R = f0 * P inside the unit disc, with P(z) = z^d f0(1/z):
// interior zeros of f0 and reciprocals of exterior ones.
std::vector<Pole> interior_poles(const std::vector<Wide>& f0, const RootSet& rs) {
  std::vector<Wide> df0(f0.size() > 1 ? f0.size() - 1 : 0);
  for (std::size_t j = 1; j < f0.size(); ++j) df0[j - 1] = f0[j] * static_cast<Wide>(j);
  std::vector<Pole> out;
  for (const Root& r : rs) {
    WideC w(r.location.real(), r.location.imag());
    if (r.multiplicity == 1) {
      // refine against the exact coefficients in extended precision
      for (int it = 0; it < 4; ++it) {
        const WideC d = horner(df0, w);
        if (d == WideC(0)) break;
        w -= horner(f0, w) / d;
      }
    }
    const WideC z = std::abs(w) < 1 ? w : WideC(1) / w;
    bool merged = false;
    for (auto& p : out) {
      if (std::abs(p.z - z) <= 1e-7L * std::max<Wide>(1, std::abs(z))) {
        p.multiplicity += r.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back({z, r.multiplicity});
  }
  return out;
}

void continuous_by_residues(const LaurentPoly& f0_poly, const RootSet& rs, GLKernel& G) {
  const int d = f0_poly.hi();
  if (d < 1) {
    // f0 = 1: the measure is the free one, whose integral is delta_{nm}
    for (int n = 1; n <= G.size(); ++n) G.set(n, n, 1.0);
    return;
  }
  std::vector<Wide> f0(static_cast<std::size_t>(d + 1)), P(static_cast<std::size_t>(d + 1));
  for (int j = 0; j <= d; ++j) {
    f0[static_cast<std::size_t>(j)] = f0_poly.coeff(j);
    P[static_cast<std::size_t>(d - j)] = f0_poly.coeff(j);
  }
  std::vector<Wide> R(static_cast<std::size_t>(2 * d + 1), 0);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) R[static_cast<std::size_t>(i + j)] += f0[static_cast<std::size_t>(i)] * P[static_cast<std::size_t>(j)];
  std::vector<Wide> dR(static_cast<std::size_t>(2 * d));
  for (int j = 1; j <= 2 * d; ++j) dR[static_cast<std::size_t>(j - 1)] = R[static_cast<std::size_t>(j)] * j;

  const int size = G.size();
  // Taylor coefficients of 1/R at the origin; R(0) = f0(0) * leading(f0) != 0.
  const int top = 2 * size + 1;
  std::vector<Wide> r(static_cast<std::size_t>(top + 1), 0);
  r[0] = 1 / R[0];
  for (int k = 1; k <= top; ++k) {
    Wide s = 0;
    for (int j = 1; j <= std::min(k, 2 * d); ++j) s += R[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k - j)];
    r[static_cast<std::size_t>(k)] = -s / R[0];
  }
  auto r_at = [&](int k) -> Wide { return k < 0 ? 0 : r[static_cast<std::size_t>(k)]; };

  const auto poles = interior_poles(f0, rs);
  double min_gap = 1.0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    min_gap = std::min<double>(min_gap, static_cast<double>(1 - std::abs(poles[i].z)));
    min_gap = std::min<double>(min_gap, static_cast<double>(std::abs(poles[i].z)));
    for (std::size_t j = 0; j < i; ++j) min_gap = std::min<double>(min_gap, static_cast<double>(std::abs(poles[i].z - poles[j].z)));
  }

  // Integrand Q(z) z^{d-n-m-1} / R(z) with Q = (z^{2n} - 1)(z^{2m} - 1).
  for (int n = 1; n <= size; ++n) {
    for (int m = 1; m <= n; ++m) {
      const int e = d - n - m - 1;
      auto numerator = [&](WideC z) {
        return (std::pow(z, 2 * n) - WideC(1)) * (std::pow(z, 2 * m) - WideC(1)) * std::pow(z, e);
      };
      Wide total = 0;
      if (e < 0) {
        const int p = -e;  // pole order at the origin
        total += r_at(p - 1) - r_at(p - 1 - 2 * n) - r_at(p - 1 - 2 * m) + r_at(p - 1 - 2 * n - 2 * m);
      }
      for (const auto& pole : poles) {
        if (pole.multiplicity == 1) {
          total += (numerator(pole.z) / horner(dR, pole.z)).real();
        } else {
          // (1/2 pi i) \oint on a small circle around the cluster
          const Wide rho = static_cast<Wide>(0.5 * min_gap);
          const int N = 256;
          WideC s = 0;
          for (int k = 0; k < N; ++k) {
            const WideC u = std::polar<Wide>(rho, 2 * std::numbers::pi_v<Wide> * (k + Wide(0.5)) / N);
            const WideC z = pole.z + u;
            s += numerator(z) / horner(R, z) * u;
          }
          total += (s / static_cast<Wide>(N)).real();
        }
      }
      G.set(n, m, static_cast<double>(-total / 2));
    }
  }
}

}  // namespace

GLKernel::GLKernel(int size) : size_(size), g_(static_cast<std::size_t>(std::max(0, size * size)), 0.0) {
  if (size < 0) throw Error(ErrorCode::InvalidArgument, "negative kernel size");
}

double GLKernel::operator()(int n, int m) const noexcept {
  if (n < 1 || m < 1 || n > size_ || m > size_) return 0.0;
  return g_[static_cast<std::size_t>((n - 1) * size_ + (m - 1))];
}

void GLKernel::set(int n, int m, double value) {
  if (n < 1 || m < 1 || n > size_ || m > size_) throw Error(ErrorCode::InvalidArgument, "kernel index out of range");
  g_[static_cast<std::size_t>((n - 1) * size_ + (m - 1))] = value;
  g_[static_cast<std::size_t>((m - 1) * size_ + (n - 1))] = value;
}

GLKernel gl_kernel_quadrature(const SpectralData& data, int size, int nodes) {
  check_data(data, size);
  if (nodes < 16) throw Error(ErrorCode::InvalidArgument, "too few quadrature nodes");
  GLKernel G(size);
  continuous_by_quadrature(data.f0, G, nodes);
  G.used_quadrature = true;
  add_discrete_and_delta(data, G);
  return G;
}

GLKernel gl_kernel(const SpectralData& data, int size) {
  check_data(data, size);
  GLKernel G(size);
  const RootSet rs = data.f0.hi() >= 1 ? roots(data.f0) : RootSet{};
  double closest = 1.0;
  for (const Root& r : rs) closest = std::min(closest, std::abs(std::abs(r.location) - 1.0));
  if (closest < kCircleProximity) {
    continuous_by_quadrature(data.f0, G, 1 << 14);
    G.used_quadrature = true;
    G.warnings.push_back(std::string(to_string(ErrorCode::RootNearCircle)) +
                         ": a zero of f0 lies within 1e-7 of the unit circle; continuous part by quadrature");
  } else {
    continuous_by_residues(data.f0, rs, G);
  }
  add_discrete_and_delta(data, G);
  return G;
}

ATable gl_solve(const GLKernel& G, int b) {
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "b >= 1 required");
  if (G.size() < b + 1) throw Error(ErrorCode::InvalidArgument, "kernel size must be at least b + 1");
  ATable A(b + 1);
  for (int n = 2; n <= b + 1; ++n) {
    const int k = n - 1;
    std::vector<Wide> M(static_cast<std::size_t>(k * k));
    std::vector<Wide> rhs(static_cast<std::size_t>(k));
    // sum_j A_{nj} (delta_{jm} + G_{jm}) = -G_{nm}, row m
    for (int m = 1; m <= k; ++m) {
      rhs[static_cast<std::size_t>(m - 1)] = -G(n, m);
      for (int j = 1; j <= k; ++j) M[static_cast<std::size_t>((m - 1) * k + (j - 1))] = (j == m ? 1 : 0) + static_cast<Wide>(G(j, m));
    }
    const auto x = detail::solve_dense(std::move(M), std::move(rhs), n);
    for (int j = 1; j <= k; ++j) A.set(n, j, static_cast<double>(x[static_cast<std::size_t>(j - 1)]));
  }
  return A;
}

Potential potential_from_A(const ATable& A, int b) {
  if (b < 1 || A.size() < b + 1) throw Error(ErrorCode::InvalidArgument, "A table must cover n = 1..b+1");
  std::vector<double> V(static_cast<std::size_t>(b));
  for (int n = 1; n <= b; ++n) V[static_cast<std::size_t>(n - 1)] = A(n + 1, n) - A(n, n - 1);
  return Potential(std::move(V));
}

GLInversion gl_invert_with_warnings(const SpectralData& data) {
  const int b = data.b;
  GLKernel G = gl_kernel(data, b + 1);
  Potential V = potential_from_A(gl_solve(G, b), b);
  const LaurentPoly back = jost_function(V);
  double err = 0.0;
  for (int k = 0; k <= 2 * b - 1; ++k) err = std::max(err, std::abs(back.coeff(k) - data.f0.coeff(k)));
  if (err > kRoundTrip * std::max(1.0, data.f0.scale()))
    throw Error(ErrorCode::Inconsistent, "recovered potential does not reproduce f0");
  return {std::move(V), std::move(G.warnings)};
}

Potential gl_invert(const SpectralData& data) { return gl_invert_with_warnings(data).potential; }

}  // namespace lattice_ist
