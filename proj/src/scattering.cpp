#include "boxgap/scattering.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace boxgap {

void validate_potential(const PotentialSpec& v) {
  if (v.amplitude < 0) throw std::invalid_argument("potential: amplitude must be >= 0");
  if (!(v.range > 0 && v.range < 1)) throw std::invalid_argument("potential: range in (0,1)");
  if (v.kind == PotentialKind::tabulated) {
    if (v.sample_r.size() != v.sample_v.size() || v.sample_r.size() < 2)
      throw std::invalid_argument("potential: tabulated samples need matching lengths >= 2");
    for (size_t i = 0; i < v.sample_r.size(); ++i) {
      if (v.sample_v[i] < 0) throw std::invalid_argument("potential: negative sample");
      if (i && v.sample_r[i] <= v.sample_r[i - 1])
        throw std::invalid_argument("potential: radii must increase");
    }
    if (v.sample_r.back() > v.range) throw std::invalid_argument("potential: samples beyond range");
  }
}

double potential_value(const PotentialSpec& v, double r) {
  switch (v.kind) {
    case PotentialKind::square_well:
      return r <= v.range ? v.amplitude : 0.0;
    case PotentialKind::smooth_bump: {
      const double z = r / v.range;
      if (z >= 1.0) return 0.0;
      return v.amplitude * std::exp(1.0 - 1.0 / (1.0 - z * z));
    }
    case PotentialKind::tabulated: {
      if (r >= v.sample_r.back()) return 0.0;
      if (r <= v.sample_r.front()) return v.sample_v.front();
      auto it = std::upper_bound(v.sample_r.begin(), v.sample_r.end(), r);
      const size_t j = size_t(it - v.sample_r.begin());
      const double t = (r - v.sample_r[j - 1]) / (v.sample_r[j] - v.sample_r[j - 1]);
      return (1.0 - t) * v.sample_v[j - 1] + t * v.sample_v[j];
    }
  }
  return 0.0;
}

RadialScatteringSolution solve_scattering(const PotentialSpec& v, double r_max, int n_r) {
  validate_potential(v);
  if (r_max < 2.0 * v.range) throw std::invalid_argument("solve_scattering: r_max >= 2R");
  if (n_r < 256) throw std::invalid_argument("solve_scattering: n_r >= 256");

  RadialScatteringSolution sol;
  sol.potential = v;
  sol.r_max = r_max;
  sol.n_r = n_r;
  sol.r.resize(n_r + 1);
  sol.u.resize(n_r + 1);
  sol.up.resize(n_r + 1);

  const double h = r_max / n_r;
  // Sample the potential one-sidedly within each step so that a jump sitting
  // on a node never leaks into the neighbouring step.  With the well edge
  // grid-aligned every step then sees a smooth (constant) potential and the
  // classical 4th order survives; a non-aligned edge degrades only the one
  // straddling step.
  auto step_v = [&](double a, double b, double rr) -> double {
    if (v.kind == PotentialKind::square_well) {
      if (b <= v.range * (1.0 + 1e-12)) return v.amplitude;
      if (a >= v.range * (1.0 - 1e-12)) return 0.0;
    }
    return potential_value(v, rr);
  };

  double uu = 0.0, pp = 1.0;
  sol.r[0] = 0.0;
  sol.u[0] = uu;
  sol.up[0] = pp;
  for (int k = 0; k < n_r; ++k) {
    const double rr = k * h;
    auto rhs = [&](double r2, double u2) { return 0.5 * step_v(rr, rr + h, r2) * u2; };
    // classical 4th-order step for u'' = V u / 2
    const double k1u = pp, k1p = rhs(rr, uu);
    const double k2u = pp + 0.5 * h * k1p, k2p = rhs(rr + 0.5 * h, uu + 0.5 * h * k1u);
    const double k3u = pp + 0.5 * h * k2p, k3p = rhs(rr + 0.5 * h, uu + 0.5 * h * k2u);
    const double k4u = pp + h * k3p, k4p = rhs(rr + h, uu + h * k3u);
    uu += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    pp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    sol.r[k + 1] = (k + 1) * h;
    sol.u[k + 1] = uu;
    sol.up[k + 1] = pp;
    if (uu <= 0.0)
      throw std::runtime_error(
          "solve_scattering: u dropped to zero inside the well (potential too strong for the "
          "small-scattering-length regime)");
  }
  sol.c = pp;
  sol.a0 = r_max - uu / pp;
  return sol;
}

double RadialScatteringSolution::omega(double rr) const {
  if (rr < 0) throw std::invalid_argument("omega: negative radius");
  if (rr == 0.0) return 1.0 - 1.0 / c;  // u(r)/r -> u'(0) = 1
  if (rr >= r_max) return a0 / rr;
  const double h = r_max / n_r;
  int k = int(rr / h);
  if (k >= n_r) k = n_r - 1;
  const double t = (rr - r[k]) / h;
  // cubic Hermite in (u, u') over [r_k, r_{k+1}]
  const double t2 = t * t, t3 = t2 * t;
  const double uu = (2 * t3 - 3 * t2 + 1) * u[k] + (t3 - 2 * t2 + t) * h * up[k] +
                    (-2 * t3 + 3 * t2) * u[k + 1] + (t3 - t2) * h * up[k + 1];
  return 1.0 - uu / (c * rr);
}

double scattering_length_integral(const RadialScatteringSolution& sol) {
  // (1/(8 pi)) int V(1-omega) dx = (1/2) int_0^rmax V u r / c dr on the nodes
  const int n = sol.n_r;
  const double h = sol.r_max / n;
  auto f = [&](int k) {
    return potential_value(sol.potential, sol.r[k]) * sol.u[k] * sol.r[k] / sol.c;
  };
  // the integrand vanishes beyond the support: when the well edge is
  // grid-aligned, stop the composite rule there so the jump never sits inside
  // a Simpson pair
  int m = n;
  if (sol.potential.kind == PotentialKind::square_well) {
    const double j = sol.potential.range / h;
    if (std::abs(j - std::round(j)) < 1e-9 && std::round(j) <= n) m = int(std::round(j));
  }
  double acc = 0.0;
  int k = 0;
  for (; k + 2 <= m; k += 2) acc += h / 3.0 * (f(k) + 4.0 * f(k + 1) + f(k + 2));
  if (k + 1 <= m) acc += h / 2.0 * (f(k) + f(k + 1));
  return 0.5 * acc;
}

double scattering_length(const RadialScatteringSolution& sol) {
  const double direct = sol.a0;
  const double integral = scattering_length_integral(sol);
  if (direct == 0.0 && integral == 0.0) return 0.0;
  const double rel = std::abs(direct - integral) / std::max(std::abs(direct), 1e-300);
  if (rel > 1e-6)
    throw std::runtime_error("scattering_length: asymptotic and integral routes disagree");
  return direct;
}

void write_radial_csv(const RadialScatteringSolution& sol, std::ostream& os) {
  os << "r,omega\n";
  char buf[32];
  for (int k = 0; k <= sol.n_r; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", sol.r[k]);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", sol.omega(sol.r[k]));
    os << buf << '\n';
  }
}

// ---------------------------------------------------------------------------
// smooth cutoff
// ---------------------------------------------------------------------------

double cutoff_chi(double t) {
  t = std::abs(t);
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double s = 2.0 * t - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double cutoff_chi_dd(double t) {
  t = std::abs(t);
  if (t <= 0.5 || t >= 1.0) return 0.0;
  const double s = 2.0 * t - 1.0;
  const double q = 1.0 - s * s;
  // psi(s) = exp(1 - 1/q):  psi'' = psi * (4 s^2/q^4 - 2/q^2 - 8 s^2/q^3)
  const double psi = std::exp(1.0 - 1.0 / q);
  const double psi_dd = psi * (4.0 * s * s / (q * q * q * q) - 2.0 / (q * q) -
                               8.0 * s * s / (q * q * q));
  return 4.0 * psi_dd;  // chain rule for s = 2t - 1
}

CutoffScatteringPair cutoff_pair(const RadialScatteringSolution& sol, double ell, double lambda) {
  if (!(lambda > 0 && lambda <= 1.0)) throw std::invalid_argument("cutoff_pair: lambda in (0,1]");
  if (!(2.0 * sol.potential.range / ell < lambda))
    throw std::invalid_argument("cutoff_pair: requires 2R/ell < lambda");
  return {sol, ell, lambda};
}

double CutoffScatteringPair::omega_cut(double r) const {
  const double chi = cutoff_chi(r / lambda);
  if (chi == 0.0) return 0.0;
  return sol.omega(ell * r) * chi;
}

double CutoffScatteringPair::omega_cut3(const std::array<double, 3>& x) const {
  return omega_cut(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
}

double CutoffScatteringPair::eps_cut(double r) const {
  if (r <= 0.5 * lambda || r >= lambda) return 0.0;
  return 2.0 * (sol.a0 / ell) / (lambda * lambda) * cutoff_chi_dd(r / lambda) / r;
}

double CutoffScatteringPair::eps_cut3(const std::array<double, 3>& x) const {
  return eps_cut(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
}

double CutoffScatteringPair::scaled_vf(double r) const {
  const double rr = ell * r;
  const double vv = potential_value(sol.potential, rr);
  if (vv == 0.0) return 0.0;
  return ell * ell * vv * (1.0 - sol.omega(rr));
}

// ---------------------------------------------------------------------------
// radial Fourier transforms
// ---------------------------------------------------------------------------

namespace {

double ft_kernel(double s, double r, int dim) {
  switch (dim) {
    case 3: {
      const double x = s * r;
      const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      return 4.0 * M_PI * sinc * r * r;
    }
    case 2:
      return 2.0 * M_PI * std::cyl_bessel_j(0.0, s * r) * r;
    case 1:
      return 2.0 * std::cos(s * r);
  }
  throw std::invalid_argument("fourier_radial: dim must be 1, 2, or 3");
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double fourier_radial(const std::function<double(double)>& g, double s, int dim, double r_support,
                      double tol) {
  if (r_support <= 0) throw std::invalid_argument("fourier_radial: positive support needed");
  auto f = [&](double r) { return g(r) * ft_kernel(s, r, dim); };
  // split so each panel spans at most ~half an oscillation of the kernel
  const int panels = std::max(4, int(std::ceil(std::abs(s) * r_support / M_PI)) * 2);
  const double w = r_support / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = i * w, b = a + w, m = a + 0.5 * w;
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = w / 6.0 * (fa + 4.0 * fm + fb);
    acc += adaptive_simpson(f, a, b, fa, fm, fb, whole, tol / panels, 24);
  }
  return acc;
}

double fourier_mode(const std::function<double(double)>& g, double p_norm, double r_support) {
  return fourier_radial(g, p_norm, 3, r_support);
}

double fourier_mode(const std::function<double(double)>& g, const std::array<int, 3>& mode,
                    double r_support) {
  const double k2 = double(mode[0]) * mode[0] + double(mode[1]) * mode[1] +
                    double(mode[2]) * mode[2];
  return fourier_mode(g, M_PI * std::sqrt(k2), r_support);
}

double RadialFourierTable::operator()(double s) const {
  s = std::abs(s);
  if (s >= s_max) throw std::out_of_range("RadialFourierTable: s beyond tabulated range");
  const double t = s / step;
  const Eigen::Index k = std::min<Eigen::Index>(Eigen::Index(t), values.size() - 2);
  const double frac = t - double(k);
  return (1.0 - frac) * values[k] + frac * values[k + 1];
}

RadialFourierTable tabulate_fourier(const std::function<double(double)>& g, double r_support,
                                    double s_max, int n_s, int dim) {
  if (n_s < 2) throw std::invalid_argument("tabulate_fourier: n_s >= 2");
  RadialFourierTable tab;
  tab.s_max = s_max;
  tab.step = s_max / (n_s - 1);
  tab.values.resize(n_s);
  for (int i = 0; i < n_s; ++i) tab.values[i] = fourier_radial(g, i * tab.step, dim, r_support);
  return tab;
}

}  // namespace boxgap
