#include "interlace/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace interlace {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double interp_linear(const Grid& g, const std::vector<double>& f, double x) {
  double t = (x - g.x_min) / g.spacing();
  int i = static_cast<int>(t);
  i = std::clamp(i, 0, g.n_points - 2);
  double w = t - i;
  return f[i] * (1.0 - w) + f[i + 1] * w;
}

void require_single_sign_change(const std::vector<double>& dalpha, const Grid& grid) {
  int changes = 0;
  std::vector<double> where;
  int prev = 0;
  double floor = 0.0;
  for (double v : dalpha) floor = std::max(floor, std::abs(v));
  floor *= 1e-12;
  for (int i = 0; i < grid.n_points; ++i) {
    int s = sign_of(dalpha[i], floor);
    if (s != 0) {
      if (prev != 0 && s != prev) {
        ++changes;
        where.push_back(grid.x(i));
      }
      prev = s;
    }
  }
  if (changes != 1) {
    std::ostringstream os;
    os << "ermakov_alpha: alpha' must change sign exactly once, found " << changes;
    if (!where.empty()) {
      os << " (at";
      for (double x : where) os << " " << x;
      os << ")";
    }
    throw std::domain_error(os.str());
  }
}

}  // namespace

SeedState seed_oscillator_state(int n, const Grid& grid) {
  if (n < 0 || n > 30)
    throw std::invalid_argument("seed_oscillator_state: n must be in [0, 30]");
  SeedState st;
  st.n = n;
  st.energy = 2.0 * n + 1.0;
  st.phi.resize(grid.n_points);
  st.dphi.resize(grid.n_points);
  const double norm0 = std::pow(3.14159265358979323846, -0.25);
  for (int i = 0; i < grid.n_points; ++i) {
    double x = grid.x(i);
    double g = std::exp(-0.5 * x * x);
    // normalized recurrence phi_{m+1} = x sqrt(2/(m+1)) phi_m - sqrt(m/(m+1)) phi_{m-1}
    double pm1 = 0.0, pm = norm0 * g;
    for (int m = 0; m < n; ++m) {
      double pn = x * std::sqrt(2.0 / (m + 1)) * pm - std::sqrt(double(m) / (m + 1)) * pm1;
      pm1 = pm;
      pm = pn;
    }
    st.phi[i] = pm;
    // phi_n' = sqrt(2n) phi_{n-1} - x phi_n
    st.dphi[i] = std::sqrt(2.0 * n) * pm1 - x * pm;
  }
  return st;
}

double seed_theta(const SeedSpec& seed, double x) {
  if (std::holds_alternative<OscillatorSeed>(seed)) return x * x;
  const auto& s = std::get<SampledSeed>(seed);
  return interp_linear(s.grid, s.theta, x);
}

double seed_e0(const SeedSpec& seed) {
  if (const auto* o = std::get_if<OscillatorSeed>(&seed)) return o->e0;
  return std::get<SampledSeed>(seed).e0;
}

ErmakovAlpha ermakov_alpha(const SeedSpec& seed, double lambda, double c0, double c1,
                           const Grid& grid, CoefficientForm form) {
  if (c0 == 0.0) throw std::invalid_argument("ermakov_alpha: c0 must be nonzero");
  if (!std::holds_alternative<OscillatorSeed>(seed))
    return ermakov_alpha_general(seed, lambda, c0, c1, grid, form);

  // Oscillator seed: alpha^2 = e^{x^2} g(erf x) in closed form. The
  // DarbouxOscillator constructor validates radicand positivity.
  DarbouxOscillator closed(c0, c1, lambda, form);
  ErmakovAlpha out;
  out.grid = grid;
  out.c0 = c0;
  out.c1 = c1;
  out.lambda = lambda;
  out.form = form;
  out.pinney = closed.pinney;
  out.lambda_s = closed.lambda_s;
  out.e0 = seed_e0(seed);
  out.oscillator_closed_form = true;
  out.closed = closed;
  out.seed = seed;
  out.alpha.resize(grid.n_points);
  out.dalpha.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    double x = grid.x(i);
    double u = std::erf(x);
    double g = closed.g(u);
    if (!(g > 0.0)) {
      std::ostringstream os;
      os << "ermakov_alpha: radicand nonpositive at x = " << x;
      throw std::domain_error(os.str());
    }
    double a = std::exp(0.5 * x * x) * std::sqrt(g);
    double gp = (2.0 * closed.erf_a * u + closed.erf_b) * (2.0 / kSqrtPi) * std::exp(-x * x);
    out.alpha[i] = a;
    out.dalpha[i] = a * (x + gp / (2.0 * g));
  }
  require_single_sign_change(out.dalpha, grid);
  return out;
}

ErmakovAlpha ermakov_alpha_general(const SeedSpec& seed, double lambda, double c0, double c1,
                                   const Grid& grid, CoefficientForm form) {
  if (c0 == 0.0) throw std::invalid_argument("ermakov_alpha: c0 must be nonzero");
  const double e0 = seed_e0(seed);
  const int n = grid.n_points;

  // Two independent solutions of u'' = (theta - e0) u grown outward from the
  // node nearest the grid center, z: (1, 0), v: (0, 1); then w0 = W[z, v] =
  // z v' - z' v = 1 identically.
  std::vector<double> z(n), dz(n), v(n), dv(n);
  int i0 = grid.index_near(grid.center());
  auto rk4_real = [&](double x, double h, double& u, double& du) {
    auto f = [&](double xx, double uu, double duu, double& ou, double& odu) {
      ou = duu;
      odu = (seed_theta(seed, xx) - e0) * uu;
    };
    double k1u, k1d, k2u, k2d, k3u, k3d, k4u, k4d;
    f(x, u, du, k1u, k1d);
    f(x + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1d, k2u, k2d);
    f(x + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2d, k3u, k3d);
    f(x + h, u + h * k3u, du + h * k3d, k4u, k4d);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  };
  const double h_grid = grid.spacing();
  const int sub = std::max(1, static_cast<int>(std::lround(h_grid / 1e-3)));
  auto propagate = [&](std::vector<double>& u, std::vector<double>& du, double u0, double du0) {
    u[i0] = u0;
    du[i0] = du0;
    double uu = u0, dd = du0;
    for (int i = i0 + 1; i < n; ++i) {
      double hs = h_grid / sub;
      for (int s = 0; s < sub; ++s) rk4_real(grid.x(i - 1) + s * hs, hs, uu, dd);
      u[i] = uu;
      du[i] = dd;
    }
    uu = u0;
    dd = du0;
    for (int i = i0 - 1; i >= 0; --i) {
      double hs = -h_grid / sub;
      for (int s = 0; s < sub; ++s) rk4_real(grid.x(i + 1) + s * hs, hs, uu, dd);
      u[i] = uu;
      du[i] = dd;
    }
  };
  propagate(z, dz, 1.0, 0.0);
  propagate(v, dv, 0.0, 1.0);

  const double w0 = 1.0;  // z(x0) v'(x0) - z'(x0) v(x0)
  double ca = c0 / (w0 * w0);
  double cb = 2.0 * c1 / w0;
  double cc = (form == CoefficientForm::Quadratic) ? (lambda + c1 * c1) / c0 : (lambda + c1) / c0;

  ErmakovAlpha out;
  out.grid = grid;
  out.c0 = c0;
  out.c1 = c1;
  out.lambda = lambda;
  out.form = form;
  out.pinney = (4.0 * ca * cc - cb * cb) * w0 * w0 / 4.0;
  if (out.pinney < 0.0)
    throw std::domain_error("ermakov_alpha: negative Ermakov constant; no real superpotential");
  out.lambda_s = std::sqrt(out.pinney);
  out.e0 = e0;
  out.oscillator_closed_form = false;
  out.seed = seed;
  out.alpha.resize(n);
  out.dalpha.resize(n);
  for (int i = 0; i < n; ++i) {
    double p2 = ca * v[i] * v[i] + cb * v[i] * z[i] + cc * z[i] * z[i];
    if (!(p2 > 0.0)) {
      std::ostringstream os;
      os << "ermakov_alpha: radicand nonpositive at x = " << grid.x(i);
      throw std::domain_error(os.str());
    }
    out.alpha[i] = std::sqrt(p2);
    out.dalpha[i] =
        (2.0 * ca * v[i] * dv[i] + cb * (dv[i] * z[i] + v[i] * dz[i]) + 2.0 * cc * z[i] * dz[i]) /
        (2.0 * out.alpha[i]);
  }
  require_single_sign_change(out.dalpha, grid);
  return out;
}

Superpotential superpotential(const ErmakovAlpha& a) {
  Superpotential out;
  out.grid = a.grid;
  out.lambda_s = a.lambda_s;
  out.e0 = a.e0;
  out.oscillator_closed_form = a.oscillator_closed_form;
  out.closed = a.closed;
  out.seed = a.seed;
  const int n = a.grid.n_points;
  out.beta.resize(n);
  out.dbeta.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = a.grid.x(i);
    double al = a.alpha[i], dal = a.dalpha[i];
    out.beta[i] = cplx{-dal / al, a.lambda_s / (al * al)};
    // beta' from the Riccati equation: beta' = beta^2 - (theta - e0).
    cplx b = out.beta[i];
    out.dbeta[i] = b * b - (seed_theta(a.seed, x) - a.e0);
  }
  return out;
}

PotentialSpec darboux_potential(const ErmakovAlpha& a) {
  if (a.oscillator_closed_form) return PotentialSpec{a.closed};
  Sampled s;
  s.grid = a.grid;
  s.values.resize(a.grid.n_points);
  Superpotential b = superpotential(a);
  for (int i = 0; i < a.grid.n_points; ++i)
    s.values[i] = seed_theta(a.seed, a.grid.x(i)) + 2.0 * b.dbeta[i];
  return PotentialSpec{s};
}

WaveFunction partner_state(const SeedState& seed_state, const Superpotential& beta) {
  const int n = beta.grid.n_points;
  if (static_cast<int>(seed_state.phi.size()) != n)
    throw std::invalid_argument("partner_state: seed state and superpotential grids differ");
  WaveFunction wf;
  wf.grid = beta.grid;
  wf.energy = seed_state.energy;
  wf.psi.resize(n);
  wf.dpsi.resize(n);
  for (int i = 0; i < n; ++i) {
    wf.psi[i] = seed_state.dphi[i] + beta.beta[i] * seed_state.phi[i];
    // phi'' = (theta - E_n) phi for the seed eigenpair
    double x = beta.grid.x(i);
    double phi2 = (seed_theta(beta.seed, x) - seed_state.energy) * seed_state.phi[i];
    wf.dpsi[i] = phi2 + beta.dbeta[i] * seed_state.phi[i] + beta.beta[i] * seed_state.dphi[i];
  }
  return normalize(wf);
}

WaveFunction missing_state(const Superpotential& beta) {
  const int n = beta.grid.n_points;
  const double h = beta.grid.spacing();
  const int mid = n / 2;
  // Cumulative integral of beta from the grid midpoint. The trapezoid rule
  // with the analytic beta' endpoint correction is O(h^4) and free of the
  // even/odd sawtooth that a node-wise Simpson accumulation leaves behind.
  std::vector<cplx> integral(n, cplx{0.0, 0.0});
  auto panel = [&](int i, int j) {
    return 0.5 * h * (beta.beta[i] + beta.beta[j]) +
           h * h / 12.0 * (beta.dbeta[i] - beta.dbeta[j]);
  };
  for (int i = mid + 1; i < n; ++i) integral[i] = integral[i - 1] + panel(i - 1, i);
  for (int i = mid - 1; i >= 0; --i) integral[i] = integral[i + 1] - panel(i, i + 1);

  WaveFunction wf;
  wf.grid = beta.grid;
  wf.energy = beta.e0;
  wf.psi.resize(n);
  wf.dpsi.resize(n);
  for (int i = 0; i < n; ++i) wf.psi[i] = std::exp(integral[i]);
  double m = wf.max_abs();
  if (std::abs(wf.psi.front()) > 1e-4 * m || std::abs(wf.psi.back()) > 1e-4 * m)
    throw std::domain_error("missing_state: exp(int beta) is not normalizable on this grid");
  for (int i = 0; i < n; ++i) wf.dpsi[i] = beta.beta[i] * wf.psi[i];
  return normalize(wf);
}

}  // namespace interlace
