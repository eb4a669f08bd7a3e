#include "interlace/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace interlace {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

double sech(double x) { return 1.0 / std::cosh(x); }

// Inverse of erf by Newton iteration from a logit-style seed.
double erf_inverse(double y) {
  if (y <= -1.0) return -6.0;
  if (y >= 1.0) return 6.0;
  double x = 0.0;
  for (int it = 0; it < 60; ++it) {
    double r = std::erf(x) - y;
    double d = 2.0 / kSqrtPi * std::exp(-x * x);
    double step = r / d;
    x -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return x;
}

}  // namespace

PoschlTeller::PoschlTeller(double kappa_) : kappa(kappa_) {
  if (!(kappa > 0.0)) throw std::invalid_argument("PoschlTeller: kappa must be > 0");
}

SinusoidalWell::SinusoidalWell(double w0_, double v0_) : w0(w0_), v0(v0_) {
  if (std::abs(v0) > 0.5)
    throw std::invalid_argument("SinusoidalWell: |v0| <= 1/2 required for a real spectrum");
}

SquareWell::SquareWell(double a_, double b_, double v0_, double vi1_, double vi2_)
    : a(a_), b(b_), v0(v0_), vi1(vi1_), vi2(vi2_) {
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("SquareWell: a, b must be >= 0");
}

DarbouxOscillator::DarbouxOscillator(double c0_, double c1_, double lambda_, CoefficientForm form_)
    : c0(c0_), c1(c1_), lambda(lambda_), form(form_) {
  if (c0 == 0.0) throw std::invalid_argument("DarbouxOscillator: c0 must be nonzero");
  erf_a = 0.25 * kPi * c0;
  erf_b = kSqrtPi * c1;
  erf_c = (form == CoefficientForm::Quadratic) ? (lambda + c1 * c1) / c0 : (lambda + c1) / c0;
  pinney = c0 * erf_c - c1 * c1;  // (4ac - b^2) w0^2 / 4 for the erf basis
  if (radicand_min() <= 0.0) {
    double u_bad = -erf_b / (2.0 * erf_a);
    u_bad = std::clamp(u_bad, -1.0, 1.0);
    std::ostringstream os;
    os << "DarbouxOscillator: alpha^2 radicand not positive (min " << radicand_min()
       << " near x = " << erf_inverse(u_bad) << ")";
    throw std::domain_error(os.str());
  }
  if (pinney < 0.0)
    throw std::domain_error("DarbouxOscillator: negative Ermakov constant; no real superpotential");
  lambda_s = std::sqrt(pinney);
}

double DarbouxOscillator::radicand_min() const {
  double m = std::min(g(-1.0), g(1.0));
  if (erf_a > 0.0) {
    double u_star = -erf_b / (2.0 * erf_a);
    if (u_star > -1.0 && u_star < 1.0) m = std::min(m, g(u_star));
  }
  return m;
}

namespace {

cplx eval_poschl_teller(const PoschlTeller& p, double x) {
  double s = sech(p.kappa * x);
  double pref = -p.kappa * p.kappa * s * s;
  return {pref, pref * std::sinh(p.kappa * x)};
}

cplx eval_sinusoidal(const SinusoidalWell& p, double x) {
  if (x < 0.0 || x >= kPi) return {p.w0, 0.0};
  double c = std::cos(x);
  return {p.w0 * c * c, p.w0 * p.v0 * std::sin(2.0 * x)};
}

cplx eval_cubic(double x) { return {x * x, 2.0 * x * x * x}; }

cplx eval_levai(const Levai& p, double x) {
  // cosh/sinh at kappa x + i eps via real/imaginary decomposition.
  double ce = std::cos(p.epsilon), se = std::sin(p.epsilon);
  double chx = std::cosh(p.kappa * x), shx = std::sinh(p.kappa * x);
  cplx ch(chx * ce, shx * se);
  cplx sh(shx * ce, chx * se);
  cplx nu2 = p.nu * p.nu, mu2 = p.mu * p.mu;
  cplx big_a = 0.5 * (nu2 + mu2) - 0.25;
  cplx big_b = 0.5 * (nu2 - mu2);
  cplx sech2 = 1.0 / (ch * ch);
  return -p.kappa * p.kappa * (big_a * sech2 + cplx(0.0, 1.0) * big_b * sh * sech2);
}

cplx eval_square_well(const SquareWell& p, double x) {
  if (x >= -p.a && x < 0.0) return {p.v0, p.vi1};
  if (x >= 0.0 && x < p.b) return {p.v0, p.vi2};
  return {0.0, 0.0};
}

cplx eval_darboux(const DarbouxOscillator& p, double x) {
  double u = std::erf(x);
  double e = std::exp(-x * x);
  double s = 2.0 / kSqrtPi * e;  // erf'(x)
  double g = p.g(u);
  double gp = (2.0 * p.erf_a * u + p.erf_b) * s;
  double gpp = 2.0 * p.erf_a * s * s - 2.0 * x * gp;
  double vr = x * x - 2.0 - (gpp * g - gp * gp) / (g * g);
  double vi = -4.0 * p.lambda_s * (x + gp / (2.0 * g)) * e / g;
  return {vr, vi};
}

cplx eval_sampled(const Sampled& p, double x) {
  if (!p.grid.contains(x))
    throw std::domain_error("Sampled potential: x outside the sampled grid");
  double h = p.grid.spacing();
  double t = (x - p.grid.x_min) / h;
  int i = static_cast<int>(t);
  if (i >= p.grid.n_points - 1) i = p.grid.n_points - 2;
  double w = t - i;
  return p.values[i] * (1.0 - w) + p.values[i + 1] * w;
}

}  // namespace

cplx eval_potential(const PotentialSpec& spec, double x) {
  return std::visit(
      [x](const auto& p) -> cplx {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PoschlTeller>) return eval_poschl_teller(p, x);
        else if constexpr (std::is_same_v<T, SinusoidalWell>) return eval_sinusoidal(p, x);
        else if constexpr (std::is_same_v<T, CubicOscillator>) return eval_cubic(x);
        else if constexpr (std::is_same_v<T, Levai>) return eval_levai(p, x);
        else if constexpr (std::is_same_v<T, SquareWell>) return eval_square_well(p, x);
        else if constexpr (std::is_same_v<T, DarbouxOscillator>) return eval_darboux(p, x);
        else return eval_sampled(p, x);
      },
      spec);
}

std::string family_name(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PoschlTeller>) return "poschl_teller";
        else if constexpr (std::is_same_v<T, SinusoidalWell>) return "sinusoidal_well";
        else if constexpr (std::is_same_v<T, CubicOscillator>) return "cubic_oscillator";
        else if constexpr (std::is_same_v<T, Levai>) return "levai";
        else if constexpr (std::is_same_v<T, SquareWell>) return "square_well";
        else if constexpr (std::is_same_v<T, DarbouxOscillator>) return "darboux_oscillator";
        else return "sampled";
      },
      spec);
}

std::vector<double> discontinuities(const PotentialSpec& spec) {
  if (const auto* w = std::get_if<SquareWell>(&spec)) return {-w->a, 0.0, w->b};
  if (std::holds_alternative<SinusoidalWell>(spec)) return {0.0, kPi};  // V' kinks
  return {};
}

std::optional<double> pt_center(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& p) -> std::optional<double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PoschlTeller>) return 0.0;
        else if constexpr (std::is_same_v<T, CubicOscillator>) return 0.0;
        else if constexpr (std::is_same_v<T, SinusoidalWell>) return kPi / 2.0;
        else if constexpr (std::is_same_v<T, DarbouxOscillator>) {
          if (p.c1 == 0.0) return 0.0;
          return std::nullopt;
        } else
          return std::nullopt;
      },
      spec);
}

ClassLabel classify(const PotentialSpec& spec, const Grid& grid, double tol) {
  const int n = grid.n_points;
  const double h = grid.spacing();
  std::vector<double> vi(n);
  double vmax = 0.0;
  for (int i = 0; i < n; ++i) {
    vi[i] = eval_potential(spec, grid.x(i)).imag();
    vmax = std::max(vmax, std::abs(vi[i]));
  }
  ClassLabel label;
  if (vmax == 0.0) return label;  // purely real potential: Neither
  const double eps = 1e-12 * vmax;

  // Sign changes (runs of |V_I| <= eps are treated as zero crossings).
  int prev_sign = 0;
  int changes = 0;
  double x0 = 0.0;
  int first_support = -1, last_support = -1;
  for (int i = 0; i < n; ++i) {
    if (std::abs(vi[i]) > eps) {
      if (first_support < 0) first_support = i;
      last_support = i;
    }
    int s = sign_of(vi[i], eps);
    if (s != 0) {
      if (prev_sign != 0 && s != prev_sign) {
        ++changes;
        // crossing located by linear interpolation on the bracketing samples
        int j = i;
        while (j > 0 && sign_of(vi[j - 1], eps) == 0) --j;
        double xa = grid.x(j - 1), xb = grid.x(i);
        double fa = vi[j - 1], fb = vi[i];
        x0 = (std::abs(fb - fa) > 0.0) ? xa - fa * (xb - xa) / (fb - fa)
                                       : 0.5 * (xa + xb);
      }
      prev_sign = s;
    }
  }

  // Exactly-zero tails => compact support (short-range candidates).
  bool zero_left = first_support > 0 && vi[0] == 0.0;
  bool zero_right = last_support >= 0 && last_support < n - 1 && vi[n - 1] == 0.0;
  if (zero_left || zero_right) {
    bool tails_exact = true;
    for (int i = 0; i < first_support; ++i) tails_exact &= vi[i] == 0.0;
    for (int i = last_support + 1; i < n; ++i) tails_exact &= vi[i] == 0.0;
    if (tails_exact && first_support > 0 && last_support < n - 1 && changes == 1) {
      label.kind = PotentialClass::ShortRangeClass;
      label.sign_change = x0;
      return label;
    }
  }

  // Continuity: adjacent jumps must stay within tol (default scales with the
  // local slope so smooth functions pass on any fine grid).
  bool continuous = true;
  for (int i = 0; i + 1 < n && continuous; ++i) {
    double jump = std::abs(vi[i + 1] - vi[i]);
    double slope = 0.0;
    if (i > 0) slope = std::max(slope, std::abs(vi[i] - vi[i - 1]) / h);
    if (i + 2 < n) slope = std::max(slope, std::abs(vi[i + 2] - vi[i + 1]) / h);
    double allowed = (tol > 0.0) ? tol : 10.0 * h * slope + 1e-9 * vmax;
    if (jump > allowed) continuous = false;
  }
  if (continuous && changes == 1) {
    label.kind = PotentialClass::ContinuousClass;
    label.sign_change = x0;
  }
  return label;
}

bool pt_check(const PotentialSpec& spec, const Grid& grid, double tol) {
  if (std::abs(grid.center()) > 1e-9 * grid.width())
    throw std::invalid_argument("pt_check: grid must be symmetric about 0");
  double worst = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    double x = grid.x(i);
    cplx d = eval_potential(spec, x) - std::conj(eval_potential(spec, -x));
    worst = std::max(worst, std::abs(d));
  }
  return worst <= tol;
}

AreaResult zero_total_area(const PotentialSpec& spec, const Grid& grid) {
  const int n = grid.n_points;
  std::vector<double> vi(n);
  double vmax = 0.0;
  for (int i = 0; i < n; ++i) {
    vi[i] = eval_potential(spec, grid.x(i)).imag();
    vmax = std::max(vmax, std::abs(vi[i]));
  }
  AreaResult out;
  out.value = simpson(vi, grid.spacing());
  double edge = std::max(std::abs(vi[0]), std::abs(vi[n - 1]));
  out.convergent = vmax == 0.0 || edge <= 1e-8 * vmax;
  return out;
}

}  // namespace interlace
