#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "interlace/grid.hpp"

namespace interlace {

// V(x) = -(kappa sech(kappa x))^2 [1 + i sinh(kappa x)], kappa > 0.
struct PoschlTeller {
  double kappa = 2.0;
  PoschlTeller() = default;
  explicit PoschlTeller(double kappa_);
};

// V(x) = w0 (cos^2 x + i v0 sin 2x) on [0, pi], w0 outside. Real spectrum
// regime requires |v0| <= 1/2.
struct SinusoidalWell {
  double w0 = 30.0;
  double v0 = 0.49;
  SinusoidalWell() = default;
  SinusoidalWell(double w0_, double v0_);
};

// V(x) = x^2 + 2 i x^3.
struct CubicOscillator {};

// V(x) = -kappa^2 [ ((nu^2+mu^2)/2 - 1/4) sech^2(kappa x + i eps)
//                  + i ((nu^2-mu^2)/2) sinh(kappa x + i eps) sech^2(kappa x + i eps) ].
struct Levai {
  cplx nu{-7.0, 1.0};
  cplx mu{-3.0, -1.0};
  double epsilon = 0.1;
  double kappa = 1.0;
};

// Piecewise-constant well: V = v0 + i vi1 on [-a, 0), v0 + i vi2 on [0, b),
// zero outside. Step functions are right-continuous.
struct SquareWell {
  double a = 3.0, b = 4.2762;
  double v0 = -1.0, vi1 = -0.2, vi2 = 0.1;
  SquareWell() = default;
  SquareWell(double a_, double b_, double v0_, double vi1_, double vi2_);
};

// Constant term of the alpha radicand: Quadratic uses (lambda + c1^2)/c0,
// Linear uses (lambda + c1)/c0. The two coincide for c1 in {0, 1}.
enum class CoefficientForm { Quadratic, Linear };

// Complex oscillator partner generated from the harmonic seed x^2 with
// factorization energy -1:
//   alpha^2(x) = e^{x^2} g(erf x),  g(u) = erf_a u^2 + erf_b u + erf_c,
//   V = x^2 - 2 (ln alpha)'' - 4 i lambda_s alpha'/alpha^3.
// lambda_s = sqrt(Lambda) where Lambda is the constant the closed form
// feeds into alpha'' = (x^2 + 1) alpha + Lambda/alpha^3; this is the unique
// choice for which beta = -alpha'/alpha + i lambda_s/alpha^2 solves the
// Riccati equation, so the spectrum is exactly {2n - 1}.
struct DarbouxOscillator {
  double c0 = 2.0, c1 = 0.0, lambda = 1.7;
  CoefficientForm form = CoefficientForm::Quadratic;
  double erf_a = 0.0, erf_b = 0.0, erf_c = 0.0;
  double pinney = 0.0;    // Lambda
  double lambda_s = 0.0;  // sqrt(Lambda)

  DarbouxOscillator() : DarbouxOscillator(2.0, 0.0, 1.7) {}
  DarbouxOscillator(double c0_, double c1_, double lambda_,
                    CoefficientForm form_ = CoefficientForm::Quadratic);

  double g(double u) const { return (erf_a * u + erf_b) * u + erf_c; }
  double radicand_min() const;  // min of g over u in [-1, 1]
};

// Complex samples on a grid, evaluated by linear interpolation.
struct Sampled {
  Grid grid;
  std::vector<cplx> values;
};

using PotentialSpec = std::variant<PoschlTeller, SinusoidalWell, CubicOscillator,
                                   Levai, SquareWell, DarbouxOscillator, Sampled>;

cplx eval_potential(const PotentialSpec& spec, double x);

std::string family_name(const PotentialSpec& spec);

// Abscissas where V jumps (square-well edges); used to mask finite-difference
// diagnostics around non-smooth points.
std::vector<double> discontinuities(const PotentialSpec& spec);

// Center c with V(2c - x) = conj(V(x)) when the family has one.
std::optional<double> pt_center(const PotentialSpec& spec);

enum class PotentialClass { ContinuousClass, ShortRangeClass, Neither };

struct ClassLabel {
  PotentialClass kind = PotentialClass::Neither;
  std::optional<double> sign_change;  // x0
};

// Classifies V_I sampled on the grid: exactly-zero tails with one interior
// sign change -> ShortRangeClass; continuous with one sign change ->
// ContinuousClass; anything else -> Neither. tol <= 0 selects the default
// jump tolerance 10 h |local slope|.
ClassLabel classify(const PotentialSpec& spec, const Grid& grid, double tol = 0.0);

// max_x |V(x) - conj(V(-x))| <= tol on a grid symmetric about 0.
bool pt_check(const PotentialSpec& spec, const Grid& grid, double tol = 1e-9);

struct AreaResult {
  double value = 0.0;
  bool convergent = true;  // false when |V_I| fails to decay at the grid ends
};

// \int V_I dx by composite Simpson over the grid.
AreaResult zero_total_area(const PotentialSpec& spec, const Grid& grid);

}  // namespace interlace
