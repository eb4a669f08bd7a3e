#pragma once

#include <variant>
#include <vector>

#include "interlace/grid.hpp"
#include "interlace/potentials.hpp"
#include "interlace/solver.hpp"

namespace interlace {

// Eigenpair of the real seed Hamiltonian -d^2/dx^2 + theta(x), sampled with
// analytic derivatives. phi_n carries exactly n sign changes.
struct SeedState {
  int n = 0;
  double energy = 0.0;
  std::vector<double> phi;
  std::vector<double> dphi;
};

// Normalized oscillator eigenstate (theta = x^2, energy 2n + 1) via the
// stable normalized Hermite recurrence; valid for 0 <= n <= 30.
SeedState seed_oscillator_state(int n, const Grid& grid);

// Built-in harmonic seed theta = x^2 with factorization energy e0 = -1.
struct OscillatorSeed {
  double e0 = -1.0;
};

// Real sampled seed potential with user-supplied eigenpairs.
struct SampledSeed {
  Grid grid;
  std::vector<double> theta;
  double e0 = 0.0;
};

using SeedSpec = std::variant<OscillatorSeed, SampledSeed>;

double seed_theta(const SeedSpec& seed, double x);
double seed_e0(const SeedSpec& seed);

struct ErmakovAlpha {
  Grid grid;
  std::vector<double> alpha;
  std::vector<double> dalpha;
  double c0 = 0.0, c1 = 0.0, lambda = 0.0;
  CoefficientForm form = CoefficientForm::Quadratic;
  double pinney = 0.0;    // constant Lambda in alpha'' = (theta - e0) alpha + Lambda/alpha^3
  double lambda_s = 0.0;  // sqrt(Lambda)
  double e0 = 0.0;
  bool oscillator_closed_form = false;
  DarbouxOscillator closed;  // valid when oscillator_closed_form
  SeedSpec seed;
};

// Positive Ermakov solution from the closed form (oscillator seed) or from
// two numerically integrated solutions of u'' = (theta - e0) u (general
// seeds). Throws when the radicand is not strictly positive on the grid or
// when alpha' does not change sign exactly once.
ErmakovAlpha ermakov_alpha(const SeedSpec& seed, double lambda, double c0, double c1,
                           const Grid& grid, CoefficientForm form = CoefficientForm::Quadratic);

// Same construction but forcing the numerically integrated (z, v) route even
// for the oscillator seed; used to cross-check the closed form.
ErmakovAlpha ermakov_alpha_general(const SeedSpec& seed, double lambda, double c0, double c1,
                                   const Grid& grid,
                                   CoefficientForm form = CoefficientForm::Quadratic);

struct Superpotential {
  Grid grid;
  std::vector<cplx> beta;
  std::vector<cplx> dbeta;
  double lambda_s = 0.0;
  double e0 = 0.0;
  bool oscillator_closed_form = false;
  DarbouxOscillator closed;
  SeedSpec seed;
};

// beta = -alpha'/alpha + i lambda_s / alpha^2 with analytic derivatives.
Superpotential superpotential(const ErmakovAlpha& alpha);

// V = theta + 2 beta' as a catalog spec: the exact DarbouxOscillator variant
// for the harmonic seed, a Sampled potential otherwise.
PotentialSpec darboux_potential(const ErmakovAlpha& alpha);

// psi_{n+1} = C (phi_n' + beta phi_n), normalized with C real positive,
// energy equal to the seed eigenvalue.
WaveFunction partner_state(const SeedState& seed_state, const Superpotential& beta);

// Missing ground state psi_0 = C exp(+int beta) at the factorization energy,
// integrated from the grid midpoint by cumulative Simpson. Throws when the
// tails fail to decay.
WaveFunction missing_state(const Superpotential& beta);

}  // namespace interlace
