#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "interlace/grid.hpp"
#include "interlace/potentials.hpp"

namespace interlace {

enum class PhaseRule { PeakPositive, SymmetryAdapted, Raw };

struct PhaseSpec {
  PhaseRule rule = PhaseRule::Raw;
  double theta = 0.0;  // used by Raw
};

struct WaveFunction {
  Grid grid;
  std::vector<cplx> psi;
  std::vector<cplx> dpsi;
  double energy = 0.0;
  bool normalized = false;
  PhaseSpec phase;

  double max_abs() const;
};

struct TransferMatrix {
  cplx m11, m12, m21, m22;
  cplx k;  // exterior wavenumber the matrix was built at
  cplx det() const { return m11 * m22 - m12 * m21; }
};

enum class SolveMethod { Transfer, Shooting, Analytic };

struct SolverWarning {
  double energy = 0.0;
  std::string message;
};

struct BoundStateResult {
  std::vector<double> energies;
  std::vector<WaveFunction> states;
  std::vector<double> residuals;  // sup-norm of (H - E) psi / max|psi|
  SolveMethod method = SolveMethod::Shooting;
  std::vector<SolverWarning> warnings;
};

struct SolverOptions {
  double h = 1e-3;                 // RK4 step
  double reality_tol = 1e-6;       // accept roots with |Im E| below this
  double reality_warn = 1e-3;      // warn band above reality_tol
  double residual_tol = 1e-4;      // accept states with residual below this
  double boundary_decay = 1e-6;    // |psi| at grid ends relative to max
  double newton_tol = 1e-10;
  double newton_step = 1e-6;       // finite-difference step for d m11/dk
  int newton_max_iter = 50;
  double dedupe_tol = 1e-6;
  int threads = 0;                 // 0 = hardware concurrency
  int output_points = 0;           // 0 = choose from the default spacing
};

struct MagnitudeOverflow : std::runtime_error {
  double x;
  explicit MagnitudeOverflow(double x_)
      : std::runtime_error("integration overflow: |psi| exceeded 1e250"), x(x_) {}
};

// RK4 on (psi, psi')' = (psi', (V - E) psi) with complex state. Aborts with
// MagnitudeOverflow when |psi| exceeds 1e250.
std::pair<cplx, cplx> integrate(const PotentialSpec& spec, cplx energy, double from_x,
                                double to_x, cplx psi0, cplx dpsi0, double h,
                                std::vector<cplx>* psi_out = nullptr,
                                std::vector<cplx>* dpsi_out = nullptr,
                                const std::vector<double>* nodes = nullptr);

// Exterior-to-exterior coefficient map in the plane-wave bases exp(+-ikx) on
// each side of the interaction zone: (A_left, B_left) = M (A_right, B_right).
// SquareWell uses V = 0 outside (E = k^2) with exact piecewise propagation;
// SinusoidalWell uses V = w0 outside (E = w0 + k^2) and RK4 across [0, pi].
TransferMatrix transfer_matrix(const PotentialSpec& spec, cplx k, double h = 1e-3);

struct KRegion {
  double re_min = -0.5, re_max = 0.5;
  double im_min = 0.02, im_max = 5.6;
  int n_re = 33, n_im = 81;
};

BoundStateResult find_bound_states_shortrange(const PotentialSpec& spec, const KRegion& region,
                                              const SolverOptions& opts = {});

struct EnergyWindow {
  double lo = 0.0, hi = 10.0;
};

BoundStateResult find_bound_states_confining(const PotentialSpec& spec, const EnergyWindow& window,
                                             double x_trunc = 10.0, int scan_points = 240,
                                             const SolverOptions& opts = {});

// Closed-form eigenstates of the Levai family (Jacobi polynomials at complex
// argument), sampled on the grid with the overall constant real positive.
BoundStateResult levai_analytic_states(const Levai& p, const Grid& grid, int n_states);

WaveFunction normalize(const WaveFunction& wf);

// PeakPositive: rotate so psi at argmax|psi| is real positive.
// SymmetryAdapted: rotate so Re psi is parity-definite about the grid center
// (theta-grid of 1e4 plus golden-section refinement); requires |psi| symmetric
// about the center.
// Raw: multiply by exp(i theta).
WaveFunction fix_phase(const WaveFunction& wf, const PhaseSpec& phase);

// sup-norm of -psi'' + (V - E) psi over interior nodes (5-point second
// difference), normalized by max|psi|. Nodes within 3h of a potential
// discontinuity are excluded.
double solver_residual(const PotentialSpec& spec, const WaveFunction& wf);

}  // namespace interlace
