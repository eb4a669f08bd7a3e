#include <doctest.h>

#include <cmath>

#include "interlace/analysis.hpp"
#include "interlace/solver.hpp"

using namespace interlace;

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

PotentialSpec free_particle() { return SquareWell(0.0, 0.0, 0.0, 0.0, 0.0); }

// Closed-form single bound state of the complex Poschl-Teller well.
WaveFunction exact_pt_state(double kappa, const Grid& g) {
  WaveFunction wf;
  wf.grid = g;
  wf.energy = -0.25 * kappa * kappa;
  wf.psi.resize(g.n_points);
  wf.dpsi.resize(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    double x = g.x(i);
    double phi = std::atan(std::tanh(0.5 * kappa * x));
    double amp = std::sqrt(kappa / kPi / std::cosh(kappa * x));
    wf.psi[i] = amp * std::exp(cplx{0.0, phi});
    double dphi = 0.5 * kappa / std::cosh(kappa * x);
    double damp_over_amp = -0.5 * kappa * std::tanh(kappa * x);
    wf.dpsi[i] = wf.psi[i] * cplx{damp_over_amp, dphi};
  }
  wf.normalized = true;
  return wf;
}

}  // namespace

TEST_CASE("free-particle plane wave over [0, pi]") {
  // psi = e^{ix} with psi(0) = 1, psi'(0) = i lands on (e^{i pi}, i e^{i pi})
  auto [psi, dpsi] = integrate(free_particle(), 1.0, 0.0, kPi, 1.0, kI, 1e-3);
  CHECK(std::abs(psi - std::exp(kI * kPi)) < 1e-8);
  CHECK(std::abs(dpsi - kI * std::exp(kI * kPi)) < 1e-8);
}

TEST_CASE("integration is linear in the initial data") {
  PotentialSpec spec = PoschlTeller(2.0);
  cplx c{0.7, -1.3};
  auto [p1, d1] = integrate(spec, -1.0, -2.0, 2.0, 1.0, cplx{0.2, 0.4}, 1e-3);
  auto [p2, d2] = integrate(spec, -1.0, -2.0, 2.0, c, c * cplx{0.2, 0.4}, 1e-3);
  CHECK(std::abs(p2 - c * p1) / std::abs(c * p1) < 1e-10);
  CHECK(std::abs(d2 - c * d1) / std::abs(c * d1) < 1e-10);
}

TEST_CASE("fourth-order convergence on the free particle") {
  // a sampled all-zero potential exercises the RK4 path; the step is kept
  // large enough that the error sits well above roundoff
  Sampled zero;
  zero.grid = Grid(-1.0, kPi + 1.0, 101);
  zero.values.assign(101, cplx{0.0, 0.0});
  PotentialSpec spec = zero;
  auto endpoint_error = [&](double h) {
    auto [psi, dpsi] = integrate(spec, 1.0, 0.0, kPi, 1.0, kI, h);
    (void)dpsi;
    return std::abs(psi - std::exp(kI * kPi));
  };
  double ratio = endpoint_error(0.02) / endpoint_error(0.01);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("integrating the exact Poschl-Teller state across the well") {
  double kappa = 2.0;
  Grid g(-8.0, 8.0, 3);
  WaveFunction ends = exact_pt_state(kappa, g);
  auto [psi, dpsi] = integrate(PoschlTeller(kappa), -1.0, -8.0, 8.0, ends.psi[0], ends.dpsi[0],
                               1e-3);
  CHECK(std::abs(psi - ends.psi[2]) < 1e-6);
  CHECK(std::abs(dpsi - ends.dpsi[2]) < 1e-6);
}

TEST_CASE("trajectory sampling agrees with endpoint integration") {
  PotentialSpec spec = PoschlTeller(2.0);
  std::vector<double> nodes = {-1.5, -0.5, 0.25, 1.0};
  std::vector<cplx> psi, dpsi;
  auto [pe, de] = integrate(spec, -1.0, -2.0, 1.0, 1.0, cplx{0.1, 0.3}, 1e-3, &psi, &dpsi, &nodes);
  REQUIRE(psi.size() == nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    auto [p, d] = integrate(spec, -1.0, -2.0, nodes[i], 1.0, cplx{0.1, 0.3}, 1e-3);
    CHECK(std::abs(p - psi[i]) < 1e-10);
    CHECK(std::abs(d - dpsi[i]) < 1e-10);
  }
  auto [p_end, d_end] = integrate(spec, -1.0, -2.0, 1.0, 1.0, cplx{0.1, 0.3}, 1e-3);
  CHECK(std::abs(pe - p_end) < 1e-9);
  CHECK(std::abs(de - d_end) < 1e-9);
}

TEST_CASE("integration overflow guard") {
  // deep tunneling from a tiny seed across a steep barrier blows past 1e250
  PotentialSpec spec = CubicOscillator{};
  CHECK_THROWS_AS(integrate(spec, 0.0, -40.0, 0.0, 1e200, 1e200, 1e-3), MagnitudeOverflow);
}

TEST_CASE("transfer matrix of an empty well is the identity") {
  PotentialSpec spec = SquareWell(1.0, 1.5, 0.0, 0.0, 0.0);
  for (cplx k : {cplx{1.3, 0.0}, cplx{0.4, 0.7}, cplx{0.0, 2.0}}) {
    TransferMatrix m = transfer_matrix(spec, k);
    CHECK(std::abs(m.m11 - 1.0) < 1e-9);
    CHECK(std::abs(m.m22 - 1.0) < 1e-9);
    CHECK(std::abs(m.m12) < 1e-9);
    CHECK(std::abs(m.m21) < 1e-9);
  }
  CHECK_THROWS_AS(transfer_matrix(spec, cplx{0.0, 0.0}), std::domain_error);
}

TEST_CASE("transfer matrix is unimodular for complex wells") {
  // moderate |Im k| so the cancellation in the determinant stays resolvable
  PotentialSpec sq = SquareWell(3.0, 4.2762, -1.0, -0.2, 0.1);
  PotentialSpec sin_well = SinusoidalWell(30.0, 0.49);
  for (cplx k : {cplx{1.3, 0.0}, cplx{0.1, 0.9}, cplx{0.0, 0.5}}) {
    CHECK(std::abs(transfer_matrix(sq, k).det() - 1.0) < 1e-8);
    CHECK(std::abs(transfer_matrix(sin_well, k).det() - 1.0) < 1e-8);
  }
}

TEST_CASE("transfer bound energies are step-size independent") {
  // the sinusoidal zone is integrated numerically; the located m11 root must
  // not move once h <= 1e-3
  PotentialSpec spec = SinusoidalWell(30.0, 0.49);
  auto root_near = [&](double h) {
    cplx k{0.0, 3.5};
    for (int it = 0; it < 50; ++it) {
      cplx f = transfer_matrix(spec, k, h).m11;
      if (std::abs(f) < 1e-12) break;
      cplx d = (transfer_matrix(spec, k + 1e-6, h).m11 - transfer_matrix(spec, k - 1e-6, h).m11) /
               2e-6;
      k -= f / d;
    }
    return 30.0 + (k * k).real();
  };
  double e_coarse = root_near(1e-3);
  double e_fine = root_near(5e-4);
  CHECK(std::abs(e_coarse - e_fine) < 1e-6);

  // at the bound energy the element vanishes, and its real part flips sign
  // when crossing the root along the imaginary axis
  double q = std::sqrt(30.0 - e_coarse);
  CHECK(std::abs(transfer_matrix(spec, cplx{0.0, q}).m11) < 1e-6);
  double below = transfer_matrix(spec, cplx{0.0, q - 0.05}).m11.real();
  double above = transfer_matrix(spec, cplx{0.0, q + 0.05}).m11.real();
  CHECK(below * above < 0.0);
}

TEST_CASE("square well has exactly one bound state at the reference b") {
  PotentialSpec spec = SquareWell(3.0, 4.2762, -1.0, -0.2, 0.1);
  KRegion region{-0.3, 0.3, 0.02, 1.05, 21, 61};
  auto res = find_bound_states_shortrange(spec, region, {});
  REQUIRE(res.energies.size() == 1);
  CHECK(res.energies[0] < 0.0);
  CHECK(res.energies[0] > -1.0);
  CHECK(res.residuals[0] < 1e-4);
  // at the root the reflected-to-transmitted conversion element vanishes
  cplx k{0.0, std::sqrt(-res.energies[0])};
  CHECK(std::abs(transfer_matrix(spec, k).m11) < 1e-6);
  // reconstructed tails decay below 1e-6 of the peak
  const WaveFunction& wf = res.states[0];
  double m = wf.max_abs();
  CHECK(std::abs(wf.psi.front()) < 1e-6 * m);
  CHECK(std::abs(wf.psi.back()) < 1e-6 * m);
}

TEST_CASE("empty k-region reports no roots without failing") {
  PotentialSpec spec = SquareWell(1.0, 1.0, 0.0, 0.0, 0.0);
  KRegion region{-0.2, 0.2, 0.3, 0.9, 9, 17};
  auto res = find_bound_states_shortrange(spec, region, {});
  CHECK(res.energies.empty());
  CHECK(res.states.empty());
}

TEST_CASE("shooting solver reproduces the Poschl-Teller ground state") {
  PotentialSpec spec = PoschlTeller(2.0);
  auto res = find_bound_states_confining(spec, {-3.0, -0.05}, 10.0, 200, {});
  REQUIRE(res.energies.size() == 1);
  CHECK(std::abs(res.energies[0] + 1.0) < 1e-6);
  CHECK(res.residuals[0] < 1e-4);
}

TEST_CASE("shooting rejects windows reaching the continuum") {
  PotentialSpec spec = PoschlTeller(2.0);
  CHECK_THROWS_AS(find_bound_states_confining(spec, {-0.5, 0.5}, 10.0, 50, {}),
                  std::invalid_argument);
}

TEST_CASE("levai analytic states satisfy the eigenvalue equation") {
  Levai p{};
  Grid g(-30.0, 30.0, 24001);
  auto res = levai_analytic_states(p, g, 5);
  REQUIRE(res.energies.size() == 5);
  for (int n = 0; n < 5; ++n) {
    double expect = -std::pow(n - 4.5, 2.0);
    CHECK(std::abs(res.energies[n] - expect) < 1e-9);
    CHECK(residual_oracle(PotentialSpec{p}, res.states[n], res.energies[n]) < 1e-6);
  }
}

TEST_CASE("normalize scales to unit probability") {
  Grid g(-12.0, 12.0, 12001);
  WaveFunction wf = exact_pt_state(2.0, g);
  // the closed form already carries unit norm
  std::vector<double> rho(g.n_points);
  for (int i = 0; i < g.n_points; ++i) rho[i] = std::norm(wf.psi[i]);
  CHECK(std::abs(simpson(rho, g.spacing()) - 1.0) < 1e-8);

  WaveFunction doubled = wf;
  for (auto& v : doubled.psi) v *= 2.0;
  for (auto& v : doubled.dpsi) v *= 2.0;
  WaveFunction back = normalize(doubled);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i) worst = std::max(worst, std::abs(back.psi[i] - wf.psi[i]));
  CHECK(worst < 1e-8);

  WaveFunction zero = wf;
  for (auto& v : zero.psi) v = 0.0;
  CHECK_THROWS_AS(normalize(zero), std::domain_error);
}

TEST_CASE("phase rules") {
  Grid g(-12.0, 12.0, 12001);
  WaveFunction wf = exact_pt_state(2.0, g);

  SUBCASE("raw zero is the identity") {
    WaveFunction r = fix_phase(wf, {PhaseRule::Raw, 0.0});
    CHECK(r.psi[100] == wf.psi[100]);
  }
  SUBCASE("peak-positive is idempotent") {
    WaveFunction once = fix_phase(wf, {PhaseRule::PeakPositive, 0.0});
    WaveFunction twice = fix_phase(once, {PhaseRule::PeakPositive, 0.0});
    double worst = 0.0;
    for (int i = 0; i < g.n_points; ++i)
      worst = std::max(worst, std::abs(once.psi[i] - twice.psi[i]));
    CHECK(worst < 1e-12);
    int peak = g.index_near(0.0);
    CHECK(once.psi[peak].imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(once.psi[peak].real() > 0.0);
  }
  SUBCASE("symmetry-adapted is idempotent and parity-definite") {
    WaveFunction once = fix_phase(wf, {PhaseRule::SymmetryAdapted, 0.0});
    WaveFunction twice = fix_phase(once, {PhaseRule::SymmetryAdapted, 0.0});
    double worst = 0.0, asym = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
      worst = std::max(worst, std::abs(once.psi[i] - twice.psi[i]));
      int j = g.n_points - 1 - i;
      asym = std::max(asym, std::abs(once.psi[i].real() - once.psi[j].real()));
      asym = std::max(asym, std::abs(once.psi[i].imag() + once.psi[j].imag()));
    }
    CHECK(worst < 5e-8);
    CHECK(asym < 1e-8);
  }
  SUBCASE("symmetry-adapted rejects asymmetric states") {
    WaveFunction skew = wf;
    for (int i = 0; i < g.n_points; ++i) skew.psi[i] *= std::exp(0.2 * g.x(i));
    CHECK_THROWS_AS(fix_phase(skew, {PhaseRule::SymmetryAdapted, 0.0}), std::invalid_argument);
  }
}
