#include <doctest.h>

#include <cmath>

#include "interlace/analysis.hpp"
#include "interlace/darboux.hpp"

using namespace interlace;

namespace {

Grid darboux_grid() { return Grid(-10.0, 10.0, 20001); }

// Families used throughout: the parity-symmetric (2, 0, 1.7) set and the
// asymmetric (1.2, 1, 0.02) set.
ErmakovAlpha alpha_pt() {
  return ermakov_alpha(OscillatorSeed{}, 1.7, 2.0, 0.0, darboux_grid());
}
ErmakovAlpha alpha_skew() {
  return ermakov_alpha(OscillatorSeed{}, 0.02, 1.2, 1.0, darboux_grid());
}

}  // namespace

TEST_CASE("oscillator seed states") {
  Grid g(-10.0, 10.0, 10001);
  SeedState s0 = seed_oscillator_state(0, g);
  CHECK(s0.energy == doctest::Approx(1.0));
  CHECK(s0.phi[g.index_near(0.0)] == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-12));

  // zeros of the n = 3 state sit at 0 and +-sqrt(3/2)
  SeedState s3 = seed_oscillator_state(3, g);
  ZeroScan z = find_zeros(g, s3.phi, &s3.dphi);
  REQUIRE(z.zeros.size() == 3);
  CHECK(z.zeros[0] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-8));
  CHECK(std::abs(z.zeros[1]) < 1e-9);
  CHECK(z.zeros[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-8));

  // unit norm and the exact zero count up to n = 12
  for (int n : {0, 1, 2, 5, 12}) {
    SeedState s = seed_oscillator_state(n, g);
    std::vector<double> rho(g.n_points);
    for (int i = 0; i < g.n_points; ++i) rho[i] = s.phi[i] * s.phi[i];
    CHECK(std::abs(simpson(rho, g.spacing()) - 1.0) < 1e-10);
    CHECK(static_cast<int>(find_zeros(g, s.phi, &s.dphi).zeros.size()) == n);
  }
  CHECK_THROWS_AS(seed_oscillator_state(31, g), std::invalid_argument);
  CHECK_THROWS_AS(seed_oscillator_state(-1, g), std::invalid_argument);
}

TEST_CASE("ermakov alpha from the closed form") {
  ErmakovAlpha a = alpha_pt();
  int i0 = a.grid.index_near(0.0);
  CHECK(a.alpha[i0] == doctest::Approx(std::sqrt(0.85)).epsilon(1e-12));
  CHECK(std::abs(a.dalpha[i0]) < 1e-10);  // even radicand
  CHECK(a.pinney == doctest::Approx(1.7).epsilon(1e-12));

  // alpha solves alpha'' = (x^2 + 1) alpha + pinney / alpha^3, checked by
  // five-point second differences relative to the local magnitude
  double worst = 0.0;
  double h = a.grid.spacing();
  for (int i = 2; i + 2 < a.grid.n_points; i += 7) {
    double x = a.grid.x(i);
    if (std::abs(x) > 4.0) continue;
    double dd = (-a.alpha[i - 2] + 16.0 * a.alpha[i - 1] - 30.0 * a.alpha[i] +
                 16.0 * a.alpha[i + 1] - a.alpha[i + 2]) /
                (12.0 * h * h);
    double rhs = (x * x + 1.0) * a.alpha[i] + a.pinney / std::pow(a.alpha[i], 3.0);
    worst = std::max(worst, std::abs(dd - rhs) / std::max(1.0, std::abs(rhs)));
  }
  CHECK(worst < 1e-7);

  // inadmissible parameters are rejected with a diagnostic
  CHECK_THROWS_AS(ermakov_alpha(OscillatorSeed{}, -0.02, 1.2, 1.0, darboux_grid()),
                  std::domain_error);
}

TEST_CASE("closed form agrees with the integrated general route") {
  Grid g(-8.0, 8.0, 16001);
  for (CoefficientForm form : {CoefficientForm::Quadratic, CoefficientForm::Linear}) {
    ErmakovAlpha closed = ermakov_alpha(OscillatorSeed{}, 1.7, 2.0, 0.0, g, form);
    ErmakovAlpha general = ermakov_alpha_general(OscillatorSeed{}, 1.7, 2.0, 0.0, g, form);
    CHECK(general.pinney == doctest::Approx(closed.pinney).epsilon(1e-12));
    double worst = 0.0;
    for (int i = 0; i < g.n_points; ++i)
      worst = std::max(worst, std::abs(closed.alpha[i] - general.alpha[i]) /
                                  std::max(1.0, closed.alpha[i]));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("superpotential satisfies the Riccati equation") {
  for (const ErmakovAlpha& a : {alpha_pt(), alpha_skew()}) {
    Superpotential b = superpotential(a);
    int i0 = a.grid.index_near(0.0);
    if (a.c1 == 0.0) {
      CHECK(std::abs(b.beta[i0].real()) < 1e-10);
      // Im beta(0) = sqrt(pinney)/alpha(0)^2 = sqrt(1.7)/0.85
      CHECK(b.beta[i0].imag() == doctest::Approx(std::sqrt(1.7) / 0.85).epsilon(1e-10));
    }
    // residual of -beta' + beta^2 - (x^2 - e0) with beta' from five-point
    // differences of the sampled beta
    double h = a.grid.spacing();
    double worst = 0.0;
    for (int i = 2; i + 2 < a.grid.n_points; i += 3) {
      double x = a.grid.x(i);
      cplx db = (b.beta[i - 2] - 8.0 * b.beta[i - 1] + 8.0 * b.beta[i + 1] - b.beta[i + 2]) /
                (12.0 * h);
      cplx r = -db + b.beta[i] * b.beta[i] - (x * x - a.e0);
      worst = std::max(worst, std::abs(r));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("lambda = 0 reduces to a real partner") {
  // with the deformation off the radicand must still stay positive, which
  // needs |c1| > sqrt(pi) c0 / 2
  Grid g(-8.0, 8.0, 16001);
  ErmakovAlpha a = ermakov_alpha(OscillatorSeed{}, 0.0, 0.5, 1.0, g);
  CHECK(a.lambda_s == 0.0);
  Superpotential b = superpotential(a);
  double worst = 0.0;
  for (const auto& v : b.beta) worst = std::max(worst, std::abs(v.imag()));
  CHECK(worst < 1e-14);

  PotentialSpec v = darboux_potential(a);
  for (double x : {-3.0, -1.0, 0.0, 0.5, 2.0})
    CHECK(std::abs(eval_potential(v, x).imag()) < 1e-14);

  // psi_0 ~ 1/alpha: real, nodeless
  WaveFunction psi0 = missing_state(b);
  double worst_im = 0.0, min_re = 1e300;
  for (int i = 0; i < g.n_points; ++i) {
    worst_im = std::max(worst_im, std::abs(psi0.psi[i].imag()));
    min_re = std::min(min_re, psi0.psi[i].real());
  }
  CHECK(worst_im < 1e-12);
  CHECK(min_re > 0.0);
  int ic = g.index_near(0.0);
  CHECK(psi0.psi[ic].real() * a.alpha[ic] ==
        doctest::Approx(psi0.psi[ic + 500].real() * a.alpha[ic + 500]).epsilon(1e-8));

  // partner states of the undeformed family are real as well
  WaveFunction p1 = partner_state(seed_oscillator_state(0, g), b);
  double worst_p = 0.0;
  for (const auto& z : p1.psi) worst_p = std::max(worst_p, std::abs(z.imag()));
  CHECK(worst_p < 1e-12);
}

TEST_CASE("generated potential properties") {
  ErmakovAlpha apt = alpha_pt();
  PotentialSpec vpt = darboux_potential(apt);
  CHECK(std::holds_alternative<DarbouxOscillator>(vpt));

  // zeros of alpha' are zeros of V_I
  ZeroScan zc = find_zeros(apt.grid, apt.dalpha);
  REQUIRE(zc.zeros.size() == 1);
  CHECK(std::abs(eval_potential(vpt, zc.zeros[0]).imag()) < 1e-9);

  CHECK(pt_check(vpt, apt.grid, 1e-9));
  AreaResult area = zero_total_area(vpt, apt.grid);
  CHECK(area.convergent);
  CHECK(std::abs(area.value) < 1e-8);

  ErmakovAlpha ask = alpha_skew();
  PotentialSpec vsk = darboux_potential(ask);
  CHECK_FALSE(pt_check(vsk, ask.grid, 1e-9));
  CHECK(std::abs(zero_total_area(vsk, ask.grid).value) < 1e-8);
}

TEST_CASE("partner and missing states reproduce the reference zero structure") {
  ErmakovAlpha a = alpha_pt();
  Superpotential b = superpotential(a);
  PotentialSpec v = darboux_potential(a);

  WaveFunction psi0 = missing_state(b);
  CHECK(psi0.energy == doctest::Approx(-1.0));
  ZeroReport r0 = zero_report(fix_phase(psi0, {PhaseRule::PeakPositive, 0.0}));
  CHECK(r0.n_r == 0);
  REQUIRE(r0.n_i == 1);
  CHECK(std::abs(r0.mus[0]) < 1e-6);
  CHECK(residual_oracle(v, psi0, -1.0) < 1e-5);

  // symmetry-adapted phase makes Re even and Im odd for this family
  WaveFunction sym0 = fix_phase(psi0, {PhaseRule::SymmetryAdapted, 0.0});
  double worst_even = 0.0, worst_odd = 0.0;
  for (int i = 0; i < a.grid.n_points; ++i) {
    int j = a.grid.n_points - 1 - i;
    worst_even = std::max(worst_even, std::abs(sym0.psi[i].real() - sym0.psi[j].real()));
    worst_odd = std::max(worst_odd, std::abs(sym0.psi[i].imag() + sym0.psi[j].imag()));
  }
  CHECK(worst_even < 1e-8);
  CHECK(worst_odd < 1e-8);
  ZeroReport rs = zero_report(sym0);
  CHECK(rs.n_r == 0);
  REQUIRE(rs.n_i == 1);
  CHECK(std::abs(rs.mus[0]) < 1e-6);

  WaveFunction psi1 = partner_state(seed_oscillator_state(0, a.grid), b);
  CHECK(psi1.energy == doctest::Approx(1.0));
  ZeroReport r1 = zero_report(psi1);
  CHECK(r1.n_r == 1);
  CHECK(r1.n_i == 0);
  CHECK(std::abs(r1.lambdas[0]) < 1e-9);

  WaveFunction psi3 = partner_state(seed_oscillator_state(2, a.grid), b);
  ZeroReport r3 = zero_report(psi3);
  REQUIRE(r3.n_r == 3);
  REQUIRE(r3.n_i == 2);
  CHECK(r3.lambdas[0] == doctest::Approx(-1.195).epsilon(5e-3));
  CHECK(std::abs(r3.lambdas[1]) < 1e-9);
  CHECK(r3.lambdas[2] == doctest::Approx(1.195).epsilon(5e-3));
  CHECK(r3.mus[0] == doctest::Approx(-0.707).epsilon(5e-3));
  CHECK(r3.mus[1] == doctest::Approx(0.707).epsilon(5e-3));
}

TEST_CASE("exact zero counts and interlacing for the first six partner states") {
  for (bool skew : {false, true}) {
    ErmakovAlpha a = skew ? alpha_skew() : alpha_pt();
    Superpotential b = superpotential(a);
    PotentialSpec v = darboux_potential(a);
    for (int n = 0; n <= 5; ++n) {
      WaveFunction psi = partner_state(seed_oscillator_state(n, a.grid), b);
      CHECK(psi.energy == doctest::Approx(2.0 * n + 1.0));
      ZeroReport r = zero_report(psi);
      CHECK(r.n_r == n + 1);
      CHECK(r.n_i == n);
      CHECK(r.interlaced);
      CHECK(residual_oracle(v, psi, psi.energy) < 1e-5);
    }
  }
}

TEST_CASE("sampled seeds route through the integrated construction") {
  Grid g(-8.0, 8.0, 16001);
  SampledSeed seed;
  seed.grid = g;
  seed.e0 = -1.0;
  seed.theta.resize(g.n_points);
  for (int i = 0; i < g.n_points; ++i) seed.theta[i] = g.x(i) * g.x(i);
  ErmakovAlpha sampled = ermakov_alpha(SeedSpec{seed}, 1.7, 2.0, 0.0, g);
  ErmakovAlpha closed = ermakov_alpha(OscillatorSeed{}, 1.7, 2.0, 0.0, g);
  CHECK_FALSE(sampled.oscillator_closed_form);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst,
                     std::abs(sampled.alpha[i] - closed.alpha[i]) / std::max(1.0, closed.alpha[i]));
  CHECK(worst < 1e-5);
  // the generated potential comes back as samples
  PotentialSpec v = darboux_potential(sampled);
  CHECK(std::holds_alternative<Sampled>(v));
  PotentialSpec v_closed = darboux_potential(closed);
  for (double x : {-2.0, -0.5, 0.0, 1.3})
    CHECK(std::abs(eval_potential(v, x) - eval_potential(v_closed, x)) < 1e-4);
}

TEST_CASE("missing state rejects non-normalizable integrands") {
  // a positive-lambda family integrated on a grid too narrow for tail decay
  Grid g(-1.0, 1.0, 2001);
  ErmakovAlpha a = ermakov_alpha(OscillatorSeed{}, 1.7, 2.0, 0.0, g);
  Superpotential b = superpotential(a);
  CHECK_THROWS_AS(missing_state(b), std::domain_error);
}
