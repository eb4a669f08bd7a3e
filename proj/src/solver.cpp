#include "interlace/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace interlace {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kOverflowLimit = 1e250;
const cplx kI{0.0, 1.0};

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (t == 1 || n < 4) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err = nullptr;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

struct State2 {
  cplx psi, dpsi;
};

// One classical RK4 step of (psi, psi')' = (psi', (V - E) psi).
State2 rk4_step(const PotentialSpec& spec, cplx energy, double x, double h, State2 y) {
  auto f = [&](double xx, State2 s) -> State2 {
    return {s.dpsi, (eval_potential(spec, xx) - energy) * s.psi};
  };
  State2 k1 = f(x, y);
  State2 k2 = f(x + 0.5 * h, {y.psi + 0.5 * h * k1.psi, y.dpsi + 0.5 * h * k1.dpsi});
  State2 k3 = f(x + 0.5 * h, {y.psi + 0.5 * h * k2.psi, y.dpsi + 0.5 * h * k2.dpsi});
  State2 k4 = f(x + h, {y.psi + h * k3.psi, y.dpsi + h * k3.dpsi});
  return {y.psi + h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi),
          y.dpsi + h / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi)};
}

struct Mat2 {
  cplx a11, a12, a21, a22;
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  State2 apply(const State2& s) const {
    return {a11 * s.psi + a12 * s.dpsi, a21 * s.psi + a22 * s.dpsi};
  }
};

cplx sinc_c(cplx z) {
  if (std::abs(z) < 1e-5) {
    cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Exact propagator over a signed interval of constant potential.
Mat2 const_potential_step(cplx v, cplx energy, double length) {
  cplx w2 = energy - v;
  cplx w = std::sqrt(w2);
  cplx z = w * length;
  cplx c = std::cos(z);
  cplx s = sinc_c(z) * length;  // sin(wL)/w
  return {c, s, -w2 * s, c};
}

// Exact step across piecewise-constant potentials, splitting at jumps.
State2 piecewise_const_step(const PotentialSpec& spec, const std::vector<double>& breaks,
                            cplx energy, double x0, double x1, State2 y) {
  double dir = (x1 >= x0) ? 1.0 : -1.0;
  std::vector<double> cuts;
  for (double b : breaks) {
    if ((b - x0) * dir > 1e-15 && (x1 - b) * dir > 1e-15) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  if (dir < 0) std::reverse(cuts.begin(), cuts.end());
  double xa = x0;
  for (double b : cuts) {
    cplx v = eval_potential(spec, 0.5 * (xa + b));
    y = const_potential_step(v, energy, b - xa).apply(y);
    xa = b;
  }
  cplx v = eval_potential(spec, 0.5 * (xa + x1));
  return const_potential_step(v, energy, x1 - xa).apply(y);
}

bool piecewise_constant(const PotentialSpec& spec) {
  return std::holds_alternative<SquareWell>(spec);
}

// Advance (psi, psi') from x0 to x1, exact for piecewise-constant specs and
// RK4 with step <= h otherwise.
State2 advance(const PotentialSpec& spec, const std::vector<double>& breaks, cplx energy,
               double x0, double x1, State2 y, double h) {
  if (x0 == x1) return y;
  if (piecewise_constant(spec)) return piecewise_const_step(spec, breaks, energy, x0, x1, y);
  double span = x1 - x0;
  int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / h)));
  double hs = span / n;
  for (int i = 0; i < n; ++i) {
    y = rk4_step(spec, energy, x0 + i * hs, hs, y);
    if (std::abs(y.psi) > kOverflowLimit) throw MagnitudeOverflow(x0 + (i + 1) * hs);
  }
  return y;
}

// Interaction zone and exterior reference potential of a short-range spec.
struct Zone {
  double x_left, x_right;
  cplx v_out;
};

Zone short_range_zone(const PotentialSpec& spec) {
  if (const auto* w = std::get_if<SquareWell>(&spec)) return {-w->a, w->b, cplx{0.0, 0.0}};
  if (const auto* s = std::get_if<SinusoidalWell>(&spec)) return {0.0, kPi, cplx{s->w0, 0.0}};
  throw std::invalid_argument("transfer method requires a short-range potential");
}

Mat2 plane_wave_basis(double x, cplx k) {
  cplx ep = std::exp(kI * k * x), em = std::exp(-kI * k * x);
  return {ep, em, kI * k * ep, -kI * k * em};
}

Mat2 plane_wave_basis_inv(double x, cplx k) {
  cplx ep = std::exp(kI * k * x), em = std::exp(-kI * k * x);
  cplx half{0.5, 0.0};
  return {em * half, em / (2.0 * kI * k), ep * half, -ep / (2.0 * kI * k)};
}

}  // namespace

double WaveFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : psi) m = std::max(m, std::abs(v));
  return m;
}

std::pair<cplx, cplx> integrate(const PotentialSpec& spec, cplx energy, double from_x,
                                double to_x, cplx psi0, cplx dpsi0, double h,
                                std::vector<cplx>* psi_out, std::vector<cplx>* dpsi_out,
                                const std::vector<double>* nodes) {
  if (!(h > 0.0)) throw std::invalid_argument("integrate: h must be > 0");
  const std::vector<double> breaks = discontinuities(spec);
  State2 y{psi0, dpsi0};
  if (nodes && psi_out) {
    psi_out->clear();
    if (dpsi_out) dpsi_out->clear();
    double x = from_x;
    for (double xn : *nodes) {
      y = advance(spec, breaks, energy, x, xn, y, h);
      x = xn;
      psi_out->push_back(y.psi);
      if (dpsi_out) dpsi_out->push_back(y.dpsi);
    }
    y = advance(spec, breaks, energy, x, to_x, y, h);
  } else {
    y = advance(spec, breaks, energy, from_x, to_x, y, h);
  }
  return {y.psi, y.dpsi};
}

TransferMatrix transfer_matrix(const PotentialSpec& spec, cplx k, double h) {
  if (std::abs(k) < 1e-12)
    throw std::domain_error("transfer_matrix: plane-wave conversion singular at k = 0");
  Zone z = short_range_zone(spec);
  cplx energy = z.v_out + k * k;
  const std::vector<double> breaks = discontinuities(spec);
  // Columns of the fundamental solution at x_left propagated from x_right.
  State2 c1 = advance(spec, breaks, energy, z.x_right, z.x_left, {1.0, 0.0}, h);
  State2 c2 = advance(spec, breaks, energy, z.x_right, z.x_left, {0.0, 1.0}, h);
  Mat2 phi{c1.psi, c2.psi, c1.dpsi, c2.dpsi};
  Mat2 m = plane_wave_basis_inv(z.x_left, k) * (phi * plane_wave_basis(z.x_right, k));
  return {m.a11, m.a12, m.a21, m.a22, k};
}

namespace {

// Bound-state reconstruction for a short-range spec at exterior wavenumber k:
// analytic decaying tails outside the zone, numerical integration inside,
// launched from the left tail with a real unit amplitude.
WaveFunction reconstruct_shortrange(const PotentialSpec& spec, cplx k, double energy,
                                    const SolverOptions& opts) {
  Zone z = short_range_zone(spec);
  double q = k.imag();
  double pad = std::clamp(14.5 / std::max(q, 0.05), 4.0, 120.0);
  double x_lo = z.x_left - pad, x_hi = z.x_right + pad;
  int n = opts.output_points >= 3
              ? opts.output_points
              : static_cast<int>(std::ceil((x_hi - x_lo) / 2e-3)) + 1;
  n = std::clamp(n, 2001, 160001);
  Grid grid(x_lo, x_hi, n);

  WaveFunction wf;
  wf.grid = grid;
  wf.energy = energy;
  wf.psi.resize(n);
  wf.dpsi.resize(n);
  const std::vector<double> breaks = discontinuities(spec);
  const cplx e{energy, 0.0};

  // Left tail: psi = exp(-i k (x - x_left)), real at the zone edge.
  State2 y{1.0, -kI * k};
  int i = 0;
  for (; i < n && grid.x(i) <= z.x_left; ++i) {
    cplx tail = std::exp(-kI * k * (grid.x(i) - z.x_left));
    wf.psi[i] = tail;
    wf.dpsi[i] = -kI * k * tail;
  }
  // Interaction zone.
  double x_prev = z.x_left;
  for (; i < n && grid.x(i) < z.x_right; ++i) {
    y = advance(spec, breaks, e, x_prev, grid.x(i), y, opts.h);
    x_prev = grid.x(i);
    wf.psi[i] = y.psi;
    wf.dpsi[i] = y.dpsi;
  }
  y = advance(spec, breaks, e, x_prev, z.x_right, y, opts.h);
  // Right tail: pure decaying exponential matched at the zone edge.
  for (; i < n; ++i) {
    cplx tail = y.psi * std::exp(kI * k * (grid.x(i) - z.x_right));
    wf.psi[i] = tail;
    wf.dpsi[i] = kI * k * tail;
  }
  return normalize(wf);
}

struct MeshPoint {
  cplx k;
  double value;
};

}  // namespace

BoundStateResult find_bound_states_shortrange(const PotentialSpec& spec, const KRegion& region,
                                              const SolverOptions& opts) {
  Zone z = short_range_zone(spec);
  BoundStateResult out;
  out.method = SolveMethod::Transfer;

  const int nr = region.n_re, ni = region.n_im;
  std::vector<double> mesh(static_cast<size_t>(nr) * ni,
                           std::numeric_limits<double>::infinity());
  auto k_at = [&](int ir, int ii) {
    double re = region.re_min + (region.re_max - region.re_min) * ir / std::max(1, nr - 1);
    double im = region.im_min + (region.im_max - region.im_min) * ii / std::max(1, ni - 1);
    return cplx{re, im};
  };
  parallel_for(nr * ni, opts.threads, [&](int idx) {
    int ir = idx % nr, ii = idx / nr;
    try {
      mesh[idx] = std::abs(transfer_matrix(spec, k_at(ir, ii), opts.h).m11);
    } catch (const std::exception&) {
      mesh[idx] = std::numeric_limits<double>::infinity();
    }
  });

  // Local minima of |m11| seed the Newton iterations.
  std::vector<cplx> seeds;
  for (int ii = 0; ii < ni; ++ii) {
    for (int ir = 0; ir < nr; ++ir) {
      double v = mesh[ii * nr + ir];
      if (!std::isfinite(v)) continue;
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          int jr = ir + di, ji = ii + dj;
          if (jr < 0 || jr >= nr || ji < 0 || ji >= ni) continue;
          if (mesh[ji * nr + jr] < v) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) seeds.push_back(k_at(ir, ii));
    }
  }

  auto m11 = [&](cplx k) { return transfer_matrix(spec, k, opts.h).m11; };
  double re_span = region.re_max - region.re_min;
  double im_span = region.im_max - region.im_min;
  std::vector<cplx> roots;
  for (cplx seed : seeds) {
    cplx k = seed;
    bool converged = false;
    for (int it = 0; it < opts.newton_max_iter; ++it) {
      cplx f = m11(k);
      if (!std::isfinite(std::abs(f))) break;
      if (std::abs(f) < opts.newton_tol) {
        converged = true;
        break;
      }
      cplx d = (m11(k + opts.newton_step) - m11(k - opts.newton_step)) / (2.0 * opts.newton_step);
      if (!std::isfinite(std::abs(d)) || std::abs(d) < 1e-300) break;
      k -= f / d;
      if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) ||
          k.real() < region.re_min - 0.75 * re_span || k.real() > region.re_max + 0.75 * re_span ||
          k.imag() < region.im_min - 0.75 * im_span || k.imag() > region.im_max + 0.75 * im_span)
        break;  // wandered off; discard this seed
    }
    if (!converged) continue;
    if (k.imag() <= 1e-9) continue;  // decaying exteriors need Im k > 0
    // A real bound energy means k sits exactly on the imaginary axis; snap
    // residual real parts so the reconstructed tails carry a clean phase.
    if (std::abs(k.real()) < 1e-7 * (1.0 + std::abs(k.imag()))) k = cplx{0.0, k.imag()};
    bool dup = false;
    for (cplx r : roots) dup |= std::abs(r - k) < opts.dedupe_tol;
    if (!dup) roots.push_back(k);
  }

  struct Accepted {
    double e;
    cplx k;
  };
  std::vector<Accepted> accepted;
  for (cplx k : roots) {
    cplx energy = z.v_out + k * k;
    double im = std::abs(energy.imag());
    if (im >= opts.reality_warn) continue;
    if (im >= opts.reality_tol)
      out.warnings.push_back({energy.real(), "energy has imaginary residue above tolerance"});
    accepted.push_back({energy.real(), k});
  }
  std::sort(accepted.begin(), accepted.end(), [](auto& a, auto& b) { return a.e < b.e; });

  for (const auto& acc : accepted) {
    WaveFunction wf = reconstruct_shortrange(spec, acc.k, acc.e, opts);
    double res = solver_residual(spec, wf);
    if (res > opts.residual_tol) {
      out.warnings.push_back({acc.e, "state rejected: residual above tolerance"});
      continue;
    }
    out.energies.push_back(acc.e);
    out.states.push_back(std::move(wf));
    out.residuals.push_back(res);
  }
  return out;
}

namespace {

// Two-sided shooting matcher: decaying WKB data integrated inward from both
// truncation points, compared through the Wronskian at the matching point.
struct ShootingSetup {
  double x_trunc;
  double x_match;
  std::vector<double> breaks;
};

ShootingSetup make_setup(const PotentialSpec& spec, double x_trunc) {
  ShootingSetup s;
  s.x_trunc = x_trunc;
  s.breaks = discontinuities(spec);
  int n = 4001;
  double best = std::numeric_limits<double>::infinity();
  double xm = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = -x_trunc + 2.0 * x_trunc * i / (n - 1);
    double vr = eval_potential(spec, x).real();
    if (vr < best - 1e-14) {  // ties resolved toward smaller x
      best = vr;
      xm = x;
    }
  }
  s.x_match = xm;
  return s;
}

struct MatchValue {
  cplx mu;          // normalized Wronskian at the matching point
  State2 left, right;
};

MatchValue shoot_match(const PotentialSpec& spec, const ShootingSetup& setup, cplx energy,
                       double h) {
  cplx kl = std::sqrt(eval_potential(spec, -setup.x_trunc) - energy);
  cplx kr = std::sqrt(eval_potential(spec, setup.x_trunc) - energy);
  State2 yl = advance(spec, setup.breaks, energy, -setup.x_trunc, setup.x_match, {1.0, kl}, h);
  State2 yr = advance(spec, setup.breaks, energy, setup.x_trunc, setup.x_match, {1.0, -kr}, h);
  cplx w = yl.psi * yr.dpsi - yl.dpsi * yr.psi;
  double scale = std::abs(yl.psi) * std::abs(yr.dpsi) + std::abs(yl.dpsi) * std::abs(yr.psi);
  MatchValue mv;
  mv.mu = w / (scale + 1e-300);
  mv.left = yl;
  mv.right = yr;
  return mv;
}

WaveFunction reconstruct_confining(const PotentialSpec& spec, const ShootingSetup& setup,
                                   double energy, const SolverOptions& opts) {
  double x_lo = -setup.x_trunc, x_hi = setup.x_trunc;
  int n = opts.output_points >= 3
              ? opts.output_points
              : static_cast<int>(std::ceil((x_hi - x_lo) / 2e-3)) + 1;
  n = std::clamp(n, 2001, 160001);
  Grid grid(x_lo, x_hi, n);
  int i_match = grid.index_near(setup.x_match);

  WaveFunction wf;
  wf.grid = grid;
  wf.energy = energy;
  wf.psi.assign(n, 0.0);
  wf.dpsi.assign(n, 0.0);
  const cplx e{energy, 0.0};

  cplx kl = std::sqrt(eval_potential(spec, x_lo) - e);
  cplx kr = std::sqrt(eval_potential(spec, x_hi) - e);
  State2 y{1.0, kl};
  wf.psi[0] = y.psi;
  wf.dpsi[0] = y.dpsi;
  for (int i = 1; i <= i_match; ++i) {
    y = advance(spec, setup.breaks, e, grid.x(i - 1), grid.x(i), y, opts.h);
    wf.psi[i] = y.psi;
    wf.dpsi[i] = y.dpsi;
  }
  State2 left_at_match = y;

  y = {1.0, -kr};
  std::vector<cplx> rp(n), rd(n);
  rp[n - 1] = y.psi;
  rd[n - 1] = y.dpsi;
  for (int i = n - 2; i >= i_match; --i) {
    y = advance(spec, setup.breaks, e, grid.x(i + 1), grid.x(i), y, opts.h);
    rp[i] = y.psi;
    rd[i] = y.dpsi;
  }
  // Scale the right branch to agree with the left at the matching node; the
  // derivative mismatch there is of the order of the converged |mu|.
  cplx t = left_at_match.psi / rp[i_match];
  for (int i = i_match + 1; i < n; ++i) {
    wf.psi[i] = rp[i] * t;
    wf.dpsi[i] = rd[i] * t;
  }
  return normalize(wf);
}

}  // namespace

BoundStateResult find_bound_states_confining(const PotentialSpec& spec,
                                             const EnergyWindow& window, double x_trunc,
                                             int scan_points, const SolverOptions& opts) {
  if (!(window.lo < window.hi))
    throw std::invalid_argument("find_bound_states_confining: empty energy window");
  if (scan_points < 8) scan_points = 8;

  BoundStateResult out;
  out.method = SolveMethod::Shooting;

  double x_cur = x_trunc;
  for (int attempt = 0;; ++attempt) {
    out.energies.clear();
    out.states.clear();
    out.residuals.clear();
    out.warnings.clear();

    ShootingSetup setup = make_setup(spec, x_cur);
    // The window must stay below the potential at the truncation points.
    double v_edge = std::min(eval_potential(spec, -x_cur).real(),
                             eval_potential(spec, x_cur).real());
    if (window.hi >= v_edge)
      throw std::invalid_argument(
          "find_bound_states_confining: window reaches the potential value at the truncation "
          "points; decaying initial data undefined");

    std::vector<cplx> mu(scan_points);
    std::vector<double> es(scan_points);
    parallel_for(scan_points, opts.threads, [&](int j) {
      es[j] = window.lo + (window.hi - window.lo) * j / (scan_points - 1);
      try {
        mu[j] = shoot_match(spec, setup, es[j], opts.h).mu;
      } catch (const std::exception&) {
        mu[j] = cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
      }
    });

    std::vector<double> seeds;
    for (int j = 0; j < scan_points; ++j) {
      double v = std::abs(mu[j]);
      if (!std::isfinite(v)) continue;
      double vl = (j > 0) ? std::abs(mu[j - 1]) : std::numeric_limits<double>::infinity();
      double vr = (j + 1 < scan_points) ? std::abs(mu[j + 1])
                                        : std::numeric_limits<double>::infinity();
      if (v <= vl && v <= vr && (v < vl || v < vr)) seeds.push_back(es[j]);
      if (j + 1 < scan_points && std::isfinite(std::abs(mu[j + 1]))) {
        // phase flip of mu between neighbors indicates a crossing
        if ((mu[j] * std::conj(mu[j + 1])).real() < 0.0) seeds.push_back(0.5 * (es[j] + es[j + 1]));
      }
    }

    auto mu_of = [&](cplx energy) { return shoot_match(spec, setup, energy, opts.h).mu; };
    double de = (window.hi - window.lo) / (scan_points - 1);
    std::vector<cplx> roots;
    for (double seed : seeds) {
      cplx e0 = seed, e1 = seed + 0.1 * de;
      cplx f0 = mu_of(e0), f1 = mu_of(e1);
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        if (std::abs(f1) < 1e-12) {
          converged = true;
          break;
        }
        cplx denom = f1 - f0;
        if (std::abs(denom) < 1e-300) break;
        cplx e2 = e1 - f1 * (e1 - e0) / denom;
        if (!std::isfinite(e2.real()) || !std::isfinite(e2.imag())) break;
        double clamp = 0.5 * (window.hi - window.lo);
        if (std::abs(e2 - e1) > clamp) e2 = e1 + clamp * (e2 - e1) / std::abs(e2 - e1);
        e0 = e1;
        f0 = f1;
        e1 = e2;
        f1 = mu_of(e1);
        if (std::abs(e1 - e0) < 1e-13 * std::max(1.0, std::abs(e1)) && std::abs(f1) < 1e-8) {
          converged = true;
          break;
        }
      }
      if (!std::isfinite(std::abs(f1)) || !std::isfinite(e1.real())) continue;
      if (!converged && std::abs(f1) >= 1e-8) continue;
      if (e1.real() < window.lo - 1e-9 || e1.real() > window.hi + 1e-9) continue;
      double im = std::abs(e1.imag());
      if (im >= opts.reality_warn) continue;
      bool dup = false;
      for (cplx r : roots)
        dup |= std::abs(r.real() - e1.real()) < std::max(1e-7, 1e-9 * std::abs(e1.real()));
      if (dup) continue;
      roots.push_back(e1);
      if (im >= opts.reality_tol)
        out.warnings.push_back({e1.real(), "energy has imaginary residue above tolerance"});
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });

    bool decay_ok = true;
    for (cplx r : roots) {
      WaveFunction wf = reconstruct_confining(spec, setup, r.real(), opts);
      double m = wf.max_abs();
      double edge = std::max(std::abs(wf.psi.front()), std::abs(wf.psi.back()));
      if (edge > opts.boundary_decay * m) {
        decay_ok = false;
        break;
      }
      double res = solver_residual(spec, wf);
      if (res > opts.residual_tol) {
        out.warnings.push_back({r.real(), "state rejected: residual above tolerance"});
        continue;
      }
      out.energies.push_back(r.real());
      out.states.push_back(std::move(wf));
      out.residuals.push_back(res);
    }
    if (decay_ok) break;
    if (attempt >= 3)
      throw std::runtime_error(
          "find_bound_states_confining: truncation too small; boundary decay not reached");
    x_cur *= 2.0;
  }
  return out;
}

BoundStateResult levai_analytic_states(const Levai& p, const Grid& grid, int n_states) {
  BoundStateResult out;
  out.method = SolveMethod::Analytic;
  cplx spm = p.nu + p.mu;
  int n_max = static_cast<int>(std::floor(-0.5 * (spm.real() + 1.0) - 1e-12));
  if (n_states > n_max + 1) n_states = n_max + 1;

  for (int n = 0; n < n_states; ++n) {
    cplx kn = cplx(n, 0.0) + 0.5 * (spm + 1.0);
    cplx energy_c = -p.kappa * p.kappa * kn * kn;
    WaveFunction wf;
    wf.grid = grid;
    wf.energy = energy_c.real();
    wf.psi.resize(grid.n_points);
    wf.dpsi.resize(grid.n_points);
    double ce = std::cos(p.epsilon), se = std::sin(p.epsilon);
    cplx pa = 0.5 * p.nu + 0.25, pb = 0.5 * p.mu + 0.25;
    for (int i = 0; i < grid.n_points; ++i) {
      double x = grid.x(i);
      double chx = std::cosh(p.kappa * x), shx = std::sinh(p.kappa * x);
      cplx z{-chx * se, shx * ce};                    // i sinh(kappa x + i eps)
      cplx dz = p.kappa * cplx{-shx * se, chx * ce};  // i kappa cosh(kappa x + i eps)
      // Jacobi polynomial with complex parameters by the three-term recurrence.
      cplx a = p.nu, b = p.mu;
      cplx pm1 = 1.0, pm = 0.5 * (a - b) + (1.0 + 0.5 * (a + b)) * z;
      cplx dm1 = 0.0, dm = 1.0 + 0.5 * (a + b);
      if (n == 0) {
        pm = pm1;
        dm = dm1;
      }
      for (int m = 2; m <= n; ++m) {
        cplx mm(m, 0.0);
        cplx c1 = 2.0 * mm * (mm + a + b) * (2.0 * mm + a + b - 2.0);
        cplx c2 = (2.0 * mm + a + b - 1.0) * (a * a - b * b);
        cplx c3 = (2.0 * mm + a + b - 1.0) * (2.0 * mm + a + b) * (2.0 * mm + a + b - 2.0);
        cplx c4 = 2.0 * (mm + a - 1.0) * (mm + b - 1.0) * (2.0 * mm + a + b);
        cplx pn = ((c2 + c3 * z) * pm - c4 * pm1) / c1;
        cplx dn = ((c2 + c3 * z) * dm + c3 * pm - c4 * dm1) / c1;
        pm1 = pm;
        pm = pn;
        dm1 = dm;
        dm = dn;
      }
      cplx one{1.0, 0.0};
      cplx f = std::pow(one - z, pa) * std::pow(one + z, pb);
      cplx dlogf = -pa / (one - z) + pb / (one + z);
      wf.psi[i] = f * pm;
      wf.dpsi[i] = (f * dlogf * pm + f * dm) * dz;
    }
    wf = normalize(wf);
    out.energies.push_back(wf.energy);
    out.residuals.push_back(solver_residual(PotentialSpec{p}, wf));
    out.states.push_back(std::move(wf));
  }
  return out;
}

WaveFunction normalize(const WaveFunction& wf) {
  std::vector<double> density(wf.psi.size());
  for (size_t i = 0; i < wf.psi.size(); ++i) density[i] = std::norm(wf.psi[i]);
  double total = simpson(density, wf.grid.spacing());
  if (!(total > 1e-300)) throw std::domain_error("normalize: zero-norm wavefunction");
  double s = 1.0 / std::sqrt(total);
  WaveFunction out = wf;
  for (auto& v : out.psi) v *= s;
  for (auto& v : out.dpsi) v *= s;
  out.normalized = true;
  return out;
}

namespace {

WaveFunction rotate(const WaveFunction& wf, double theta, PhaseSpec tag) {
  WaveFunction out = wf;
  cplx r = std::exp(cplx{0.0, theta});
  for (auto& v : out.psi) v *= r;
  for (auto& v : out.dpsi) v *= r;
  out.phase = tag;
  return out;
}

}  // namespace

WaveFunction fix_phase(const WaveFunction& wf, const PhaseSpec& phase) {
  switch (phase.rule) {
    case PhaseRule::Raw:
      return rotate(wf, phase.theta, phase);
    case PhaseRule::PeakPositive: {
      size_t idx = 0;
      double best = -1.0;
      for (size_t i = 0; i < wf.psi.size(); ++i) {
        double a = std::abs(wf.psi[i]);
        if (a > best) {
          best = a;
          idx = i;
        }
      }
      if (!(best > 0.0)) throw std::domain_error("fix_phase: zero wavefunction");
      return rotate(wf, -std::arg(wf.psi[idx]), phase);
    }
    case PhaseRule::SymmetryAdapted: {
      const int n = wf.grid.n_points;
      double m = wf.max_abs();
      for (int i = 0; i < n; ++i) {
        if (std::abs(std::abs(wf.psi[i]) - std::abs(wf.psi[n - 1 - i])) > 1e-3 * m)
          throw std::invalid_argument(
              "fix_phase: SymmetryAdapted requires |psi| symmetric about the grid center");
      }
      // The asymmetry functional is C - 2 Re(e^{2 i theta} J) with
      // J = sum psi(x) psi(x_mirror); minimize by scanning then refining.
      cplx j{0.0, 0.0};
      for (int i = 0; i < n; ++i) j += wf.psi[i] * wf.psi[n - 1 - i];
      auto asym = [&](double th) { return -2.0 * (std::exp(cplx{0.0, 2.0 * th}) * j).real(); };
      const int n_scan = 10000;
      double best_th = 0.0, best_v = std::numeric_limits<double>::infinity();
      for (int s = 0; s < n_scan; ++s) {
        double th = kPi * s / n_scan;
        double v = asym(th);
        if (v < best_v) {
          best_v = v;
          best_th = th;
        }
      }
      double lo = best_th - kPi / n_scan, hi = best_th + kPi / n_scan;
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
      for (int it = 0; it < 80; ++it) {
        if (asym(c) < asym(d)) {
          hi = d;
        } else {
          lo = c;
        }
        c = hi - gr * (hi - lo);
        d = lo + gr * (hi - lo);
      }
      double th = 0.5 * (lo + hi);
      WaveFunction out = rotate(wf, th, phase);
      // Resolve the remaining sign freedom deterministically.
      size_t idx = 0;
      double best = -1.0;
      for (size_t i = 0; i < out.psi.size(); ++i) {
        double a = std::abs(out.psi[i].real());
        if (a > best) {
          best = a;
          idx = i;
        }
      }
      if (out.psi[idx].real() < 0.0)
        for (size_t i = 0; i < out.psi.size(); ++i) {
          out.psi[i] = -out.psi[i];
          out.dpsi[i] = -out.dpsi[i];
        }
      return out;
    }
  }
  throw std::logic_error("fix_phase: unknown rule");
}

double solver_residual(const PotentialSpec& spec, const WaveFunction& wf) {
  const int n = wf.grid.n_points;
  const double h = wf.grid.spacing();
  const std::vector<double> breaks = discontinuities(spec);
  double m = wf.max_abs();
  if (!(m > 0.0)) return 0.0;
  double worst = 0.0;
  for (int i = 2; i + 2 < n; ++i) {
    double x = wf.grid.x(i);
    bool masked = false;
    for (double b : breaks) masked |= std::abs(x - b) <= 3.0 * h;
    if (masked) continue;
    cplx dd = (-wf.psi[i - 2] + 16.0 * wf.psi[i - 1] - 30.0 * wf.psi[i] + 16.0 * wf.psi[i + 1] -
               wf.psi[i + 2]) /
              (12.0 * h * h);
    cplx r = -dd + (eval_potential(spec, x) - wf.energy) * wf.psi[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst / m;
}

}  // namespace interlace
