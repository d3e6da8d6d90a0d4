#include "nfield/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "nfield/error.hpp"

namespace nfield {

DiscreteModel build(int m, const ModelParams& p) {
  if (m < 2 || m % 2 != 0) throw NumericalError(ErrorCode::UnsupportedMesh, "m must be even and >= 2");
  const int n = m + 1;
  const double delta = 2.0 / m;
  RVector w = RVector::Ones(n);
  w[0] = w[m] = 0.5;
  CMatrix coupling(n, n);
  RMatrix delays(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double d = delta * std::abs(i - j);
      coupling(j, i) = (2.0 / m) * w[i] * connectivity(p, 0.0, d);
      delays(j, i) = p.tau0() + d;
    }
  return {m, delta, w, coupling, delays, p};
}

namespace {

long steps_in(double span, double dt) {
  const double ratio = span / dt;
  const long k = std::lround(ratio);
  if (std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio))
    throw NumericalError(ErrorCode::StepMismatch, "delay " + std::to_string(span) + " is not a multiple of dt");
  return k;
}

}  // namespace

Trajectory simulate(const DiscreteModel& dm, const NodeHistory& history, double t_end, double dt,
                    const SimulateOptions& opt) {
  if (!dm.params.is_real()) throw NumericalError(ErrorCode::ConfigError, "simulation needs real parameters");
  if (!(t_end > 0.0) || !(dt > 0.0)) throw NumericalError(ErrorCode::ConfigError, "t_end and dt must be > 0");
  const int n = dm.nodes();
  const int m = dm.m;
  const double alpha = dm.params.alpha();
  const double r = dm.params.r();

  steps_in(dm.delta, dt);
  const long lag0 = steps_in(dm.params.tau0(), dt);
  const long lag_delta = steps_in(dm.delta, dt);
  std::vector<long> lag(static_cast<std::size_t>(m + 1));
  for (int l = 0; l <= m; ++l) lag[static_cast<std::size_t>(l)] = lag0 + l * lag_delta;

  const RMatrix coupling = dm.coupling.real();

  // Ring buffer of states and slopes covering the longest delay.
  const long cap = lag.back() + 2;
  std::vector<RVector> buf_v(static_cast<std::size_t>(cap), RVector::Zero(n));
  std::vector<RVector> buf_d(static_cast<std::size_t>(cap), RVector::Zero(n));
  auto slot = [cap](long step) { return static_cast<std::size_t>(((step % cap) + cap) % cap); };

  RVector v(n);
  for (int j = 0; j < n; ++j) v[j] = history(0.0, j);

  const long nsteps = std::lround(std::ceil(t_end / dt - 1e-9));
  Trajectory tr{{}, {}, dt * opt.stride, m, opt.history_tag};
  tr.times.reserve(static_cast<std::size_t>(nsteps / opt.stride + 2));
  tr.states.reserve(static_cast<std::size_t>(nsteps / opt.stride + 2));

  RMatrix act(m + 1, n);  // act(l, i) = S(V_i(t_stage - tau0 - l delta))

  // Delayed value of node i at stage offset c (0, 0.5, 1) of step `step`.
  auto delayed = [&](long step, double c, long lg, int i, const RVector& stage) -> double {
    if (lg == 0) return stage[i];
    const double t = (step - lg + c) * dt;
    if (t <= 0.0) return history(t, i);
    const long a = step - lg;
    if (c == 0.0) return buf_v[slot(a)][i];
    if (c == 1.0) return buf_v[slot(a + 1)][i];
    const auto& v0 = buf_v[slot(a)];
    const auto& v1 = buf_v[slot(a + 1)];
    const auto& d0 = buf_d[slot(a)];
    const auto& d1 = buf_d[slot(a + 1)];
    return 0.5 * (v0[i] + v1[i]) + 0.125 * dt * (d0[i] - d1[i]);
  };

  auto rhs = [&](long step, double c, const RVector& y) -> RVector {
    for (int l = 0; l <= m; ++l)
      for (int i = 0; i < n; ++i) {
        // Only nodes at distance l from some j are ever needed; all are, for l <= m.
        act(l, i) = activation(delayed(step, c, lag[static_cast<std::size_t>(l)], i, y), r);
      }
    RVector out(n);
    for (int j = 0; j < n; ++j) {
      double s = -alpha * y[j];
      for (int i = 0; i < n; ++i) s += coupling(j, i) * act(std::abs(i - j), i);
      out[j] = s;
    }
    return out;
  };

  for (long step = 0;; ++step) {
    if (step % opt.stride == 0) {
      tr.times.push_back(step * dt);
      tr.states.push_back(v);
    }
    if (step >= nsteps) break;
    buf_v[slot(step)] = v;
    const RVector k1 = rhs(step, 0.0, v);
    buf_d[slot(step)] = k1;
    const RVector k2 = rhs(step, 0.5, v + 0.5 * dt * k1);
    const RVector k3 = rhs(step, 0.5, v + 0.5 * dt * k2);
    // Stage 4 reads V(t_{n+1} - delay) which for lag >= 1 is stored already.
    const RVector k4 = rhs(step, 1.0, v + dt * k3);
    v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double vmax = v.cwiseAbs().maxCoeff();
    if (!std::isfinite(vmax) || vmax > opt.blowup)
      throw NumericalError(ErrorCode::Blowup, "state norm exceeded bound at t = " + std::to_string((step + 1) * dt));
  }
  return tr;
}

namespace {

// e^{-lambda (tau0 + l delta)} for l = 0..m; delays only depend on |i - j|.
CVector lag_exponentials(const DiscreteModel& dm, cplx lambda) {
  CVector e(dm.m + 1);
  const cplx step = std::exp(-lambda * dm.delta);
  e[0] = std::exp(-lambda * dm.params.tau0());
  for (int l = 1; l <= dm.m; ++l) e[l] = e[l - 1] * step;
  return e;
}

}  // namespace

CMatrix discrete_char_matrix(const DiscreteModel& dm, cplx lambda) {
  const double s1 = activation_deriv(1, dm.params.r());
  const int n = dm.nodes();
  const CVector e = lag_exponentials(dm, lambda);
  CMatrix d(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) d(j, i) = -s1 * dm.coupling(j, i) * e[std::abs(i - j)];
  d.diagonal().array() += lambda + dm.params.alpha();
  return d;
}

namespace {

// Delta_m is centrosymmetric (the weights are end-symmetric and the delays
// depend on |i - j| only), so on even and odd vectors it splits into blocks
// of size m/2 + 1 and m/2 with det Delta_m proportional to det E det O.
struct Blocks {
  CMatrix even, odd;
};

Blocks split(const CMatrix& a, int m) {
  const int k = m / 2;
  Blocks b{CMatrix(k + 1, k + 1), CMatrix(k, k)};
  for (int j = 0; j <= k; ++j) {
    for (int i = 0; i < k; ++i) b.even(j, i) = a(j, i) + a(j, m - i);
    b.even(j, k) = a(j, k);
  }
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) b.odd(j, i) = a(j, i) - a(j, m - i);
  return b;
}

}  // namespace

cplx discrete_newton(const DiscreteModel& dm, cplx seed, double tol, int maxit, const Region* bounds) {
  const double s1 = activation_deriv(1, dm.params.r());
  const int n = dm.nodes();
  cplx l = seed;
  CMatrix d(n, n), dp(n, n);
  for (int it = 0; it < maxit; ++it) {
    const CVector e = lag_exponentials(dm, l);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const cplx ce = s1 * dm.coupling(j, i) * e[std::abs(i - j)];
        d(j, i) = -ce;
        dp(j, i) = ce * dm.delays(j, i);
      }
    d.diagonal().array() += l + dm.params.alpha();
    dp.diagonal().array() += 1.0;
    const Blocks bd = split(d, dm.m), bp = split(dp, dm.m);
    cplx tr = bd.even.partialPivLu().solve(bp.even).trace();
    if (dm.m > 0) tr += bd.odd.partialPivLu().solve(bp.odd).trace();
    if (tr == cplx(0.0) || !std::isfinite(std::abs(tr)))
      throw NumericalError(ErrorCode::NoConvergence, "vanishing log-derivative");
    const cplx step = 1.0 / tr;
    l -= step;
    if (!std::isfinite(std::abs(l))) throw NumericalError(ErrorCode::NoConvergence, "Newton diverged");
    if (std::abs(step) <= tol * std::max(1.0, std::abs(l))) return l;
    if (bounds && !bounds->contains(l)) throw NumericalError(ErrorCode::RegionAbort, "iterate left the search region");
  }
  throw NumericalError(ErrorCode::NoConvergence, "discrete Newton did not converge");
}

std::vector<cplx> discrete_spectrum_scan(const DiscreteModel& dm, const Region& region,
                                         const DiscreteScanOptions& opt) {
  const bool real = dm.params.is_real();
  const double im_lo = real ? std::max(0.0, region.im_min) : region.im_min;
  const double pad_re = opt.margin * (region.re_max - region.re_min);
  const double pad_im = opt.margin * (region.im_max - region.im_min);
  const Region bounds{region.re_min - pad_re, region.re_max + pad_re, region.im_min - pad_im, region.im_max + pad_im};
  std::vector<cplx> roots;
  for (int a = 0; a < opt.nx; ++a) {
    const double re = opt.nx == 1 ? region.re_min : region.re_min + (region.re_max - region.re_min) * a / (opt.nx - 1);
    for (int b = 0; b < opt.ny; ++b) {
      const double im = opt.ny == 1 ? im_lo : im_lo + (region.im_max - im_lo) * b / (opt.ny - 1);
      cplx l;
      try {
        l = discrete_newton(dm, {re, im}, opt.tol, opt.maxit, &bounds);
      } catch (const NumericalError&) {
        continue;
      }
      if (real && std::abs(l.imag()) < 1e-9 * std::max(1.0, std::abs(l))) l.imag(0.0);
      if (real && l.imag() < 0.0) l = std::conj(l);
      if (!region.contains(l, 1e-9)) continue;
      bool fresh = true;
      for (auto q : roots) fresh = fresh && std::abs(q - l) >= opt.dedupe;
      if (fresh) roots.push_back(l);
    }
  }
  std::vector<cplx> out;
  for (auto l : roots) {
    out.push_back(l);
    if (real && l.imag() > 0.0) out.push_back(std::conj(l));
  }
  std::stable_sort(out.begin(), out.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

namespace {

// Times of local maxima in [t0, t1], refined by a parabola through three samples.
std::vector<double> peaks(const Trajectory& tr, int node, double t0, double t1) {
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < tr.times.size(); ++k) {
    if (tr.times[k] < t0 || tr.times[k] > t1) continue;
    const double a = tr.states[k - 1][node], b = tr.states[k][node], c = tr.states[k + 1][node];
    if (b > a && b >= c) {
      const double den = a - 2.0 * b + c;
      const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
      out.push_back(tr.times[k] + shift * tr.dt);
    }
  }
  return out;
}

double mean_interval(const std::vector<double>& p) {
  return (p.back() - p.front()) / static_cast<double>(p.size() - 1);
}

}  // namespace

AttractorInfo attractor_diagnostics(const Trajectory& tr, double window) {
  if (tr.times.size() < 3) throw NumericalError(ErrorCode::NoCycle, "trajectory too short");
  const double t_end = tr.times.back();
  if (t_end - tr.times.front() < 3.0 * window)
    throw NumericalError(ErrorCode::ConfigError, "trajectory must span at least three windows");
  const int n = static_cast<int>(tr.states.front().size());

  auto swing = [&](double t0, double t1) {
    RVector lo = RVector::Constant(n, INFINITY), hi = RVector::Constant(n, -INFINITY);
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      if (tr.times[k] >= t0 && tr.times[k] <= t1) {
        lo = lo.cwiseMin(tr.states[k]);
        hi = hi.cwiseMax(tr.states[k]);
      }
    return RVector(0.5 * (hi - lo));
  };

  AttractorInfo info{};
  info.amplitude_profile = swing(t_end - window, t_end);
  Eigen::Index node = 0;
  info.amplitude = info.amplitude_profile.maxCoeff(&node);
  info.node = static_cast<int>(node);
  info.previous_amplitude = swing(t_end - 2.0 * window, t_end - window)[node];
  if (!(info.amplitude > 1e-10)) throw NumericalError(ErrorCode::NoCycle, "no oscillation in the last window");

  const auto last = peaks(tr, info.node, t_end - window, t_end);
  const auto prev = peaks(tr, info.node, t_end - 2.0 * window, t_end - window);
  if (last.size() < 3 || prev.size() < 3) throw NumericalError(ErrorCode::NoCycle, "fewer than three peaks per window");
  info.period = mean_interval(last);
  info.previous_period = mean_interval(prev);
  info.converged = std::abs(info.period - info.previous_period) < 0.01 * info.previous_period;
  return info;
}

}  // namespace nfield
