#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "nfield/discretize.hpp"
#include "nfield/error.hpp"

using namespace nfield;

namespace {

const cplx kHopf(0.0, fixtures::kHopfOmega);

// int_{-1}^{1} J(0, r) dr in closed form
double kernel_mass(const ModelParams& p) {
  double s = 0.0;
  for (const auto& t : p.terms()) {
    const double mu = t.mu.real();
    s += t.c_hat.real() * (mu == 0.0 ? 2.0 : 2.0 * (1.0 - std::exp(-mu)) / mu);
  }
  return s;
}

double row_sum_error(int m, const ModelParams& p) {
  const DiscreteModel dm = build(m, p);
  return std::abs(dm.coupling.row(m / 2).sum() - kernel_mass(p));
}

}  // namespace

TEST_CASE("smallest mesh") {
  const DiscreteModel dm = build(2, fixtures::hopf_params());
  CHECK(dm.nodes() == 3);
  CHECK(dm.node(0) == -1.0);
  CHECK(dm.node(1) == 0.0);
  CHECK(dm.node(2) == 1.0);
  CHECK(dm.weights[0] == 0.5);
  CHECK(dm.weights[1] == 1.0);
  CHECK(dm.weights[2] == 0.5);
  CHECK(dm.delays(1, 1) == 1.0);
  CHECK(dm.delays(0, 1) == 2.0);
  CHECK(dm.delays(0, 2) == 3.0);
  CHECK(dm.delays(2, 0) == 3.0);
}

TEST_CASE("meshes must be even") {
  for (int m : {0, 1, 3, 51}) {
    try {
      build(m, fixtures::hopf_params());
      FAIL("expected UNSUPPORTED_MESH");
    } catch (const NumericalError& e) {
      CHECK(e.code() == ErrorCode::UnsupportedMesh);
    }
  }
  const DiscreteModel dm = build(50, fixtures::hopf_params());
  CHECK(dm.nodes() == 51);
  CHECK(dm.delta == doctest::Approx(0.04));
}

TEST_CASE("row sums converge to the kernel mass") {
  const auto p = fixtures::hopf_params();
  const double e20 = row_sum_error(20, p), e40 = row_sum_error(40, p), e100 = row_sum_error(100, p);
  CHECK(e20 / e40 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e20 / e100 == doctest::Approx(25.0).epsilon(0.05));
}

TEST_CASE("characteristic matrix") {
  const ModelParams faint(1.0, 1.0, 4.0, {{1e-300, 0.5}});
  CHECK(discrete_char_matrix(build(4, faint), -1.0).cwiseAbs().maxCoeff() < 1e-290);

  const DiscreteModel dm = build(10, fixtures::hopf_params());
  const cplx l(0.3, 1.1);
  const CMatrix d = discrete_char_matrix(dm, l);
  const double s1 = activation_deriv(1, dm.params.r());
  CHECK(std::abs(d(3, 7) + s1 * dm.coupling(3, 7) * std::exp(-l * dm.delays(3, 7))) < 1e-15);
  CHECK(std::abs(d(4, 4) - (l + 1.0 - s1 * dm.coupling(4, 4) * std::exp(-l))) < 1e-15);
  // centrosymmetric on the symmetric mesh
  for (int j = 0; j <= 10; ++j)
    for (int i = 0; i <= 10; ++i) CHECK(std::abs(d(j, i) - d(10 - j, 10 - i)) < 1e-15);
}

TEST_CASE("discrete critical root converges to the continuum value") {
  const auto p = fixtures::hopf_params();
  const double e20 = std::abs(discrete_newton(build(20, p), kHopf) - kHopf);
  const cplx r50 = discrete_newton(build(50, p), kHopf);
  CHECK(std::abs(r50 - kHopf) < 2e-2);
  CHECK(std::abs(r50 - kHopf) < e20);
  // Delta_m is singular there
  Eigen::JacobiSVD<CMatrix> svd(discrete_char_matrix(build(50, p), r50));
  CHECK(svd.singularValues().tail(1)[0] < 1e-12 * svd.singularValues()[0]);
}

TEST_CASE("discrete roots cluster near the essential point") {
  const DiscreteModel dm = build(20, fixtures::hopf_params());
  auto roots = discrete_spectrum_scan(dm, {-1.3, -0.7, -1.0, 1.0}, {20, 20});
  int near = 0;
  for (auto r : roots) near += std::abs(r + 1.0) < 0.3;
  CHECK(near >= 6);
  for (auto r : roots) {
    bool paired = false;
    for (auto q : roots) paired = paired || std::abs(q - std::conj(r)) < 1e-8;
    CHECK(paired);
  }
}

TEST_CASE("zero history stays at rest") {
  const DiscreteModel dm = build(10, fixtures::hopf_params().with_r(6.0));
  auto tr = simulate(dm, [](double, int) { return 0.0; }, 20.0, dm.delta / 2);
  for (const auto& v : tr.states) CHECK(v.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("step size must divide the delays") {
  const DiscreteModel dm = build(10, fixtures::hopf_params());
  try {
    simulate(dm, [](double, int) { return 0.01; }, 1.0, 0.03);
    FAIL("expected STEP_MISMATCH");
  } catch (const NumericalError& e) {
    CHECK(e.code() == ErrorCode::StepMismatch);
  }
  const ModelParams cplx_params(1.0, 1.0, 4.0, {{cplx(1.0, 0.5), 1.0}});
  CHECK_THROWS_AS(simulate(build(10, cplx_params), [](double, int) { return 0.0; }, 1.0, 0.05), NumericalError);
}

TEST_CASE("blowup is reported") {
  const DiscreteModel dm = build(4, ModelParams(1.0, 1.0, 4.0, {{40.0, 0.5}}));
  SimulateOptions opt;
  opt.blowup = 1.0;
  try {
    simulate(dm, [](double, int) { return 0.5; }, 50.0, dm.delta / 2, opt);
    FAIL("expected BLOWUP");
  } catch (const NumericalError& e) {
    CHECK(e.code() == ErrorCode::Blowup);
  }
}

TEST_CASE("property: RK4 step halving") {
  const DiscreteModel dm = build(20, fixtures::hopf_params().with_r(6.0));
  auto hist = [](double t, int j) { return 0.01 * std::cos(t) * (1.0 + 0.1 * j); };
  auto a = simulate(dm, hist, 50.0, dm.delta / 2);
  auto b = simulate(dm, hist, 50.0, dm.delta / 4);
  REQUIRE(a.times.back() == doctest::Approx(50.0));
  REQUIRE(b.times.back() == doctest::Approx(50.0));
  CHECK((a.states.back() - b.states.back()).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("property: mirror symmetry is preserved") {
  const int m = 20;
  const DiscreteModel dm = build(m, fixtures::double_hopf_params().with_r(6.0).with_mu(1, 1.0));
  auto even = simulate(dm, [](double t, int j) { return 0.01 * (1.0 + std::cos(t)) * (j - 10) * (j - 10) / 100.0; },
                       60.0, dm.delta / 2);
  auto odd = simulate(dm, [](double, int j) { return 0.01 * (-1.0 + 2.0 * j / m); }, 60.0, dm.delta / 2);
  for (std::size_t k = 0; k < even.states.size(); k += 10)
    for (int j = 0; j <= m; ++j) {
      CHECK(std::abs(even.states[k][j] - even.states[k][m - j]) <= 1e-10);
      CHECK(std::abs(odd.states[k][j] + odd.states[k][m - j]) <= 1e-10);
    }
}

TEST_CASE("linear regime at the critical point is neutral") {
  const auto p = fixtures::hopf_params();
  const DiscreteModel dm = build(50, p);
  const cplx lm = discrete_newton(dm, kHopf);
  const CMatrix d = discrete_char_matrix(dm, lm);
  Eigen::JacobiSVD<CMatrix> svd(d, Eigen::ComputeFullV);
  const CVector q = svd.matrixV().col(dm.nodes() - 1);
  auto hist = [&](double t, int j) { return 1e-8 * std::real(q[j] * std::exp(lm * t)); };
  const double period = 2.0 * std::numbers::pi / fixtures::kHopfOmega;
  auto tr = simulate(dm, hist, 12.0 * period, dm.delta / 4);
  auto amp = [&](double t0) {
    double a = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      if (tr.times[k] >= t0 && tr.times[k] < t0 + period) a = std::max(a, tr.states[k].cwiseAbs().maxCoeff());
    return a;
  };
  for (int c = 4; c < 11; ++c) CHECK(std::abs(amp((c + 1) * period) / amp(c * period) - 1.0) < 0.02);
}

TEST_CASE("period of a synthetic sinusoid") {
  const double T = 3.7, dt = 0.01;
  Trajectory tr{{}, {}, dt, 2, "synthetic"};
  for (int k = 0; k * dt <= 120.0; ++k) {
    const double t = k * dt;
    RVector v(3);
    v << 0.1 * std::sin(2 * std::numbers::pi * t / T), 0.5 * std::sin(2 * std::numbers::pi * t / T), 0.0;
    tr.times.push_back(t);
    tr.states.push_back(v);
  }
  auto info = attractor_diagnostics(tr, 30.0);
  CHECK(info.node == 1);
  CHECK(std::abs(info.period - T) <= dt);
  CHECK(info.amplitude == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(info.converged);

  Trajectory flat = tr;
  for (auto& v : flat.states) v.setZero();
  CHECK_THROWS_AS(attractor_diagnostics(flat, 30.0), NumericalError);
  CHECK_THROWS_AS(attractor_diagnostics(tr, 50.0), NumericalError);
}
