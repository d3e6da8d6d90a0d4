#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nfield/model.hpp"
#include "nfield/spectrum.hpp"
#include "nfield/types.hpp"

namespace nfield {

// Trapezoid discretization of the field on m + 1 equidistant nodes:
//   dV_j/dt = -alpha V_j + sum_i coupling(j,i) S(V_i(t - delays(j,i))),
//   coupling(j,i) = (2/m) w_i J(delta |i-j|),  delays(j,i) = tau0 + delta |i-j|.
struct DiscreteModel {
  int m;
  double delta;
  RVector weights;
  CMatrix coupling;
  RMatrix delays;
  ModelParams params;

  int nodes() const { return m + 1; }
  double node(int j) const { return -1.0 + delta * j; }
};

DiscreteModel build(int m, const ModelParams& p);

// Real-valued history V(t, node index) for t in [-h, 0].
using NodeHistory = std::function<double(double t, int j)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<RVector> states;
  double dt;
  int m;
  std::string history_tag;
};

struct SimulateOptions {
  int stride = 1;        // keep every stride-th step
  double blowup = 1e6;
  std::string history_tag = "custom";
};

// Fixed-step RK4 by the method of steps. dt must divide delta and tau0 so
// every delay is a whole number of steps. Half-step delayed values come from
// cubic Hermite interpolation of stored states and slopes; reads at t <= 0
// call the history directly.
Trajectory simulate(const DiscreteModel& dm, const NodeHistory& history, double t_end, double dt,
                    const SimulateOptions& opt = {});

// Delta_m(lambda) = (lambda + alpha) I - S'(0) coupling .* exp(-lambda delays).
CMatrix discrete_char_matrix(const DiscreteModel& dm, cplx lambda);

struct DiscreteScanOptions {
  int nx = 40;
  int ny = 40;
  double tol = 1e-12;
  int maxit = 30;  // seeds that wander near the cluster at -alpha rarely recover
  double dedupe = 1e-6;
  double margin = 0.5;  // iterates may stray this fraction of the region size outside it
};

// Newton on det Delta_m with the log-derivative step 1 / tr(Delta^{-1} Delta').
// Iterates leaving `bounds` (when given) abort with REGION_ABORT.
cplx discrete_newton(const DiscreteModel& dm, cplx seed, double tol = 1e-12, int maxit = 60,
                     const Region* bounds = nullptr);

// Roots in the region, sorted by decreasing real part. Real parameters:
// upper half seeded, conjugates appended.
std::vector<cplx> discrete_spectrum_scan(const DiscreteModel& dm, const Region& region,
                                         const DiscreteScanOptions& opt = {});

struct AttractorInfo {
  double period;
  double previous_period;
  double amplitude;
  double previous_amplitude;
  int node;
  RVector amplitude_profile;
  bool converged;
};

// Period from peak spacing of the node with the largest swing over the last
// window, compared with the window before it.
AttractorInfo attractor_diagnostics(const Trajectory& tr, double window);

}  // namespace nfield
