#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nfield/charpoly.hpp"
#include "nfield/model.hpp"
#include "nfield/types.hpp"

namespace nfield {

// S(lambda) = [[S-, S+], [S+, S-]] with
//   [S-]_ji = e^{rho_i} / (k_j - rho_i),  [S+]_ji = e^{-rho_i} / (k_j + rho_i).
struct CharMatrix {
  cplx lambda;
  CMatrix Sminus;
  CMatrix Splus;
  CMatrix assembled;
};

CharMatrix s_matrix(const PolyData& poly, double tol = 1e-12);

// det S(lambda). Throws ESSENTIAL_POINT at lambda = -alpha.
cplx char_det(cplx lambda, const ModelParams& p);

// det S(lambda) / prod_i rho_i. Same zeros as det S, but independent of the
// choice of sign for each rho_i, hence analytic in lambda. Newton runs on this.
cplx char_function(cplx lambda, const ModelParams& p);

struct NewtonOptions {
  double tol = 1e-12;
  int maxit = 60;
  double forbidden_radius = 1e-6;  // around -alpha and the points of S
};

cplx newton_solve(cplx seed, const ModelParams& p, const NewtonOptions& opt = {});

// Right singular vector of the smallest singular value, scaled so that
// max |Gamma_i| = 1 and that entry is real positive. Ordering is
// (gamma_1..gamma_N, gamma_-1..gamma_-N).
CVector null_vector(const CharMatrix& s, double* smin_rel = nullptr);

struct EigenData {
  cplx lambda;
  PolyData poly;
  CVector Gamma;
  CVector qsamples;
  double residual = 0.0;  // max over the grid of |Delta(lambda) q|
  double smin = 0.0;      // sigma_min / sigma_max of S(lambda)
};

cplx eigenfunction(const PolyData& poly, const CVector& Gamma, double x);
cplx eigenfunction(const EigenData& e, double x);
CVector eigenfunction_samples(const PolyData& poly, const CVector& Gamma, const SpatialGrid& grid);

// (lambda + alpha) q(x) - int J_c(x,r) e^{-lambda tau(x,r)} q(r) dr on the grid.
CVector delta_apply(cplx lambda, const CVector& q, const SpatialGrid& grid, const ModelParams& p);

// Builds the eigen record at a converged root. When gamma is given it is used
// verbatim instead of the SVD null vector.
EigenData make_eigendata(cplx lambda, const ModelParams& p, const SpatialGrid& grid,
                         const std::optional<CVector>& gamma = std::nullopt);

struct Region {
  double re_min, re_max, im_min, im_max;
  bool contains(cplx z, double slack = 0.0) const {
    return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
           z.imag() <= im_max + slack;
  }
};

enum class RootStatus { Accepted, Rejected, Unresolved };
const char* to_string(RootStatus s);

struct SpectrumPoint {
  cplx lambda;
  RootStatus status;
  std::string reason;
  double smin = 0.0;
  double residual = 0.0;
  std::optional<EigenData> eigen;  // filled for accepted roots
};

struct ScanOptions {
  int nx = 40;
  int ny = 40;
  NewtonOptions newton;
  double dedupe = 1e-6;
  double admissibility_tol = 1e-5;
  // A root passes the residual test when the residual is below the bound or
  // drops by at least 3x on the grid with half the spacing (quadrature error
  // of an exact eigenfunction shrinks 4x; a spurious root's does not).
  double residual_bound = 1e-6;
  double essential_radius = 1e-3;
  int grid_nodes = SpatialGrid::kDefaultNodes;
};

// Newton from an nx-by-ny seed grid; for real parameters only the upper half
// of the region is seeded and conjugates are added afterwards. Sorted by
// decreasing real part.
std::vector<SpectrumPoint> spectrum_scan(const Region& region, const ModelParams& p,
                                         const ScanOptions& opt = {});

}  // namespace nfield
