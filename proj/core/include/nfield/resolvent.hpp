#pragma once

#include <functional>

#include "nfield/charpoly.hpp"
#include "nfield/model.hpp"
#include "nfield/spectrum.hpp"
#include "nfield/types.hpp"

namespace nfield {

// A history phi(t, x) on [-h, 0] x [-1, 1].
using History = std::function<cplx(double t, double x)>;

// The special history exp(z t) u(x), with u sampled on a grid. Every
// history the normal-form code manipulates is a sum of these.
struct ModalHistory {
  cplx z;
  CVector u;

  ModalHistory conj() const { return {std::conj(z), u.conjugate()}; }
};

// Right-hand side of Delta(z) q = h_z for the resolvent applied to a history:
//   h_z(x) = phi(0,x) + int J_c(x,r) int_{-tau(x,r)}^0 e^{-z(tau(x,r)+s)} phi(s,r) ds dr.
// Nested trapezoid rule; costs grid.size()^2 * inner_nodes history calls.
CVector h_from_history(cplx z, const History& phi, const SpatialGrid& grid, const ModelParams& p,
                       int inner_nodes = 64);

// Same quantity for a modal history, where the inner integral is done in
// closed form.
CVector h_from_history(cplx z, const ModalHistory& phi, const SpatialGrid& grid, const ModelParams& p);

// T(z) = [[T-, T+], [T+, T-]] with [T+/-]_ji = 1 / (k_j +/- rho_i).
// Throws T_SINGULAR when an entry blows up or cond(T) > 1e12.
CMatrix t_matrix(const PolyData& poly);

// Gamma_hat(x) = int_{-1}^x h(r)/(z+alpha) diag(e^{-rho r}, e^{rho r}) T^{-1} (-1; 1) dr,
// one row per grid node.
CMatrix gamma_hat(const PolyData& poly, const CMatrix& Tinv, const CVector& h, const SpatialGrid& grid,
                  double alpha);

// Gamma_0 = -S^{-1} [S- G+(1) + S+ G-(1); S+ G+(-1) + S- G-(-1)], where G+/G-
// are the first/last N entries of Gamma_hat. Throws AT_EIGENVALUE when S is
// numerically singular.
CVector gamma0(const CharMatrix& s, const CVector& ghat_p1, const CVector& ghat_m1);

struct ResolventData {
  cplx z;
  PolyData poly;
  CMatrix T;
  CMatrix Tinv;
  CVector Gamma0;
  CMatrix gammahat;  // grid.size() x 2N
  CVector qsamples;
};

// Solves Delta(z) q = h on the grid. The overload taking a PolyData uses its
// rho ordering and signs as given.
ResolventData resolve(cplx z, const CVector& h, const ModelParams& p, const SpatialGrid& grid);
ResolventData resolve(const PolyData& poly, const CVector& h, const ModelParams& p, const SpatialGrid& grid);

// Only Gamma_0, which is all the contour pairing needs.
CVector resolvent_gamma0(const PolyData& poly, const CVector& h, const ModelParams& p, const SpatialGrid& grid);

}  // namespace nfield
