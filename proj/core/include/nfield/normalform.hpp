#pragma once

#include <string>
#include <vector>

#include "nfield/model.hpp"
#include "nfield/resolvent.hpp"
#include "nfield/spectrum.hpp"
#include "nfield/types.hpp"

namespace nfield {

// D^k G(0)(psi_1, ..., psi_k)(x) = S^(k)(0) int J(x,r) prod_i psi_i(-tau(x,r), r) dr
// for modal histories, k = 2 or 3. J uses c_hat, not the effective c.
CVector multilinear_G(const std::vector<ModalHistory>& psis, const SpatialGrid& grid, const ModelParams& p,
                      const ActivationDerivs& derivs);

struct ContourSpec {
  cplx center;
  double radius = 0.2;
  int nodes = 64;
};

// What the argument principle says about the disk behind a contour.
struct ContourCertificate {
  bool closes = false;     // rho continues around the circle onto itself
  int winding_det_s = 0;   // zeros of det S / prod rho (must be 1)
  int winding_rates = 0;   // zeros of prod_j P(k_j^2), i.e. k_j = +/- rho_i (must be 0)
  int winding_det_t = 0;   // zeros of det T / prod rho (must be 0)
  bool ok() const { return closes && winding_det_s == 1 && winding_rates == 0 && winding_det_t == 0; }
};

ContourCertificate certify_contour(const ContourSpec& c, const ModelParams& p, const std::vector<cplx>& reference);

// radius = min(0.2, half the distance from lambda to -alpha, to the points
// of S and to every entry of `others`), halved until the circle of twice the
// radius is certified. Singularities of Gamma_0 then sit at least 2R away
// and the 64-node trapezoid rule converges like 2^-64.
ContourSpec default_contour(cplx lambda, const ModelParams& p, const std::vector<cplx>& others = {});

// Polynomial data at each contour node with rho continued from `reference`
// (the roots at the center) along a radial path and then around the circle.
// Throws PROPORTIONALITY_FAILURE if the continuation does not close, i.e. a
// branch point of rho lies inside.
std::vector<PolyData> trace_contour(const ContourSpec& c, const ModelParams& p, const std::vector<cplx>& reference);

// Number of zeros of det S inside the contour, from the winding of
// det S / prod rho along the nodes.
int contour_winding(const ContourSpec& c, const ModelParams& p);

struct PairingResult {
  cplx kappa;
  double fit_residual;
  int winding;
};

// <phi_sun, (y, 0)>: the residue (1/2 pi i) \oint Delta(z)^{-1} y dz expressed
// through the Gamma_0 coefficients of the resolvent, then fitted as
// kappa * q_lambda by least squares. Throws PROPORTIONALITY_FAILURE when the
// relative fit residual exceeds 1e-4 or the contour does not enclose exactly
// one root.
PairingResult pairing_kappa(const EigenData& crit, const CVector& y, const ContourSpec& contour,
                            const ModelParams& p, const SpatialGrid& grid);

struct HopfH {
  ModalHistory h20;
  ModalHistory h11;
};

// h20 = eps_{2 i w0} (x) Delta(2 i w0)^{-1} B(phi, phi),
// h11 = eps_0 (x) Delta(0)^{-1} B(phi, conj phi).
// Both vanish when S''(0) = 0.
HopfH hopf_h_coefficients(const EigenData& crit, const ModelParams& p, const SpatialGrid& grid,
                          const ActivationDerivs& derivs);

enum class HopfVerdict { Supercritical, Subcritical };
const char* to_string(HopfVerdict v);

struct HopfNF {
  double omega0;
  EigenData phi;
  cplx g21;
  double l1;
  HopfVerdict verdict;
  ContourSpec contour;
  PairingResult pairing;
};

HopfNF hopf_g21(const EigenData& crit, const ModelParams& p, const ContourSpec& contour, const SpatialGrid& grid,
                const ActivationDerivs& derivs);

enum class DoubleHopfKind { Simple, Difficult };
const char* to_string(DoubleHopfKind k);

struct DoubleHopfNF {
  double omega1, omega2;
  cplx g2100, g1011, g1110, g0021;
  Eigen::Matrix2d p;
  double theta, delta;
  DoubleHopfKind kind;
  std::string subtype;  // "I" or "unclassified"
  PairingResult pairing1, pairing2;
  std::string note;
};

// Throws RESONANCE unless k w1 != l w2 for all k, l >= 1 with k + l <= 5.
void check_nonresonance(double omega1, double omega2, double tol = 1e-6);

DoubleHopfNF doublehopf_coeffs(const EigenData& crit1, const EigenData& crit2, const ModelParams& p,
                               const ContourSpec& contour1, const ContourSpec& contour2, const SpatialGrid& grid,
                               const ActivationDerivs& derivs);

// Copy of an eigen record with Gamma and q multiplied by s.
EigenData rescaled(const EigenData& e, cplx s);

}  // namespace nfield
