#pragma once

#include <string>
#include <vector>

#include "nfield/model.hpp"
#include "nfield/types.hpp"

namespace nfield {

// The even characteristic polynomial of the ODE associated with a fixed
// lambda, written as a polynomial in s = rho^2. Coefficients are ascending
// (s^0 first) and only defined up to a common nonzero factor.
struct PolyData {
  cplx lambda;
  std::vector<cplx> k;         // k_i = lambda + mu_i
  std::vector<cplx> coeffs_s;  // length N + 1
  std::vector<cplx> rho;       // one root per +/- pair, Re >= 0, ascending modulus
};

std::vector<cplx> shifted_rates(cplx lambda, const ModelParams& p);

enum class Degeneracy { NotInS, InS };

// lambda is in S when k_i^2 = k_j^2 for some i != j.
Degeneracy degeneracy_check(cplx lambda, const ModelParams& p, double tol = 1e-8);

// Closed product form
//   P(s) = e^{lambda tau0}(lambda+alpha)/2 prod_j (s - k_j^2)
//        + sum_i c_i k_i prod_{j != i} (s - k_j^2).
std::vector<cplx> closed_form_poly(cplx lambda, const ModelParams& p);

struct VandermondeCoeffs {
  std::vector<cplx> zeta;  // length N
  std::vector<cplx> beta;  // length N + 1
};

// Solves W zeta = -(k_i^{2N}) with W_ij = k_i^{2j} by LU, then beta = M^T [zeta; 1].
// Equals twice closed_form_poly.
VandermondeCoeffs vandermonde_coeffs(cplx lambda, const ModelParams& p);

// Same beta, but zeta from elementary symmetric functions of the k_i^2 and
// M^T summed term by term from per-exponential Toeplitz blocks.
VandermondeCoeffs symmetric_function_coeffs(cplx lambda, const ModelParams& p);

cplx poly_eval(const std::vector<cplx>& coeffs_s, cplx s);

// Roots rho_i (one per +/- pair). repeat_tol <= 0 skips the repeated-root check.
std::vector<cplx> rho_roots(const std::vector<cplx>& coeffs_s, double repeat_tol = 1e-10);

// Picks the representative of +/- rho with Re > 0, or Im >= 0 on the imaginary axis.
cplx canonical_rho(cplx rho);

// Closed-form polynomial plus its roots, without rejecting repeated roots.
PolyData make_poly(cplx lambda, const ModelParams& p);

// Reorders and re-signs poly.rho so that rho_i is the +/- root closest to
// reference[i]. Keeps branch choices continuous along a contour.
void align_rho(PolyData& poly, const std::vector<cplx>& reference);

enum class Admissibility {
  Accept,
  InS,            // (a) k_i^2 = k_j^2
  RootCollision,  // (b) the 2N values +/- rho_i are not distinct
  RateCollision,  // (c) k_j = +/- rho_i
};

const char* to_string(Admissibility a);

Admissibility admissibility(const PolyData& poly, double tol = 1e-8);

}  // namespace nfield
