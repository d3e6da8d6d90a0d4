#include "nfield/resolvent.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "nfield/error.hpp"
#include "nfield/quadrature.hpp"

namespace nfield {

CVector h_from_history(cplx z, const History& phi, const SpatialGrid& grid, const ModelParams& p,
                       int inner_nodes) {
  const int n = grid.size();
  const auto& x = grid.nodes();
  const auto& w = grid.weights();
  const auto c = effective_coefficients(p);
  CVector h(n);
  for (int j = 0; j < n; ++j) {
    cplx outer = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(x[j] - x[i]);
      const double tau = p.tau0() + d;
      cplx jc = 0.0;
      for (std::size_t t = 0; t < c.size(); ++t) jc += c[t] * std::exp(-p.terms()[t].mu * d);
      cplx inner = 0.0;
      if (tau > 0.0) {
        const double ds = tau / inner_nodes;
        for (int m = 0; m <= inner_nodes; ++m) {
          const double s = -tau + m * ds;
          const double wt = (m == 0 || m == inner_nodes) ? 0.5 * ds : ds;
          inner += wt * std::exp(-z * (tau + s)) * phi(s, x[i]);
        }
      }
      outer += w[i] * jc * inner;
    }
    h[j] = phi(0.0, x[j]) + outer;
  }
  return h;
}

CVector h_from_history(cplx z, const ModalHistory& phi, const SpatialGrid& grid, const ModelParams& p) {
  // int_{-tau}^0 e^{-z(tau+s)} e^{w s} ds = (e^{-z tau} - e^{-w tau}) / (w - z).
  const auto c = effective_coefficients(p);
  const cplx dz = phi.z - z;
  if (std::abs(dz) > 1e-6 * std::max(1.0, std::abs(z))) {
    return phi.u + (kernel_apply(p, c, z, grid, phi.u) - kernel_apply(p, c, phi.z, grid, phi.u)) / dz;
  }
  // Confluent case: the inner integral is tau e^{-z tau}.
  const int n = grid.size();
  const auto& x = grid.nodes();
  const auto& w = grid.weights();
  CVector h = phi.u;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(x[j] - x[i]);
      const double tau = p.tau0() + d;
      cplx jc = 0.0;
      for (std::size_t t = 0; t < c.size(); ++t) jc += c[t] * std::exp(-p.terms()[t].mu * d);
      h[j] += w[i] * jc * tau * std::exp(-z * tau) * phi.u[i];
    }
  return h;
}

CMatrix t_matrix(const PolyData& poly) {
  const Eigen::Index n = static_cast<Eigen::Index>(poly.k.size());
  CMatrix tm(n, n), tp(n, n);
  double scale = 1.0;
  for (auto v : poly.k) scale = std::max(scale, std::abs(v));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx kj = poly.k[static_cast<std::size_t>(j)];
      const cplx ri = poly.rho[static_cast<std::size_t>(i)];
      if (std::abs(kj - ri) <= 1e-12 * scale || std::abs(kj + ri) <= 1e-12 * scale)
        throw NumericalError(ErrorCode::TSingular, "k_j = +/- rho_i makes T undefined");
      tm(j, i) = 1.0 / (kj - ri);
      tp(j, i) = 1.0 / (kj + ri);
    }
  CMatrix t(2 * n, 2 * n);
  t << tm, tp, tp, tm;
  Eigen::JacobiSVD<CMatrix> svd(t);
  const auto& sv = svd.singularValues();
  if (!(sv[sv.size() - 1] > 1e-12 * sv[0]))
    throw NumericalError(ErrorCode::TSingular, "T(z) is numerically singular");
  return t;
}

CMatrix gamma_hat(const PolyData& poly, const CMatrix& Tinv, const CVector& h, const SpatialGrid& grid,
                  double alpha) {
  const Eigen::Index n = static_cast<Eigen::Index>(poly.rho.size());
  CVector ones(2 * n);
  ones << CVector::Constant(n, -1.0), CVector::Constant(n, 1.0);
  const CVector v = Tinv * ones;
  const cplx inv = 1.0 / (poly.lambda + alpha);

  CMatrix integrand(grid.size(), 2 * n);
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    const cplx g = h[j] * inv;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx e = std::exp(poly.rho[static_cast<std::size_t>(i)] * x);
      integrand(j, i) = g / e * v[i];
      integrand(j, i + n) = g * e * v[i + n];
    }
  }
  return cumulative_trapezoid(grid, integrand);
}

CVector gamma0(const CharMatrix& s, const CVector& ghat_p1, const CVector& ghat_m1) {
  const Eigen::Index n = s.Sminus.rows();
  CVector rhs(2 * n);
  rhs << s.Sminus * ghat_p1.head(n) + s.Splus * ghat_p1.tail(n),
      s.Splus * ghat_m1.head(n) + s.Sminus * ghat_m1.tail(n);
  Eigen::JacobiSVD<CMatrix> svd(s.assembled, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv[sv.size() - 1] > 1e-12 * sv[0]))
    throw NumericalError(ErrorCode::AtEigenvalue, "S(z) is singular; z is an eigenvalue");
  return -svd.solve(rhs);
}

namespace {

PolyData checked_poly(cplx z, const ModelParams& p) {
  if (std::abs(z + p.alpha()) <= 1e-12 * std::max(1.0, p.alpha()))
    throw NumericalError(ErrorCode::EssentialPoint, "z = -alpha");
  if (degeneracy_check(z, p) == Degeneracy::InS)
    throw NumericalError(ErrorCode::SingularVandermonde, "z lies in S (k_i^2 = k_j^2)");
  PolyData poly;
  poly.lambda = z;
  poly.k = shifted_rates(z, p);
  poly.coeffs_s = closed_form_poly(z, p);
  poly.rho = rho_roots(poly.coeffs_s);
  return poly;
}

void check_poly(const PolyData& poly) {
  const Admissibility a = admissibility(poly, 1e-10);
  if (a == Admissibility::RootCollision) throw NumericalError(ErrorCode::RepeatedRoots, "+/- rho_i not distinct");
  if (a == Admissibility::RateCollision) throw NumericalError(ErrorCode::NearSingularEntry, "k_j = +/- rho_i");
  if (a == Admissibility::InS) throw NumericalError(ErrorCode::SingularVandermonde, "z lies in S");
}

}  // namespace

ResolventData resolve(cplx z, const CVector& h, const ModelParams& p, const SpatialGrid& grid) {
  return resolve(checked_poly(z, p), h, p, grid);
}

ResolventData resolve(const PolyData& poly, const CVector& h, const ModelParams& p, const SpatialGrid& grid) {
  check_poly(poly);
  if (std::abs(poly.lambda + p.alpha()) <= 1e-12 * std::max(1.0, p.alpha()))
    throw NumericalError(ErrorCode::EssentialPoint, "z = -alpha");
  ResolventData r;
  r.z = poly.lambda;
  r.poly = poly;
  r.T = t_matrix(poly);
  r.Tinv = r.T.inverse();
  r.gammahat = gamma_hat(poly, r.Tinv, h, grid, p.alpha());
  const CharMatrix s = s_matrix(poly);
  const Eigen::Index last = r.gammahat.rows() - 1;
  r.Gamma0 = gamma0(s, r.gammahat.row(last).transpose(), r.gammahat.row(0).transpose());

  const std::size_t n = poly.rho.size();
  const cplx inv = 1.0 / (r.z + p.alpha());
  r.qsamples.resize(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    cplx q = h[j] * inv;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(i + n);
      const cplx e = std::exp(poly.rho[i] * x);
      q += (r.Gamma0[a] + r.gammahat(j, a)) * e + (r.Gamma0[b] + r.gammahat(j, b)) / e;
    }
    r.qsamples[j] = q;
  }
  return r;
}

CVector resolvent_gamma0(const PolyData& poly, const CVector& h, const ModelParams& p, const SpatialGrid& grid) {
  check_poly(poly);
  const CMatrix tinv = t_matrix(poly).inverse();
  const Eigen::Index n = static_cast<Eigen::Index>(poly.rho.size());
  CVector ones(2 * n);
  ones << CVector::Constant(n, -1.0), CVector::Constant(n, 1.0);
  const CVector v = tinv * ones;
  const cplx inv = 1.0 / (poly.lambda + p.alpha());

  // Gamma_hat(1) as a plain trapezoid sum; Gamma_hat(-1) = 0.
  CVector g1 = CVector::Zero(2 * n);
  const auto& w = grid.weights();
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    const cplx g = w[static_cast<std::size_t>(j)] * h[j] * inv;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx e = std::exp(poly.rho[static_cast<std::size_t>(i)] * x);
      g1[i] += g / e * v[i];
      g1[i + n] += g * e * v[i + n];
    }
  }
  return gamma0(s_matrix(poly), g1, CVector::Zero(2 * n));
}

}  // namespace nfield
