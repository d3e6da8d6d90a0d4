#include "nfield/normalform.hpp"

#include <cmath>
#include <numbers>

#include "nfield/error.hpp"
#include "nfield/quadrature.hpp"

namespace nfield {

CVector multilinear_G(const std::vector<ModalHistory>& psis, const SpatialGrid& grid, const ModelParams& p,
                      const ActivationDerivs& derivs) {
  double dk = 0.0;
  if (psis.size() == 2) {
    dk = derivs.d2;
  } else if (psis.size() == 3) {
    dk = derivs.d3;
  } else {
    throw NumericalError(ErrorCode::UnsupportedDerivativeOrder, "multilinear form of order " + std::to_string(psis.size()));
  }
  if (dk == 0.0) return CVector::Zero(grid.size());

  cplx z = 0.0;
  CVector prod = CVector::Ones(grid.size());
  for (const auto& psi : psis) {
    z += psi.z;
    prod = prod.cwiseProduct(psi.u);
  }
  std::vector<cplx> c_hat;
  for (const auto& t : p.terms()) c_hat.push_back(t.c_hat);
  return dk * kernel_apply(p, c_hat, z, grid, prod);
}

ContourSpec default_contour(cplx lambda, const ModelParams& p, const std::vector<cplx>& others) {
  double r = 0.2;
  r = std::min(r, 0.5 * std::abs(lambda + p.alpha()));
  const auto& t = p.terms();
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) r = std::min(r, 0.5 * std::abs(lambda + 0.5 * (t[i].mu + t[j].mu)));
  for (auto o : others)
    if (std::abs(o - lambda) > 1e-9) r = std::min(r, 0.5 * std::abs(o - lambda));
  const auto reference = make_poly(lambda, p).rho;
  for (; r >= 1e-4; r *= 0.5)
    if (certify_contour({lambda, 2.0 * r, 64}, p, reference).ok()) return {lambda, r, 64};
  throw NumericalError(ErrorCode::ProportionalityFailure, "no certified contour around the eigenvalue");
}

namespace {

int winding(const std::vector<cplx>& f) {
  double total = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) total += std::arg(f[(m + 1) % f.size()] / f[m]);
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace

ContourCertificate certify_contour(const ContourSpec& c, const ModelParams& p, const std::vector<cplx>& reference) {
  ContourCertificate cert;
  std::vector<PolyData> polys;
  try {
    polys = trace_contour(c, p, reference);
  } catch (const NumericalError&) {
    return cert;
  }
  cert.closes = true;
  std::vector<cplx> fs, fr, ft;
  for (const auto& poly : polys) {
    cplx prod = 1.0;
    for (auto r : poly.rho) prod *= r;
    cplx rates = 1.0;
    for (auto k : poly.k) rates *= poly_eval(poly.coeffs_s, k * k);
    fr.push_back(rates);
    try {
      fs.push_back(s_matrix(poly).assembled.partialPivLu().determinant() / prod);
      ft.push_back(t_matrix(poly).determinant() / prod);
    } catch (const NumericalError&) {
      cert.closes = false;
      return cert;
    }
  }
  cert.winding_det_s = winding(fs);
  cert.winding_rates = winding(fr);
  cert.winding_det_t = winding(ft);
  return cert;
}

std::vector<PolyData> trace_contour(const ContourSpec& c, const ModelParams& p, const std::vector<cplx>& reference) {
  auto separation = [](const std::vector<cplx>& rho) {
    double d = INFINITY;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      d = std::min(d, 2.0 * std::abs(rho[i]));
      for (std::size_t j = 0; j < i; ++j) d = std::min({d, std::abs(rho[i] - rho[j]), std::abs(rho[i] + rho[j])});
    }
    return d;
  };
  auto step_to = [&](cplx z, const std::vector<cplx>& prev) {
    PolyData poly = make_poly(z, p);
    align_rho(poly, prev);
    double moved = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) moved = std::max(moved, std::abs(poly.rho[i] - prev[i]));
    if (moved > 0.25 * separation(prev))
      throw NumericalError(ErrorCode::ProportionalityFailure, "rho continuation step too large on the contour");
    return poly;
  };

  std::vector<cplx> cur = reference;
  const int radial = 16;
  for (int s = 1; s <= radial; ++s) cur = step_to(c.center + c.radius * s / radial, cur).rho;

  std::vector<PolyData> out;
  out.reserve(static_cast<std::size_t>(c.nodes));
  const int sub = 4;  // intermediate points between nodes keep the steps small
  for (int m = 0; m < c.nodes; ++m) {
    if (m > 0)
      for (int s = 1; s < sub; ++s) {
        const double th = 2.0 * std::numbers::pi * (m - 1 + static_cast<double>(s) / sub) / c.nodes;
        cur = step_to(c.center + c.radius * std::exp(I * th), cur).rho;
      }
    const double th = 2.0 * std::numbers::pi * m / c.nodes;
    out.push_back(step_to(c.center + c.radius * std::exp(I * th), cur));
    cur = out.back().rho;
  }
  for (int s = 1; s <= sub; ++s) {
    const double th = 2.0 * std::numbers::pi * (c.nodes - 1 + static_cast<double>(s) / sub) / c.nodes;
    cur = step_to(c.center + c.radius * std::exp(I * th), cur).rho;
  }
  for (std::size_t i = 0; i < cur.size(); ++i)
    if (std::abs(cur[i] - out.front().rho[i]) > 1e-8 * std::max(1.0, std::abs(cur[i])))
      throw NumericalError(ErrorCode::ProportionalityFailure, "a branch point of rho lies inside the contour");
  return out;
}

int contour_winding(const ContourSpec& c, const ModelParams& p) {
  double total = 0.0;
  cplx prev = char_function(c.center + c.radius, p);
  for (int m = 1; m <= c.nodes; ++m) {
    const double th = 2.0 * std::numbers::pi * m / c.nodes;
    const cplx f = char_function(c.center + c.radius * std::exp(I * th), p);
    total += std::arg(f / prev);
    prev = f;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

PairingResult pairing_kappa(const EigenData& crit, const CVector& y, const ContourSpec& contour,
                            const ModelParams& p, const SpatialGrid& grid) {
  const ContourCertificate cert = certify_contour(contour, p, crit.poly.rho);
  PairingResult res{0.0, 0.0, cert.winding_det_s};
  if (!cert.ok())
    throw NumericalError(ErrorCode::ProportionalityFailure,
                         "contour is not certified (rho continuation closes: " + std::string(cert.closes ? "yes" : "no") +
                             ", enclosed roots: " + std::to_string(cert.winding_det_s) + ")");

  const auto polys = trace_contour(contour, p, crit.poly.rho);
  const Eigen::Index n2 = crit.Gamma.size();
  CVector acc = CVector::Zero(n2);
  for (int m = 0; m < contour.nodes; ++m) {
    const cplx e = std::exp(I * (2.0 * std::numbers::pi * m / contour.nodes));
    const cplx dz = I * contour.radius * e * (2.0 * std::numbers::pi / contour.nodes);
    acc += resolvent_gamma0(polys[static_cast<std::size_t>(m)], y, p, grid) * dz;
  }
  acc /= 2.0 * std::numbers::pi * I;

  const CVector f = eigenfunction_samples(crit.poly, acc, grid);
  const CVector& q = crit.qsamples;
  cplx num = 0.0;
  double den = 0.0, fnorm = 0.0;
  const auto& w = grid.weights();
  for (int j = 0; j < grid.size(); ++j) {
    num += w[static_cast<std::size_t>(j)] * std::conj(q[j]) * f[j];
    den += w[static_cast<std::size_t>(j)] * std::norm(q[j]);
    fnorm += w[static_cast<std::size_t>(j)] * std::norm(f[j]);
  }
  res.kappa = num / den;
  double rnorm = 0.0;
  for (int j = 0; j < grid.size(); ++j) rnorm += w[static_cast<std::size_t>(j)] * std::norm(f[j] - res.kappa * q[j]);
  res.fit_residual = fnorm > 0.0 ? std::sqrt(rnorm / fnorm) : 0.0;
  if (res.fit_residual > 1e-4)
    throw NumericalError(ErrorCode::ProportionalityFailure,
                         "residue is not proportional to q_lambda (relative residual " +
                             std::to_string(res.fit_residual) + ")");
  return res;
}

namespace {

ModalHistory as_history(const EigenData& e) { return {e.lambda, e.qsamples}; }

// eps_z (x) Delta(z)^{-1} y, with eigenvalue hits reported as resonances.
ModalHistory lift(cplx z, const CVector& y, const ModelParams& p, const SpatialGrid& grid) {
  try {
    return {z, resolve(z, y, p, grid).qsamples};
  } catch (const NumericalError& err) {
    if (err.code() == ErrorCode::AtEigenvalue)
      throw NumericalError(ErrorCode::Resonance, "second-order resonance: " + std::string(err.what()));
    throw;
  }
}

CVector B(const ModalHistory& a, const ModalHistory& b, const SpatialGrid& grid, const ModelParams& p,
          const ActivationDerivs& d) {
  return multilinear_G({a, b}, grid, p, d);
}

CVector C(const ModalHistory& a, const ModalHistory& b, const ModalHistory& c, const SpatialGrid& grid,
          const ModelParams& p, const ActivationDerivs& d) {
  return multilinear_G({a, b, c}, grid, p, d);
}

ModalHistory zero_history(const SpatialGrid& grid) { return {0.0, CVector::Zero(grid.size())}; }

}  // namespace

HopfH hopf_h_coefficients(const EigenData& crit, const ModelParams& p, const SpatialGrid& grid,
                          const ActivationDerivs& derivs) {
  if (derivs.d2 == 0.0) return {zero_history(grid), zero_history(grid)};
  const ModalHistory phi = as_history(crit);
  const double w0 = crit.lambda.imag();
  return {lift(2.0 * I * w0, B(phi, phi, grid, p, derivs), p, grid),
          lift(0.0, B(phi, phi.conj(), grid, p, derivs), p, grid)};
}

const char* to_string(HopfVerdict v) {
  return v == HopfVerdict::Supercritical ? "SUPERCRITICAL" : "SUBCRITICAL";
}

HopfNF hopf_g21(const EigenData& crit, const ModelParams& p, const ContourSpec& contour, const SpatialGrid& grid,
                const ActivationDerivs& derivs) {
  const double w0 = crit.lambda.imag();
  if (!(w0 > 0.0)) throw NumericalError(ErrorCode::ConfigError, "critical eigenvalue must have Im > 0");
  const ModalHistory phi = as_history(crit);
  CVector y = C(phi, phi, phi.conj(), grid, p, derivs);
  if (derivs.d2 != 0.0) {
    const HopfH h = hopf_h_coefficients(crit, p, grid, derivs);
    y += B(phi.conj(), h.h20, grid, p, derivs) + 2.0 * B(phi, h.h11, grid, p, derivs);
  }
  HopfNF nf{w0, crit, 0.0, 0.0, HopfVerdict::Supercritical, contour, {}};
  nf.pairing = pairing_kappa(crit, y, contour, p, grid);
  nf.g21 = 0.5 * nf.pairing.kappa;
  nf.l1 = nf.g21.real() / w0;
  nf.verdict = nf.l1 < 0.0 ? HopfVerdict::Supercritical : HopfVerdict::Subcritical;
  return nf;
}

const char* to_string(DoubleHopfKind k) { return k == DoubleHopfKind::Simple ? "SIMPLE" : "DIFFICULT"; }

void check_nonresonance(double omega1, double omega2, double tol) {
  if (std::abs(omega1 - omega2) <= tol) throw NumericalError(ErrorCode::Resonance, "omega1 = omega2");
  for (int k = 1; k <= 4; ++k)
    for (int l = 1; k + l <= 5; ++l)
      if (std::abs(k * omega1 - l * omega2) <= tol)
        throw NumericalError(ErrorCode::Resonance,
                             std::to_string(k) + " omega1 = " + std::to_string(l) + " omega2");
}

DoubleHopfNF doublehopf_coeffs(const EigenData& crit1, const EigenData& crit2, const ModelParams& p,
                               const ContourSpec& contour1, const ContourSpec& contour2, const SpatialGrid& grid,
                               const ActivationDerivs& derivs) {
  const double w1 = crit1.lambda.imag(), w2 = crit2.lambda.imag();
  if (!(w1 > 0.0) || !(w2 > 0.0))
    throw NumericalError(ErrorCode::ConfigError, "critical eigenvalues must have Im > 0");
  check_nonresonance(w1, w2);

  const ModalHistory f1 = as_history(crit1), f2 = as_history(crit2);
  const ModalHistory f1b = f1.conj(), f2b = f2.conj();

  CVector y2100 = C(f1, f1, f1b, grid, p, derivs);
  CVector y1011 = C(f1, f2, f2b, grid, p, derivs);
  CVector y1110 = C(f1, f1b, f2, grid, p, derivs);
  CVector y0021 = C(f2, f2, f2b, grid, p, derivs);

  if (derivs.d2 != 0.0) {
    const ModalHistory h1100 = lift(0.0, B(f1, f1b, grid, p, derivs), p, grid);
    const ModalHistory h2000 = lift(2.0 * I * w1, B(f1, f1, grid, p, derivs), p, grid);
    const ModalHistory h1010 = lift(I * (w1 + w2), B(f1, f2, grid, p, derivs), p, grid);
    const ModalHistory h1001 = lift(I * (w1 - w2), B(f1, f2b, grid, p, derivs), p, grid);
    const ModalHistory h0020 = lift(2.0 * I * w2, B(f2, f2, grid, p, derivs), p, grid);
    const ModalHistory h0011 = lift(0.0, B(f2, f2b, grid, p, derivs), p, grid);
    y2100 += B(h2000, f1b, grid, p, derivs) + 2.0 * B(h1100, f1, grid, p, derivs);
    y1011 += B(h1010, f2b, grid, p, derivs) + B(h1001, f2, grid, p, derivs) + B(h0011, f1, grid, p, derivs);
    y1110 += B(h1100, f2, grid, p, derivs) + B(h1010, f1b, grid, p, derivs) + B(h1001.conj(), f1, grid, p, derivs);
    y0021 += B(h0020, f2b, grid, p, derivs) + 2.0 * B(h0011, f2, grid, p, derivs);
  }

  DoubleHopfNF nf;
  nf.omega1 = w1;
  nf.omega2 = w2;
  const PairingResult a = pairing_kappa(crit1, y2100, contour1, p, grid);
  const PairingResult b = pairing_kappa(crit1, y1011, contour1, p, grid);
  const PairingResult c = pairing_kappa(crit2, y1110, contour2, p, grid);
  const PairingResult d = pairing_kappa(crit2, y0021, contour2, p, grid);
  nf.g2100 = 0.5 * a.kappa;
  nf.g1011 = b.kappa;
  nf.g1110 = c.kappa;
  nf.g0021 = 0.5 * d.kappa;
  nf.pairing1 = a.fit_residual >= b.fit_residual ? a : b;
  nf.pairing2 = c.fit_residual >= d.fit_residual ? c : d;

  nf.p << nf.g2100.real(), nf.g1011.real(), nf.g1110.real(), nf.g0021.real();
  nf.theta = nf.p(0, 1) / nf.p(1, 1);
  nf.delta = nf.p(1, 0) / nf.p(0, 0);
  nf.kind = nf.p(0, 0) * nf.p(1, 1) > 0.0 ? DoubleHopfKind::Simple : DoubleHopfKind::Difficult;
  const bool type_one = nf.kind == DoubleHopfKind::Simple && nf.theta > 0.0 && nf.delta > 0.0 && nf.theta * nf.delta > 1.0;
  nf.subtype = type_one ? "I" : "unclassified";
  nf.note = "fifth-order coefficients (s1, s2, r1, r2) are not computed";
  return nf;
}

EigenData rescaled(const EigenData& e, cplx s) {
  EigenData out = e;
  out.Gamma *= s;
  out.qsamples *= s;
  out.residual *= std::abs(s);
  return out;
}

}  // namespace nfield
