#include "nfield/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "nfield/error.hpp"
#include "nfield/quadrature.hpp"

namespace nfield {

CharMatrix s_matrix(const PolyData& poly, double tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(poly.k.size());
  CharMatrix m;
  m.lambda = poly.lambda;
  m.Sminus.resize(n, n);
  m.Splus.resize(n, n);
  double scale = 1.0;
  for (auto v : poly.k) scale = std::max(scale, std::abs(v));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx kj = poly.k[static_cast<std::size_t>(j)];
      const cplx ri = poly.rho[static_cast<std::size_t>(i)];
      if (std::abs(kj - ri) <= tol * scale || std::abs(kj + ri) <= tol * scale)
        throw NumericalError(ErrorCode::NearSingularEntry, "k_j = +/- rho_i");
      m.Sminus(j, i) = std::exp(ri) / (kj - ri);
      m.Splus(j, i) = std::exp(-ri) / (kj + ri);
    }
  m.assembled.resize(2 * n, 2 * n);
  m.assembled << m.Sminus, m.Splus, m.Splus, m.Sminus;
  return m;
}

namespace {

void require_not_essential(cplx lambda, const ModelParams& p) {
  if (std::abs(lambda + p.alpha()) <= 1e-12 * std::max(1.0, p.alpha()))
    throw NumericalError(ErrorCode::EssentialPoint, "lambda = -alpha belongs to the essential spectrum");
}

}  // namespace

cplx char_det(cplx lambda, const ModelParams& p) {
  require_not_essential(lambda, p);
  return s_matrix(make_poly(lambda, p)).assembled.partialPivLu().determinant();
}

cplx char_function(cplx lambda, const ModelParams& p) {
  require_not_essential(lambda, p);
  const PolyData poly = make_poly(lambda, p);
  cplx prod = 1.0;
  for (auto r : poly.rho) prod *= r;
  return s_matrix(poly).assembled.partialPivLu().determinant() / prod;
}

cplx newton_solve(cplx seed, const ModelParams& p, const NewtonOptions& opt) {
  const auto& terms = p.terms();
  auto check_region = [&](cplx l) {
    if (std::abs(l + p.alpha()) < opt.forbidden_radius)
      throw NumericalError(ErrorCode::RegionAbort, "iterate entered the neighbourhood of -alpha");
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(l + 0.5 * (terms[i].mu + terms[j].mu)) < opt.forbidden_radius)
          throw NumericalError(ErrorCode::RegionAbort, "iterate entered the neighbourhood of S");
  };

  cplx l = seed;
  for (int it = 0; it < opt.maxit; ++it) {
    check_region(l);
    const cplx f = char_function(l, p);
    if (f == cplx(0.0)) return l;
    const double h = 1e-7 * std::max(1.0, std::abs(l));
    const cplx d = (char_function(l + h, p) - char_function(l - h, p)) / (2.0 * h);
    if (d == cplx(0.0) || !std::isfinite(std::abs(d)))
      throw NumericalError(ErrorCode::NoConvergence, "vanishing Newton derivative");
    const cplx step = f / d;
    l -= step;
    if (!std::isfinite(std::abs(l))) throw NumericalError(ErrorCode::NoConvergence, "Newton diverged");
    if (std::abs(step) <= opt.tol * std::max(1.0, std::abs(l))) {
      check_region(l);
      return l;
    }
  }
  throw NumericalError(ErrorCode::NoConvergence, "Newton did not converge");
}

CVector null_vector(const CharMatrix& s, double* smin_rel) {
  Eigen::JacobiSVD<CMatrix> svd(s.assembled, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index last = sv.size() - 1;
  const double rel = sv[0] > 0 ? sv[last] / sv[0] : 0.0;
  if (smin_rel) *smin_rel = rel;
  if (rel > 1e-6)
    throw NumericalError(ErrorCode::NotAnEigenvalue, "S(lambda) is not numerically singular");
  CVector g = svd.matrixV().col(last);
  Eigen::Index imax = 0;
  g.cwiseAbs().maxCoeff(&imax);
  const cplx pivot = g[imax];
  g /= pivot;
  g[imax] = 1.0;
  return g;
}

cplx eigenfunction(const PolyData& poly, const CVector& Gamma, double x) {
  const std::size_t n = poly.rho.size();
  cplx q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx r = poly.rho[i];
    q += Gamma[static_cast<Eigen::Index>(i)] * std::exp(r * x) +
         Gamma[static_cast<Eigen::Index>(i + n)] * std::exp(-r * x);
  }
  return q;
}

cplx eigenfunction(const EigenData& e, double x) { return eigenfunction(e.poly, e.Gamma, x); }

CVector eigenfunction_samples(const PolyData& poly, const CVector& Gamma, const SpatialGrid& grid) {
  CVector q(grid.size());
  for (int j = 0; j < grid.size(); ++j) q[j] = eigenfunction(poly, Gamma, grid.node(j));
  return q;
}

CVector delta_apply(cplx lambda, const CVector& q, const SpatialGrid& grid, const ModelParams& p) {
  return (lambda + p.alpha()) * q - kernel_apply(p, effective_coefficients(p), lambda, grid, q);
}

EigenData make_eigendata(cplx lambda, const ModelParams& p, const SpatialGrid& grid,
                         const std::optional<CVector>& gamma) {
  EigenData e;
  e.lambda = lambda;
  e.poly = make_poly(lambda, p);
  const CharMatrix s = s_matrix(e.poly);
  if (gamma) {
    if (gamma->size() != s.assembled.cols())
      throw NumericalError(ErrorCode::ConfigError, "Gamma must have 2N entries");
    e.Gamma = *gamma;
    Eigen::JacobiSVD<CMatrix> svd(s.assembled);
    e.smin = svd.singularValues().tail(1)[0] / svd.singularValues()[0];
  } else {
    e.Gamma = null_vector(s, &e.smin);
  }
  e.qsamples = eigenfunction_samples(e.poly, e.Gamma, grid);
  e.residual = delta_apply(lambda, e.qsamples, grid, p).cwiseAbs().maxCoeff();
  return e;
}

const char* to_string(RootStatus s) {
  switch (s) {
    case RootStatus::Accepted: return "ACCEPTED";
    case RootStatus::Rejected: return "REJECTED";
    case RootStatus::Unresolved: return "UNRESOLVED";
  }
  return "UNKNOWN";
}

namespace {

SpectrumPoint classify(cplx l, const ModelParams& p, const SpatialGrid& grid, const ScanOptions& opt) {
  SpectrumPoint pt{l, RootStatus::Rejected, "", 0.0, 0.0, std::nullopt};
  if (std::abs(l + p.alpha()) < opt.essential_radius) {
    pt.status = RootStatus::Unresolved;
    pt.reason = "essential-accumulation";
    return pt;
  }
  const PolyData poly = make_poly(l, p);
  const Admissibility adm = admissibility(poly, opt.admissibility_tol);
  if (adm != Admissibility::Accept) {
    pt.reason = to_string(adm);
    try {
      Eigen::JacobiSVD<CMatrix> svd(s_matrix(poly).assembled);
      pt.smin = svd.singularValues().tail(1)[0] / svd.singularValues()[0];
    } catch (const NumericalError&) {
    }
    return pt;
  }
  try {
    EigenData e = make_eigendata(l, p, grid);
    pt.smin = e.smin;
    pt.residual = e.residual;
    if (e.residual > opt.residual_bound &&
        make_eigendata(l, p, grid.refined(), e.Gamma).residual > e.residual / 3.0) {
      pt.reason = "eigen-residual";
      return pt;
    }
    pt.status = RootStatus::Accepted;
    pt.eigen = std::move(e);
  } catch (const NumericalError& err) {
    pt.reason = to_string(err.code());
  }
  return pt;
}

}  // namespace

std::vector<SpectrumPoint> spectrum_scan(const Region& region, const ModelParams& p, const ScanOptions& opt) {
  const bool real = p.is_real();
  const double im_lo = real ? std::max(0.0, region.im_min) : region.im_min;
  const double im_hi = region.im_max;

  std::vector<cplx> roots;
  auto is_new = [&](cplx l) {
    for (auto r : roots)
      if (std::abs(r - l) < opt.dedupe) return false;
    return true;
  };

  for (int a = 0; a < opt.nx; ++a) {
    const double re = opt.nx == 1 ? region.re_min
                                  : region.re_min + (region.re_max - region.re_min) * a / (opt.nx - 1);
    for (int b = 0; b < opt.ny; ++b) {
      const double im = opt.ny == 1 ? im_lo : im_lo + (im_hi - im_lo) * b / (opt.ny - 1);
      cplx l;
      try {
        l = newton_solve({re, im}, p, opt.newton);
      } catch (const NumericalError&) {
        continue;
      }
      if (real && std::abs(l.imag()) < 1e-9 * std::max(1.0, std::abs(l))) l.imag(0.0);
      if (real && l.imag() < 0.0) l = std::conj(l);
      if (!region.contains(l, 1e-9)) continue;
      if (is_new(l)) roots.push_back(l);
    }
  }

  const SpatialGrid grid(opt.grid_nodes);
  std::vector<SpectrumPoint> out;
  for (auto l : roots) {
    out.push_back(classify(l, p, grid, opt));
    if (real && l.imag() > 0.0)
      out.push_back(classify(std::conj(l), p, grid, opt));
  }
  if (region.contains({-p.alpha(), 0.0})) {
    bool have = false;
    for (const auto& pt : out) have = have || std::abs(pt.lambda + p.alpha()) < opt.essential_radius;
    if (!have) out.push_back({{-p.alpha(), 0.0}, RootStatus::Unresolved, "essential-accumulation", 0.0, 0.0, std::nullopt});
  }
  std::stable_sort(out.begin(), out.end(), [](const SpectrumPoint& a, const SpectrumPoint& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
    return a.lambda.imag() > b.lambda.imag();
  });
  return out;
}

}  // namespace nfield
