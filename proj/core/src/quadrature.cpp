#include "nfield/quadrature.hpp"

#include <cmath>

namespace nfield {

CVector exp_kernel_apply(const SpatialGrid& grid, cplx k, const CVector& f) {
  const int n = grid.size();
  const auto& w = grid.weights();
  const cplx a = std::exp(-k * grid.spacing());

  CVector out(n);
  cplx left = 0.0;
  for (int j = 0; j < n; ++j) {
    left = a * left + w[static_cast<std::size_t>(j)] * f[j];
    out[j] = left;
  }
  cplx right = 0.0;
  for (int j = n - 2; j >= 0; --j) {
    right = a * (right + w[static_cast<std::size_t>(j + 1)] * f[j + 1]);
    out[j] += right;
  }
  return out;
}

CVector kernel_apply(const ModelParams& p, const std::vector<cplx>& coeffs, cplx z,
                     const SpatialGrid& grid, const CVector& f) {
  CVector out = CVector::Zero(grid.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    out += coeffs[i] * exp_kernel_apply(grid, p.terms()[i].mu + z, f);
  return std::exp(-z * p.tau0()) * out;
}

CMatrix cumulative_trapezoid(const SpatialGrid& grid, const CMatrix& f) {
  const double half = 0.5 * grid.spacing();
  CMatrix out(f.rows(), f.cols());
  out.row(0).setZero();
  for (Eigen::Index j = 1; j < f.rows(); ++j) out.row(j) = out.row(j - 1) + half * (f.row(j - 1) + f.row(j));
  return out;
}

cplx integrate(const SpatialGrid& grid, const CVector& f) {
  cplx s = 0.0;
  const auto& w = grid.weights();
  for (int i = 0; i < grid.size(); ++i) s += w[static_cast<std::size_t>(i)] * f[i];
  return s;
}

}  // namespace nfield
