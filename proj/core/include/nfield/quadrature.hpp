#pragma once

#include <vector>

#include "nfield/model.hpp"
#include "nfield/types.hpp"

namespace nfield {

// out_j = sum_i w_i exp(-k |x_j - x_i|) f_i on the trapezoid grid, in O(n)
// by a forward and a backward sweep. Identical to the dense composite rule.
CVector exp_kernel_apply(const SpatialGrid& grid, cplx k, const CVector& f);

// out(x) = exp(-z tau0) * sum_i coeffs_i int exp(-(mu_i + z)|x-r|) f(r) dr.
// This is the kernel integral of J against a modal history exp(z t) f(x)
// evaluated at the delayed time -tau0 - |x-r|.
CVector kernel_apply(const ModelParams& p, const std::vector<cplx>& coeffs, cplx z,
                     const SpatialGrid& grid, const CVector& f);

// Running trapezoid integral from x = -1 along the grid, column by column.
CMatrix cumulative_trapezoid(const SpatialGrid& grid, const CMatrix& f);

// Trapezoid integral over [-1, 1].
cplx integrate(const SpatialGrid& grid, const CVector& f);

}  // namespace nfield
