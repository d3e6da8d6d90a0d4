#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace nfield {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr cplx I{0.0, 1.0};

}  // namespace nfield
