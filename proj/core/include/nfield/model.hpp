#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nfield/types.hpp"

namespace nfield {

struct Term {
  cplx c_hat;
  cplx mu;
};

// A neural field instance on [-1, 1]:
//   dV/dt = -alpha V + int J(x,r) S(V(t - tau0 - |x-r|, r)) dr,
//   J(x,r) = sum_i c_hat_i exp(-mu_i |x-r|).
// Validated on construction and immutable afterwards.
class ModelParams {
 public:
  ModelParams(double alpha, double tau0, double r, std::vector<Term> terms);

  double alpha() const { return alpha_; }
  double tau0() const { return tau0_; }
  double r() const { return r_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  // Largest delay tau0 + 2 (diameter of the domain at unit speed).
  double max_delay() const { return tau0_ + 2.0; }

  // True when every c_hat and mu is real, which is what the time stepper needs.
  bool is_real() const;

  ModelParams with_r(double r) const;
  ModelParams with_mu(std::size_t index, cplx mu) const;
  ModelParams with_c_hat(std::size_t index, cplx c_hat) const;

  static ModelParams from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

 private:
  double alpha_;
  double tau0_;
  double r_;
  std::vector<Term> terms_;
};

double activation(double v, double r);

// S^(k)(0) for k = 1, 2, 3.
double activation_deriv(int k, double r);

// Taylor coefficients of the activation at the rest state. The normal-form
// code reads them from here so tests can inject a non-odd activation.
struct ActivationDerivs {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  static ActivationDerivs of(const ModelParams& p);
};

cplx connectivity(const ModelParams& p, double x, double rr);

// c_i = S'(0) c_hat_i, the coefficients of the linearized kernel.
std::vector<cplx> effective_coefficients(const ModelParams& p);

double delay(const ModelParams& p, double x, double rr);

// Equidistant trapezoid grid on [-1, 1].
class SpatialGrid {
 public:
  static constexpr int kDefaultNodes = 6401;

  explicit SpatialGrid(int nodes = kDefaultNodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  double spacing() const { return spacing_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

  // Grid with half the spacing (2n - 1 nodes); even-indexed nodes coincide.
  SpatialGrid refined() const { return SpatialGrid(2 * size() - 1); }

 private:
  double spacing_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace nfield
