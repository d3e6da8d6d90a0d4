#include "nfield/model.hpp"

#include <cmath>

#include "nfield/error.hpp"

namespace nfield {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedDerivativeOrder: return "UNSUPPORTED_DERIVATIVE_ORDER";
    case ErrorCode::DegenerateLeading: return "DEGENERATE_LEADING";
    case ErrorCode::SingularVandermonde: return "SINGULAR_VANDERMONDE";
    case ErrorCode::RepeatedRoots: return "REPEATED_ROOTS";
    case ErrorCode::NearSingularEntry: return "NEAR_SINGULAR_ENTRY";
    case ErrorCode::EssentialPoint: return "ESSENTIAL_POINT";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::RegionAbort: return "REGION_ABORT";
    case ErrorCode::NotAnEigenvalue: return "NOT_AN_EIGENVALUE";
    case ErrorCode::TSingular: return "T_SINGULAR";
    case ErrorCode::AtEigenvalue: return "AT_EIGENVALUE";
    case ErrorCode::ProportionalityFailure: return "PROPORTIONALITY_FAILURE";
    case ErrorCode::Resonance: return "RESONANCE";
    case ErrorCode::UnsupportedMesh: return "UNSUPPORTED_MESH";
    case ErrorCode::StepMismatch: return "STEP_MISMATCH";
    case ErrorCode::Blowup: return "BLOWUP";
    case ErrorCode::NoCycle: return "NO_CYCLE";
    case ErrorCode::ConfigError: return "CONFIG_ERROR";
  }
  return "UNKNOWN";
}

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw NumericalError(ErrorCode::ConfigError, what);
}

cplx read_complex(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && (v.size() == 1 || v.size() == 2)) {
    for (const auto& e : v)
      if (!e.is_number()) config_error("'" + key + "' must hold numbers");
    return {v[0].get<double>(), v.size() == 2 ? v[1].get<double>() : 0.0};
  }
  config_error("'" + key + "' must be a number or [re, im]");
}

double read_real(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) config_error(std::string("missing key '") + key + "'");
  if (!doc[key].is_number()) config_error(std::string("'") + key + "' must be a number");
  return doc[key].get<double>();
}

}  // namespace

ModelParams::ModelParams(double alpha, double tau0, double r, std::vector<Term> terms)
    : alpha_(alpha), tau0_(tau0), r_(r), terms_(std::move(terms)) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) config_error("alpha must be > 0");
  if (!(tau0_ >= 0.0) || !std::isfinite(tau0_)) config_error("tau0 must be >= 0");
  if (!(r_ > 0.0) || !std::isfinite(r_)) config_error("r must be > 0");
  if (terms_.empty()) config_error("terms must contain at least one exponential");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].c_hat == cplx(0.0))
      config_error("terms[" + std::to_string(i) + "].c_hat must be nonzero");
    for (std::size_t j = 0; j < i; ++j)
      if (terms_[i].mu == terms_[j].mu)
        config_error("terms[" + std::to_string(i) + "].mu duplicates terms[" +
                     std::to_string(j) + "].mu");
  }
}

bool ModelParams::is_real() const {
  for (const auto& t : terms_)
    if (t.c_hat.imag() != 0.0 || t.mu.imag() != 0.0) return false;
  return true;
}

ModelParams ModelParams::with_r(double r) const { return {alpha_, tau0_, r, terms_}; }

ModelParams ModelParams::with_mu(std::size_t index, cplx mu) const {
  if (index >= terms_.size()) config_error("mu index out of range");
  auto t = terms_;
  t[index].mu = mu;
  return {alpha_, tau0_, r_, std::move(t)};
}

ModelParams ModelParams::with_c_hat(std::size_t index, cplx c_hat) const {
  if (index >= terms_.size()) config_error("c_hat index out of range");
  auto t = terms_;
  t[index].c_hat = c_hat;
  return {alpha_, tau0_, r_, std::move(t)};
}

ModelParams ModelParams::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) config_error("model must be a JSON object");
  const double alpha = read_real(doc, "alpha");
  const double tau0 = read_real(doc, "tau0");
  const double r = read_real(doc, "r");
  if (!doc.contains("terms") || !doc["terms"].is_array()) config_error("missing array 'terms'");
  std::vector<Term> terms;
  for (std::size_t i = 0; i < doc["terms"].size(); ++i) {
    const auto& t = doc["terms"][i];
    const std::string where = "terms[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("c_hat") || !t.contains("mu"))
      config_error(where + " needs 'c_hat' and 'mu'");
    terms.push_back({read_complex(t["c_hat"], where + ".c_hat"), read_complex(t["mu"], where + ".mu")});
  }
  return {alpha, tau0, r, std::move(terms)};
}

nlohmann::json ModelParams::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_)
    terms.push_back({{"c_hat", {t.c_hat.real(), t.c_hat.imag()}}, {"mu", {t.mu.real(), t.mu.imag()}}});
  return {{"alpha", alpha_}, {"tau0", tau0_}, {"r", r_}, {"terms", terms}};
}

double activation(double v, double r) {
  // Written as tanh to stay accurate near v = 0 and for large |v|.
  return 0.5 * std::tanh(0.5 * r * v);
}

double activation_deriv(int k, double r) {
  switch (k) {
    case 1: return r / 4.0;
    case 2: return 0.0;
    case 3: return -r * r * r / 8.0;
    default:
      throw NumericalError(ErrorCode::UnsupportedDerivativeOrder,
                           "activation derivative of order " + std::to_string(k));
  }
}

ActivationDerivs ActivationDerivs::of(const ModelParams& p) {
  return {activation_deriv(1, p.r()), activation_deriv(2, p.r()), activation_deriv(3, p.r())};
}

cplx connectivity(const ModelParams& p, double x, double rr) {
  const double d = std::abs(x - rr);
  cplx s = 0.0;
  for (const auto& t : p.terms()) s += t.c_hat * std::exp(-t.mu * d);
  return s;
}

std::vector<cplx> effective_coefficients(const ModelParams& p) {
  const double s1 = activation_deriv(1, p.r());
  std::vector<cplx> c;
  c.reserve(p.size());
  for (const auto& t : p.terms()) c.push_back(s1 * t.c_hat);
  return c;
}

double delay(const ModelParams& p, double x, double rr) { return p.tau0() + std::abs(x - rr); }

SpatialGrid::SpatialGrid(int nodes) {
  if (nodes < 3 || nodes % 2 == 0)
    throw NumericalError(ErrorCode::ConfigError, "grid needs an odd node count >= 3");
  const int n = nodes - 1;
  spacing_ = 2.0 / n;
  nodes_.resize(static_cast<std::size_t>(nodes));
  weights_.assign(static_cast<std::size_t>(nodes), spacing_);
  for (int i = 0; i <= n; ++i) nodes_[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / n;
  nodes_.back() = 1.0;
  weights_.front() = weights_.back() = 0.5 * spacing_;
}

}  // namespace nfield
