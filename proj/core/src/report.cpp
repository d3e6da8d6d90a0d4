#include "nfield/report.hpp"

#include <cstdio>

namespace nfield {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json complex_json(const std::vector<cplx>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (auto z : v) out.push_back(complex_json(z));
  return out;
}

nlohmann::json complex_json(const CVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v[i]));
  return out;
}

nlohmann::json to_json(const EigenData& e) {
  return {{"lambda", complex_json(e.lambda)},
          {"k", complex_json(e.poly.k)},
          {"rho", complex_json(e.poly.rho)},
          {"Gamma", complex_json(e.Gamma)},
          {"residual", e.residual},
          {"smin", e.smin}};
}

nlohmann::json to_json(const ContourSpec& c) {
  return {{"center", complex_json(c.center)}, {"radius", c.radius}, {"nodes", c.nodes}};
}

namespace {

nlohmann::json pairing_json(const PairingResult& p) {
  return {{"kappa", complex_json(p.kappa)}, {"fit_residual", p.fit_residual}, {"winding", p.winding}};
}

}  // namespace

nlohmann::json to_json(const HopfNF& nf) {
  return {{"omega0", nf.omega0},
          {"eigen", to_json(nf.phi)},
          {"g21", complex_json(nf.g21)},
          {"abs_g21", std::abs(nf.g21)},
          {"l1", nf.l1},
          {"verdict", to_string(nf.verdict)},
          {"contour", to_json(nf.contour)},
          {"pairing", pairing_json(nf.pairing)}};
}

nlohmann::json to_json(const DoubleHopfNF& nf) {
  return {{"omega1", nf.omega1},
          {"omega2", nf.omega2},
          {"g2100", complex_json(nf.g2100)},
          {"g1011", complex_json(nf.g1011)},
          {"g1110", complex_json(nf.g1110)},
          {"g0021", complex_json(nf.g0021)},
          {"p", {{nf.p(0, 0), nf.p(0, 1)}, {nf.p(1, 0), nf.p(1, 1)}}},
          {"theta", nf.theta},
          {"delta", nf.delta},
          {"kind", to_string(nf.kind)},
          {"subtype", nf.subtype},
          {"pairing1", pairing_json(nf.pairing1)},
          {"pairing2", pairing_json(nf.pairing2)},
          {"note", nf.note}};
}

nlohmann::json to_json(const AttractorInfo& a) {
  std::vector<double> prof(a.amplitude_profile.data(), a.amplitude_profile.data() + a.amplitude_profile.size());
  return {{"period", a.period},
          {"previous_period", a.previous_period},
          {"amplitude", a.amplitude},
          {"previous_amplitude", a.previous_amplitude},
          {"node", a.node},
          {"converged", a.converged},
          {"amplitude_profile", prof}};
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumPoint>& pts) {
  os << "re_lambda,im_lambda,status,reason,smin,residual\n";
  for (const auto& p : pts)
    os << format_double(p.lambda.real()) << ',' << format_double(p.lambda.imag()) << ',' << to_string(p.status)
       << ',' << p.reason << ',' << format_double(p.smin) << ',' << format_double(p.residual) << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << 't';
  for (int j = 0; j <= tr.m; ++j) os << ",V" << j;
  os << '\n';
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << format_double(tr.times[k]);
    for (Eigen::Index j = 0; j < tr.states[k].size(); ++j) os << ',' << format_double(tr.states[k][j]);
    os << '\n';
  }
}

}  // namespace nfield
