#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nfield/discretize.hpp"
#include "nfield/error.hpp"
#include "nfield/normalform.hpp"
#include "nfield/report.hpp"

namespace nfield::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw NumericalError(ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
  os << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void summary(const std::string& line) { std::printf("%s\n", line.c_str()); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string cfmt(cplx z) { return fmt("%.15g%+.15gi", z.real(), z.imag()); }

ScanOptions scan_options(const RunConfig& c) {
  ScanOptions o;
  o.nx = c.nx;
  o.ny = c.ny;
  o.newton.tol = c.tol;
  o.grid_nodes = c.grid;
  return o;
}

// Critical eigenvalues: Newton from the configured seeds, otherwise the
// `count` rightmost accepted roots with positive imaginary part.
std::vector<cplx> critical_roots(const RunConfig& c, const ModelParams& p, std::size_t count) {
  std::vector<cplx> out;
  NewtonOptions no;
  no.tol = c.tol;
  if (!c.seeds.empty()) {
    for (auto s : c.seeds) out.push_back(newton_solve(s, p, no));
  } else {
    for (const auto& pt : spectrum_scan(c.region, p, scan_options(c)))
      if (pt.status == RootStatus::Accepted && pt.lambda.imag() > 0.0) out.push_back(pt.lambda);
  }
  if (out.size() < count)
    throw NumericalError(ErrorCode::NoConvergence, "fewer than " + std::to_string(count) + " critical roots found");
  out.resize(count);
  for (auto& l : out)
    if (std::abs(l.real()) < 1e-12 * std::abs(l)) l.real(0.0);
  return out;
}

EigenData eigen_with_gamma(cplx lambda, const RunConfig& c, const ModelParams& p, const SpatialGrid& grid) {
  if (c.gamma == "default") return make_eigendata(lambda, p, grid);
  const std::vector<cplx> g = c.gamma == "config" ? c.gamma_values : parse_complex_list(c.gamma);
  CVector v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v[static_cast<Eigen::Index>(i)] = g[i];
  // gamma_1..gamma_N alone means an even eigenfunction: gamma_-i = gamma_i
  if (v.size() == static_cast<Eigen::Index>(p.size())) {
    CVector full(2 * v.size());
    full << v, v;
    v = full;
  }
  return make_eigendata(lambda, p, grid, v);
}

NodeHistory make_history(const std::string& spec, int m) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw NumericalError(ErrorCode::ConfigError, "'history' must be kind:value");
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "const" || kind == "linear") {
    double eps = 0.0;
    try {
      eps = std::stod(arg);
    } catch (const std::exception&) {
      throw NumericalError(ErrorCode::ConfigError, "'history' amplitude '" + arg + "' is not a number");
    }
    if (kind == "const") return [eps](double, int) { return eps; };
    return [eps, m](double, int j) { return eps * (-1.0 + 2.0 * j / m); };
  }
  if (kind == "file") {
    std::ifstream in(arg);
    if (!in) throw NumericalError(ErrorCode::ConfigError, "cannot open history file '" + arg + "'");
    std::vector<double> v;
    std::string tok;
    while (in >> tok) {
      if (tok.find(',') != std::string::npos) std::replace(tok.begin(), tok.end(), ',', ' ');
      std::stringstream ss(tok);
      double x;
      while (ss >> x) v.push_back(x);
    }
    if (static_cast<int>(v.size()) != m + 1)
      throw NumericalError(ErrorCode::ConfigError, "history file must hold m + 1 = " + std::to_string(m + 1) +
                                                       " values, found " + std::to_string(v.size()));
    return [v](double, int j) { return v[static_cast<std::size_t>(j)]; };
  }
  throw NumericalError(ErrorCode::ConfigError, "unknown history kind '" + kind + "'");
}

}  // namespace

int cmd_spectrum(const RunConfig& c, const fs::path& out) {
  const ModelParams p = c.params();
  const auto pts = spectrum_scan(c.region, p, scan_options(c));
  std::ostringstream csv;
  write_spectrum_csv(csv, pts);
  write_text(out / "spectrum.csv", csv.str());

  nlohmann::json roots = nlohmann::json::array();
  int accepted = 0, rejected = 0, unresolved = 0;
  for (const auto& pt : pts) {
    nlohmann::json r = {{"lambda", complex_json(pt.lambda)}, {"status", to_string(pt.status)}, {"reason", pt.reason}};
    if (pt.eigen) r["rho"] = complex_json(pt.eigen->poly.rho);
    roots.push_back(r);
    accepted += pt.status == RootStatus::Accepted;
    rejected += pt.status == RootStatus::Rejected;
    unresolved += pt.status == RootStatus::Unresolved;
  }
  double rightmost = -INFINITY;
  for (const auto& pt : pts)
    if (pt.status == RootStatus::Accepted) rightmost = std::max(rightmost, pt.lambda.real());
  const std::string line = std::to_string(accepted) + " accepted, " + std::to_string(rejected) + " rejected, " +
                           std::to_string(unresolved) + " unresolved; rightmost Re = " + fmt("%.6g", rightmost);
  write_json(out / "spectrum.json", {{"roots", roots}, {"summary", line}});
  summary(line);
  return kOk;
}

int cmd_eigfun(const RunConfig& c, const fs::path& out) {
  const ModelParams p = c.params();
  const SpatialGrid grid(c.grid);
  const auto lambda = critical_roots(c, p, 1)[0];
  const EigenData e = eigen_with_gamma(lambda, c, p, grid);
  std::ostringstream csv;
  csv << "x,re_q,im_q,abs_q,arg_q\n";
  const int step = std::max(1, (grid.size() - 1) / 400);
  for (int j = 0; j < grid.size(); j += step) {
    const cplx q = e.qsamples[j];
    csv << format_double(grid.node(j)) << ',' << format_double(q.real()) << ',' << format_double(q.imag()) << ','
        << format_double(std::abs(q)) << ',' << format_double(std::arg(q)) << '\n';
  }
  write_text(out / "eigenfunction.csv", csv.str());
  const std::string line = "lambda = " + cfmt(e.lambda) + ", residual = " + fmt("%.3e", e.residual);
  auto j = to_json(e);
  j["summary"] = line;
  write_json(out / "eigenfunction.json", j);
  summary(line);
  return kOk;
}

int cmd_resolvent_check(const RunConfig& c, const fs::path& out) {
  const ModelParams p = c.params();
  const SpatialGrid grid(c.grid);
  const SpatialGrid fine = grid.refined();
  auto residual = [&](const SpatialGrid& g) {
    const CVector h = CVector::Ones(g.size());
    return CVector(delta_apply(c.z, resolve(c.z, h, p, g).qsamples, g, p) - h);
  };
  const CVector r = residual(grid);
  const double coarse = r.cwiseAbs().maxCoeff();
  const double refined = residual(fine).cwiseAbs().maxCoeff();
  std::ostringstream csv;
  csv << "x,re_residual,im_residual\n";
  for (int j = 0; j < grid.size(); ++j)
    csv << format_double(grid.node(j)) << ',' << format_double(r[j].real()) << ',' << format_double(r[j].imag()) << '\n';
  write_text(out / "resolvent_residual.csv", csv.str());
  const std::string line = "z = " + cfmt(c.z) + ", h = 1: max residual " + fmt("%.3e", coarse) +
                           ", shrink under grid halving " + fmt("%.3f", coarse / refined);
  write_json(out / "resolvent_check.json", {{"z", complex_json(c.z)},
                                            {"max_residual", coarse},
                                            {"max_residual_refined", refined},
                                            {"grid", grid.size()},
                                            {"summary", line}});
  summary(line);
  return kOk;
}

int cmd_hopf(const RunConfig& c, const fs::path& out) {
  const ModelParams p = c.params();
  const SpatialGrid grid(c.grid);
  const cplx lambda = critical_roots(c, p, 1)[0];
  const EigenData e = eigen_with_gamma(lambda, c, p, grid);
  const HopfNF nf = hopf_g21(e, p, default_contour(lambda, p), grid, ActivationDerivs::of(p));
  const std::string line = std::string(to_string(nf.verdict)) + ", l1 = " + fmt("%.6g", nf.l1) +
                           ", g21 = " + cfmt(nf.g21);
  auto j = to_json(nf);
  j["gamma_source"] = c.gamma;
  j["summary"] = line;
  write_json(out / "hopf.json", j);
  summary(line);
  return kOk;
}

int cmd_double_hopf(const RunConfig& c, const fs::path& out) {
  const ModelParams p = c.params();
  const SpatialGrid grid(c.grid);
  const auto roots = critical_roots(c, p, 2);
  const EigenData e1 = make_eigendata(roots[0], p, grid);
  const EigenData e2 = make_eigendata(roots[1], p, grid);
  const DoubleHopfNF nf = doublehopf_coeffs(e1, e2, p, default_contour(roots[0], p, {roots[1]}),
                                            default_contour(roots[1], p, {roots[0]}), grid, ActivationDerivs::of(p));
  const std::string line = std::string(to_string(nf.kind)) + ", sub-type " + nf.subtype + ", theta = " +
                           fmt("%.6g", nf.theta) + ", delta = " + fmt("%.6g", nf.delta);
  auto j = to_json(nf);
  j["eigen1"] = to_json(e1);
  j["eigen2"] = to_json(e2);
  j["contour1"] = to_json(default_contour(roots[0], p, {roots[1]}));
  j["contour2"] = to_json(default_contour(roots[1], p, {roots[0]}));
  j["normalization"] = "Gamma scaled so that max_i |Gamma_i| = 1 with that entry real positive";
  j["summary"] = line;
  write_json(out / "double_hopf.json", j);
  summary(line);
  return kOk;
}

int cmd_simulate(const RunConfig& c, const fs::path& out) {
  const ModelParams p = c.params();
  const DiscreteModel dm = build(c.m, p);
  SimulateOptions opt;
  opt.history_tag = c.history;
  const double dt = dm.delta / c.dt_div;
  const Trajectory tr = simulate(dm, make_history(c.history, c.m), c.t_end, dt, opt);

  Trajectory thin{{}, {}, tr.dt * c.stride, tr.m, tr.history_tag};
  for (std::size_t k = 0; k < tr.times.size(); k += static_cast<std::size_t>(c.stride)) {
    thin.times.push_back(tr.times[k]);
    thin.states.push_back(tr.states[k]);
  }
  std::ostringstream csv;
  write_trajectory_csv(csv, thin);
  write_text(out / "trajectory.csv", csv.str());

  nlohmann::json meta = {{"m", c.m}, {"dt", dt}, {"t_end", c.t_end}, {"stride", c.stride}, {"history", c.history},
                         {"model", c.model}};
  std::string line;
  try {
    const AttractorInfo info = attractor_diagnostics(tr, c.window);
    meta["diagnostics"] = to_json(info);
    line = std::string("converged = ") + (info.converged ? "true" : "false") + ", period " +
           fmt("%.6g", info.period) + ", amplitude " + fmt("%.4g", info.amplitude);
  } catch (const NumericalError& e) {
    if (e.code() != ErrorCode::NoCycle) throw;
    meta["diagnostics"] = {{"error", e.what()}};
    line = std::string("no cycle: ") + e.what();
  }
  meta["summary"] = line;
  write_json(out / "trajectory.json", meta);
  summary(line);
  return kOk;
}

int cmd_discrete_spectrum(const RunConfig& c, const fs::path& out) {
  const ModelParams p = c.params();
  DiscreteScanOptions o;
  o.nx = c.nx;
  o.ny = c.ny;
  o.tol = c.tol;
  const auto roots = discrete_spectrum_scan(build(c.m, p), c.region, o);
  std::ostringstream csv;
  csv << "re_lambda,im_lambda\n";
  for (auto r : roots) csv << format_double(r.real()) << ',' << format_double(r.imag()) << '\n';
  write_text(out / "discrete_spectrum.csv", csv.str());
  const std::string line = std::to_string(roots.size()) + " roots for m = " + std::to_string(c.m) +
                           (roots.empty() ? "" : "; rightmost " + cfmt(roots.front()));
  write_json(out / "discrete_spectrum.json",
             {{"m", c.m}, {"roots", complex_json(roots)}, {"summary", line}});
  summary(line);
  return kOk;
}

}  // namespace nfield::cli
