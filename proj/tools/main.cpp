#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "nfield/error.hpp"

namespace fs = std::filesystem;
using namespace nfield;
using namespace nfield::cli;

namespace {

struct Shared {
  std::string config;
  std::string out = "out";
  Overrides o;
};

void add_shared(CLI::App* sub, Shared& s) {
  sub->add_option("--config", s.config, "JSON run configuration");
  sub->add_option("--out", s.out, "output directory")->capture_default_str();
  sub->add_option("--tol", s.o.tol, "Newton tolerance");
  sub->add_option("--grid", s.o.grid, "spatial grid nodes (odd)");
  sub->add_option("--alpha", s.o.alpha, "override alpha");
  sub->add_option("--tau0", s.o.tau0, "override tau0");
  sub->add_option("--r", s.o.r, "override the activation steepness r");
  for (std::size_t i = 0; i < s.o.mu.size(); ++i) {
    const std::string n = std::to_string(i + 1);
    sub->add_option("--mu" + n, s.o.mu[i], "override mu_" + n);
    sub->add_option("--c" + n, s.o.c_hat[i], "override c_hat_" + n);
  }
}

int exit_for(const NumericalError& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError: return kConfig;
    case ErrorCode::Resonance: return kPrecondition;
    default: return kNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, resolvents and normal forms of delayed neural fields"};
  app.require_subcommand(1);
  Shared s;

  using Command = std::function<int(const RunConfig&, const fs::path&)>;
  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"spectrum", {"point spectrum in a rectangle", cmd_spectrum}},
      {"eigfun", {"eigenfunction of a critical eigenvalue", cmd_eigfun}},
      {"resolvent-check", {"residual of the resolvent solve for h = 1", cmd_resolvent_check}},
      {"hopf", {"Hopf normal-form coefficient g21 and l1", cmd_hopf}},
      {"double-hopf", {"double-Hopf cubic coefficients and classification", cmd_double_hopf}},
      {"simulate", {"time stepping of the discretized field", cmd_simulate}},
      {"discrete-spectrum", {"roots of the discretized characteristic matrix", cmd_discrete_spectrum}},
  };
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    add_shared(sub, s);
    if (name == "hopf" || name == "eigfun")
      sub->add_option("--gamma", s.o.gamma, "eigenvector: default (null space), config (gamma_values) or re,im;...");
    if (name == "simulate" || name == "discrete-spectrum") sub->add_option("--m", s.o.m, "mesh intervals (even)");
    if (name == "simulate") {
      sub->add_option("--dt-div", s.o.dt_div, "time steps per mesh delay");
      sub->add_option("--t-end", s.o.t_end, "final time");
      sub->add_option("--history", s.o.history, "const:EPS | linear:EPS | file:PATH");
      sub->add_option("--stride", s.o.stride, "write every n-th step to the CSV");
      sub->add_option("--window", s.o.window, "window length for the attractor diagnostics");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = load_config(name, s.config, s.o);
    const fs::path out(s.out);
    fs::create_directories(out);
    std::ofstream(out / "resolved_config.json") << cfg.to_json().dump(2) << "\n";
    return commands.at(name).second(cfg, out);
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "nfield %s: %s\n", name.c_str(), e.what());
    return exit_for(e);
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "nfield %s: config error: %s\n", name.c_str(), e.what());
    return kConfig;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "nfield %s: %s\n", name.c_str(), e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "nfield %s: %s\n", name.c_str(), e.what());
    return kNumerical;
  }
}
