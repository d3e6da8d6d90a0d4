#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfield/model.hpp"
#include "nfield/spectrum.hpp"

namespace nfield::cli {

// Exit statuses shared by every subcommand.
enum Exit : int { kOk = 0, kConfig = 2, kNumerical = 3, kPrecondition = 4 };

// Command-line values that shadow the config file. Unset fields leave the
// file (or the built-in default) in place.
struct Overrides {
  std::optional<double> alpha, tau0, r;
  std::vector<std::optional<double>> mu = std::vector<std::optional<double>>(4);
  std::vector<std::optional<double>> c_hat = std::vector<std::optional<double>>(4);
  std::optional<double> tol;
  std::optional<int> grid;
  std::optional<int> m, dt_div, stride;
  std::optional<double> t_end, window;
  std::optional<std::string> history, gamma;
};

// Everything a run needs, after merging file and flags. Serializes back to a
// config document that reproduces the run.
struct RunConfig {
  std::string command;
  nlohmann::json model;  // validated by ModelParams::from_json
  double tol = 1e-12;
  int grid = SpatialGrid::kDefaultNodes;
  Region region{-2.0, 0.5, -8.0, 8.0};
  int nx = 40, ny = 40;
  std::vector<cplx> seeds;                  // empty: pick from a spectrum scan
  std::string gamma = "default";            // "default", "config" or inline "re,im;re,im;..."
  std::vector<cplx> gamma_values;           // used with gamma = "config"
  cplx z{1.0, 0.0};                         // resolvent-check
  int m = 50, dt_div = 4, stride = 10;      // simulate, discrete-spectrum
  double t_end = 400.0, window = 40.0;
  std::string history = "const:0.01";

  ModelParams params() const { return ModelParams::from_json(model); }
  nlohmann::json to_json() const;
};

// Reads `path` (may be empty) and applies overrides. Throws
// NumericalError(CONFIG_ERROR) with the offending key in the message.
RunConfig load_config(const std::string& command, const std::string& path, const Overrides& o);

std::vector<cplx> parse_complex_list(const std::string& text);

}  // namespace nfield::cli
