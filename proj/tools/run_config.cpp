#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include "nfield/error.hpp"
#include "nfield/report.hpp"

namespace nfield::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw NumericalError(ErrorCode::ConfigError, what); }

template <class T>
T get(const nlohmann::json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad(std::string("'") + key + "' has the wrong type");
  }
}

cplx read_complex(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  bad("'" + key + "' must be a number or [re, im]");
}

std::vector<cplx> read_complex_array(const nlohmann::json& doc, const char* key) {
  std::vector<cplx> out;
  if (!doc.contains(key)) return out;
  if (!doc[key].is_array()) bad(std::string("'") + key + "' must be an array");
  for (std::size_t i = 0; i < doc[key].size(); ++i)
    out.push_back(read_complex(doc[key][i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

nlohmann::json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad("'" + path + "' is not valid JSON (" + e.what() + ")");
  }
}

}  // namespace

std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    double re = 0.0, im = 0.0;
    char comma = 0;
    std::stringstream is(item);
    if (!(is >> re)) bad("cannot read complex value '" + item + "'");
    if (is >> comma) {
      if (comma != ',' || !(is >> im)) bad("cannot read complex value '" + item + "'");
    }
    out.emplace_back(re, im);
  }
  return out;
}

RunConfig load_config(const std::string& command, const std::string& path, const Overrides& o) {
  RunConfig c;
  c.command = command;
  nlohmann::json doc = nlohmann::json::object();
  if (!path.empty()) doc = read_file(path);
  if (!doc.is_object()) bad("config must be a JSON object");

  if (doc.contains("model_file")) {
    const auto base = std::filesystem::path(path).parent_path();
    c.model = read_file((base / get<std::string>(doc, "model_file", "")).string());
  } else if (doc.contains("model")) {
    c.model = doc["model"];
  } else {
    bad("missing key 'model' (or 'model_file')");
  }
  if (!c.model.is_object()) bad("'model' must be an object");

  c.tol = get(doc, "tol", c.tol);
  c.grid = get(doc, "grid", c.grid);
  if (doc.contains("region")) {
    const auto& r = doc["region"];
    if (!r.is_object()) bad("'region' must be an object");
    c.region = {get(r, "re_min", c.region.re_min), get(r, "re_max", c.region.re_max),
                get(r, "im_min", c.region.im_min), get(r, "im_max", c.region.im_max)};
  }
  c.nx = get(doc, "nx", c.nx);
  c.ny = get(doc, "ny", c.ny);
  c.seeds = read_complex_array(doc, "seeds");
  c.gamma = get(doc, "gamma", c.gamma);
  c.gamma_values = read_complex_array(doc, "gamma_values");
  if (doc.contains("z")) c.z = read_complex(doc["z"], "z");
  c.m = get(doc, "m", c.m);
  c.dt_div = get(doc, "dt_div", c.dt_div);
  c.stride = get(doc, "stride", c.stride);
  c.t_end = get(doc, "t_end", c.t_end);
  c.window = get(doc, "window", c.window);
  c.history = get(doc, "history", c.history);

  if (o.alpha) c.model["alpha"] = *o.alpha;
  if (o.tau0) c.model["tau0"] = *o.tau0;
  if (o.r) c.model["r"] = *o.r;
  for (std::size_t i = 0; i < o.mu.size(); ++i) {
    if (!o.mu[i] && !o.c_hat[i]) continue;
    if (!c.model.contains("terms") || i >= c.model["terms"].size())
      bad("override of term " + std::to_string(i + 1) + " but the model has fewer terms");
    if (o.mu[i]) c.model["terms"][i]["mu"] = *o.mu[i];
    if (o.c_hat[i]) c.model["terms"][i]["c_hat"] = *o.c_hat[i];
  }
  if (o.tol) c.tol = *o.tol;
  if (o.grid) c.grid = *o.grid;
  if (o.m) c.m = *o.m;
  if (o.dt_div) c.dt_div = *o.dt_div;
  if (o.stride) c.stride = *o.stride;
  if (o.t_end) c.t_end = *o.t_end;
  if (o.window) c.window = *o.window;
  if (o.history) c.history = *o.history;
  if (o.gamma) c.gamma = *o.gamma;

  // validate early so no computation starts on a bad config
  c.model = c.params().to_json();
  if (c.grid < 3 || c.grid % 2 == 0) bad("'grid' must be odd and >= 3");
  if (!(c.tol > 0.0)) bad("'tol' must be > 0");
  if (c.nx < 1 || c.ny < 1) bad("'nx' and 'ny' must be >= 1");
  if (c.region.re_min >= c.region.re_max || c.region.im_min >= c.region.im_max) bad("'region' is empty");
  if (c.dt_div < 1) bad("'dt_div' must be >= 1");
  if (c.stride < 1) bad("'stride' must be >= 1");
  if (c.gamma == "config" && c.gamma_values.empty()) bad("'gamma' = config needs 'gamma_values'");
  return c;
}

nlohmann::json RunConfig::to_json() const {
  return {{"command", command},
          {"model", model},
          {"tol", tol},
          {"grid", grid},
          {"region", {{"re_min", region.re_min}, {"re_max", region.re_max}, {"im_min", region.im_min},
                      {"im_max", region.im_max}}},
          {"nx", nx},
          {"ny", ny},
          {"seeds", complex_json(seeds)},
          {"gamma", gamma},
          {"gamma_values", complex_json(gamma_values)},
          {"z", complex_json(z)},
          {"m", m},
          {"dt_div", dt_div},
          {"stride", stride},
          {"t_end", t_end},
          {"window", window},
          {"history", history}};
}

}  // namespace nfield::cli
