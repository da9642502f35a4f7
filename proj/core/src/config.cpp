#include "efr/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace efr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "': expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    const int d = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "': expected an integer, got '" + v + "'");
  }
}

bool near_multiple(double value, double step, double rel_tol = 1e-9) {
  const double q = value / step;
  return std::abs(q - std::round(q)) <= rel_tol * std::max(1.0, std::abs(q));
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool have_benchmark = false, have_h = false, have_kind = false, have_alpha = false;
  bool have_deconv = false;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line) +
                        ": expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line) + ": empty key");
    if (val.empty())
      throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                        "': empty value");

    if (key == "benchmark") {
      if (val == "rising_bubble")
        cfg.benchmark = BenchmarkKind::RisingBubble;
      else if (val == "density_current")
        cfg.benchmark = BenchmarkKind::DensityCurrent;
      else
        throw ConfigError("config line " + std::to_string(line) +
                          ": benchmark must be rising_bubble or density_current, got '" +
                          val + "'");
      have_benchmark = true;
    } else if (key == "h") {
      cfg.h = parse_double(val, key, line);
      have_h = true;
    } else if (key == "dt") {
      cfg.dt = parse_double(val, key, line);
    } else if (key == "t_final") {
      cfg.t_final = parse_double(val, key, line);
    } else if (key == "filter.kind") {
      if (val == "linear")
        cfg.filter.kind = FilterKind::Linear;
      else if (val == "smagorinsky")
        cfg.filter.kind = FilterKind::Smagorinsky;
      else if (val == "deconvolution")
        cfg.filter.kind = FilterKind::Deconvolution;
      else
        throw ConfigError("config line " + std::to_string(line) +
                          ": filter.kind must be linear, smagorinsky or deconvolution, "
                          "got '" + val + "'");
      have_kind = true;
    } else if (key == "filter.alpha") {
      cfg.filter.alpha = parse_double(val, key, line);
      have_alpha = true;
    } else if (key == "filter.deconv_alpha") {
      cfg.filter.deconv_alpha = parse_double(val, key, line);
      have_deconv = true;
    } else if (key == "relax.chi") {
      cfg.relax.chi = parse_double(val, key, line);
    } else if (key == "relax.xi") {
      cfg.relax.xi = parse_double(val, key, line);
    } else if (key == "solver.tol") {
      cfg.solver_tol = parse_double(val, key, line);
    } else if (key == "convection_scheme") {
      if (val == "linear_upwind")
        cfg.convection = ConvectionScheme::LinearUpwind;
      else if (val == "central")
        cfg.convection = ConvectionScheme::Central;
      else
        throw ConfigError("config line " + std::to_string(line) +
                          ": convection_scheme must be linear_upwind or central, got '" +
                          val + "'");
    } else if (key == "snapshot_times") {
      cfg.snapshot_times.clear();
      std::istringstream items(val);
      std::string item;
      while (std::getline(items, item, ','))
        cfg.snapshot_times.push_back(parse_double(trim(item), key, line));
      if (cfg.snapshot_times.empty())
        throw ConfigError("config line " + std::to_string(line) +
                          ": snapshot_times: empty list");
    } else if (key == "diagnostic_stride") {
      cfg.diagnostic_stride = parse_int(val, key, line);
    } else if (key == "gravity") {
      cfg.constants.g = parse_double(val, key, line);
    } else if (key == "R") {
      cfg.constants.R = parse_double(val, key, line);
    } else if (key == "cv") {
      cfg.constants.cv = parse_double(val, key, line);
    } else {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key +
                        "'");
    }
  }

  if (!have_benchmark) throw ConfigError("config: missing required key 'benchmark'");
  if (!have_h) throw ConfigError("config: missing required key 'h'");
  if (!have_kind) throw ConfigError("config: missing required key 'filter.kind'");
  if (!have_alpha) throw ConfigError("config: missing required key 'filter.alpha'");
  if (!have_deconv) cfg.filter.deconv_alpha = cfg.filter.alpha;
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void finalize_config(RunConfig& cfg) {
  const BenchmarkSpec spec = benchmark_spec(cfg.benchmark);
  if (cfg.t_final == 0.0) cfg.t_final = spec.t_final;
  if (cfg.snapshot_times.empty()) cfg.snapshot_times = spec.default_snapshot_times;

  if (cfg.h <= 0.0) throw ConfigError("config: h must be positive");
  if (!near_multiple(spec.x_max - spec.x_min, cfg.h) ||
      !near_multiple(spec.z_max - spec.z_min, cfg.h))
    throw ConfigError("config: h does not divide the benchmark domain extents");
  if (cfg.dt <= 0.0) throw ConfigError("config: dt must be positive");
  if (cfg.t_final <= 0.0) throw ConfigError("config: t_final must be positive");
  if (!near_multiple(cfg.t_final, cfg.dt))
    throw ConfigError("config: t_final must be an integer number of steps");
  for (double t : cfg.snapshot_times) {
    if (t < 0.0 || t > cfg.t_final + 1e-9 * cfg.t_final)
      throw ConfigError("config: snapshot time outside [0, t_final]");
    if (!near_multiple(t, cfg.dt) && t != 0.0)
      throw ConfigError("config: snapshot times must lie on the step grid");
  }
  std::sort(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
  if (cfg.filter.alpha < 0.0) throw ConfigError("config: filter.alpha must be >= 0");
  if (cfg.filter.kind == FilterKind::Deconvolution && cfg.filter.deconv_alpha <= 0.0)
    throw ConfigError("config: filter.deconv_alpha must be positive for the "
                      "deconvolution indicator");
  if (cfg.relax.chi < 0.0 || cfg.relax.chi > 1.0)
    throw ConfigError("config: relax.chi must lie in [0,1]");
  if (cfg.relax.xi < 0.0 || cfg.relax.xi > 1.0)
    throw ConfigError("config: relax.xi must lie in [0,1]");
  if (cfg.solver_tol <= 0.0) throw ConfigError("config: solver.tol must be positive");
  if (cfg.diagnostic_stride < 1)
    throw ConfigError("config: diagnostic_stride must be >= 1");
  if (cfg.constants.g < 0.0) throw ConfigError("config: gravity must be >= 0");
  if (cfg.constants.R <= 0.0) throw ConfigError("config: R must be positive");
  if (cfg.constants.cv <= 0.0) throw ConfigError("config: cv must be positive");
}

std::string render_config(const RunConfig& cfg) {
  auto fmt = [](double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  };
  std::map<std::string, std::string> kv;
  kv["benchmark"] = cfg.benchmark == BenchmarkKind::RisingBubble ? "rising_bubble"
                                                                 : "density_current";
  kv["h"] = fmt(cfg.h);
  kv["dt"] = fmt(cfg.dt);
  kv["t_final"] = fmt(cfg.t_final);
  kv["filter.kind"] = cfg.filter.kind == FilterKind::Linear        ? "linear"
                      : cfg.filter.kind == FilterKind::Smagorinsky ? "smagorinsky"
                                                                   : "deconvolution";
  kv["filter.alpha"] = fmt(cfg.filter.alpha);
  kv["filter.deconv_alpha"] = fmt(cfg.filter.deconv_alpha);
  kv["relax.chi"] = fmt(cfg.relax.chi);
  kv["relax.xi"] = fmt(cfg.relax.xi);
  kv["solver.tol"] = fmt(cfg.solver_tol);
  kv["convection_scheme"] =
      cfg.convection == ConvectionScheme::LinearUpwind ? "linear_upwind" : "central";
  {
    std::ostringstream ss;
    for (size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
      if (i) ss << ",";
      ss << fmt(cfg.snapshot_times[i]);
    }
    kv["snapshot_times"] = ss.str();
  }
  kv["diagnostic_stride"] = std::to_string(cfg.diagnostic_stride);
  kv["gravity"] = fmt(cfg.constants.g);
  kv["R"] = fmt(cfg.constants.R);
  kv["cv"] = fmt(cfg.constants.cv);
  kv["output_dir"] = cfg.output_dir;
  kv["deterministic"] = cfg.deterministic ? "true" : "false";

  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
  return out.str();
}

}  // namespace efr
