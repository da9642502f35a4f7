/// @file config.hpp
/// Flat key=value run configuration: parsing, defaults and validation.

#pragma once

#include "efr/cases.hpp"
#include "efr/evolve.hpp"
#include "efr/filter.hpp"
#include "efr/relax.hpp"
#include "efr/thermo.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace efr {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  BenchmarkKind benchmark{BenchmarkKind::RisingBubble};
  double h{0.0};
  double dt{0.1};
  double t_final{0.0};  // 0 = use the benchmark default
  FilterConfig filter{};
  RelaxParams relax{};
  double solver_tol{1e-8};
  ConvectionScheme convection{ConvectionScheme::LinearUpwind};
  std::vector<double> snapshot_times;  // empty = use the benchmark default
  int diagnostic_stride{10};
  Constants constants{};
  std::string output_dir{"."};
  bool deterministic{false};
};

// Accepted keys: benchmark, h, dt, t_final, filter.kind, filter.alpha,
// filter.deconv_alpha, relax.chi, relax.xi, solver.tol, convection_scheme,
// snapshot_times, diagnostic_stride, gravity, R, cv. '#' starts a comment.
// Unknown keys and malformed lines raise ConfigError naming the key and
// line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Resolves defaults (t_final, snapshot times, deconvolution radius) and
// checks every documented invariant; throws ConfigError on violation.
void finalize_config(RunConfig& cfg);

// Deterministic "key = value" rendering of the resolved configuration,
// one line per key, sorted.
std::string render_config(const RunConfig& cfg);

}  // namespace efr
