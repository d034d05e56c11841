#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cornu/core.hpp"
#include "cornu/evolution.hpp"

namespace cornu::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pass/fail gates. `_rel` entries scale with the reference value.
struct Tolerances {
  double block_abs = 1e-13;
  double I1_direct_rel = 1e-5;
  double I2_direct_rel = 1e-2;
  double I2_omega_rel = 1e-5;
  double I2_delta_abs = 0.0;
  double I2_pv_abs = 1e-5;
  double I3_rel = 1e-4;
  double J_rel = 1e-4;
  double J_imag_abs = 1e-6;
  double zeta2_parametric_abs = 1e-8;
  double zeta2_raw_abs = 1e-3;
  double z_abs = 2e-3;
  double a_abs = 2e-3;
  double hopf_abs = 1e-8;
  double extract_rel = 1e-2;
  double synthetic_rel = 1e-8;
};

struct EvolveSettings {
  double lambda = 1.0;
  /// Hopf comparison runs on [-hopf_s_max, hopf_s_max] at this spacing.
  double hopf_s_max = 50.0;
  double hopf_spacing = 0.05;
  /// Spacing of exported trajectory rows.
  double trajectory_spacing = 0.05;
  /// Block-structure points checked by verify-basics.
  std::size_t block_products = 1000;
  std::size_t block_pairs = 1000;
  std::size_t block_max_length = 6;
  double block_s_range = 10.0;
  std::uint64_t seed = 20240607;
};

struct ExtractSettings {
  double lambda_min = 0.02;
  double lambda_max = 0.6;
  std::size_t points = 32;
  int degree = 9;
  int synthetic_degree = 12;
  std::size_t max_order = 5;
  double condition_limit = 1e10;
  /// Integration settings used for every z sample of the fit.
  evo::OdeConfig ode{-100.0, 100.0, 1e-12, 1e-14, 0.5, 8, evo::Projection::superadiabatic};
};

struct AppConfig {
  QuadratureConfig quadrature;
  evo::OdeConfig ode;
  EvolveSettings evolve;
  ExtractSettings extract;
  Tolerances tolerance;

  /// Assigns one dotted key; throws ConfigError for unknown keys or values
  /// that do not parse.
  void set(const std::string& key, const std::string& value);

  /// Throws ConfigError if any section fails its own validation.
  void validate() const;
};

/// Reads `key = value` lines; `#` starts a comment. Errors carry the line.
AppConfig parse_config(std::istream& in, const std::string& origin = "<config>");

/// Throws ConfigError naming the path when it cannot be opened.
AppConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, in a form parse_config reads back.
void dump_config(std::ostream& out, const AppConfig& cfg);

nlohmann::json config_snapshot(const AppConfig& cfg);

}  // namespace cornu::app
