#include "cornu/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace cornu::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("config: " + key + ": expected a number, got '" + text + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v{};
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("config: " + key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

evo::Projection parse_projection(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "diabatic") return evo::Projection::diabatic;
  if (t == "superadiabatic") return evo::Projection::superadiabatic;
  throw ConfigError("config: " + key + ": expected diabatic or superadiabatic, got '" + text + "'");
}

std::string projection_name(evo::Projection p) {
  return p == evo::Projection::diabatic ? "diabatic" : "superadiabatic";
}

struct Entry {
  std::string key;
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};

void add_real(std::vector<Entry>& t, std::string key, double& ref) {
  const std::string k = key;
  t.push_back({std::move(key), [&ref] { return format(ref); },
               [&ref, k](const std::string& v) { ref = parse_double(k, v); }});
}

template <typename Int>
void add_int(std::vector<Entry>& t, std::string key, Int& ref) {
  const std::string k = key;
  t.push_back({std::move(key), [&ref] { return std::to_string(ref); },
               [&ref, k](const std::string& v) { ref = parse_int<Int>(k, v); }});
}

void add_ode(std::vector<Entry>& t, const std::string& prefix, evo::OdeConfig& ode) {
  add_real(t, prefix + "s_start", ode.s_start);
  add_real(t, prefix + "s_end", ode.s_end);
  add_real(t, prefix + "rel_tol", ode.rel_tol);
  add_real(t, prefix + "abs_tol", ode.abs_tol);
  add_real(t, prefix + "max_step_coeff", ode.max_step_coeff);
  add_int(t, prefix + "tail_window", ode.tail_window);
  const std::string pk = prefix + "projection";
  t.push_back({pk, [&ode] { return projection_name(ode.projection); },
               [&ode, pk](const std::string& v) { ode.projection = parse_projection(pk, v); }});
  add_int(t, prefix + "max_steps", ode.max_steps);
}

std::vector<Entry> table(AppConfig& c) {
  std::vector<Entry> t;
  auto& q = c.quadrature;
  t.push_back({"quadrature.eps_grid",
               [&q] {
                 std::string out;
                 for (std::size_t i = 0; i < q.eps_grid.size(); ++i) out += (i ? ", " : "") + format(q.eps_grid[i]);
                 return out;
               },
               [&q](const std::string& v) {
                 std::vector<double> grid;
                 std::stringstream ss(v);
                 std::string item;
                 while (std::getline(ss, item, ',')) grid.push_back(parse_double("quadrature.eps_grid", item));
                 q.eps_grid = std::move(grid);
               }});
  add_real(t, "quadrature.s_max", q.s_max);
  add_real(t, "quadrature.delta_excise", q.delta_excise);
  add_real(t, "quadrature.abs_tol", q.abs_tol);
  add_real(t, "quadrature.rel_tol", q.rel_tol);
  add_int(t, "quadrature.extrap_order", q.extrap_order);
  add_int(t, "quadrature.max_intervals", q.max_intervals);
  add_int(t, "quadrature.panel_points", q.panel_points);
  add_real(t, "quadrature.x_max", q.x_max);
  add_int(t, "quadrature.tail_average_levels", q.tail_average_levels);

  add_ode(t, "ode.", c.ode);

  auto& e = c.evolve;
  add_real(t, "evolve.lambda", e.lambda);
  add_real(t, "evolve.hopf_s_max", e.hopf_s_max);
  add_real(t, "evolve.hopf_spacing", e.hopf_spacing);
  add_real(t, "evolve.trajectory_spacing", e.trajectory_spacing);
  add_int(t, "evolve.block_products", e.block_products);
  add_int(t, "evolve.block_pairs", e.block_pairs);
  add_int(t, "evolve.block_max_length", e.block_max_length);
  add_real(t, "evolve.block_s_range", e.block_s_range);
  add_int(t, "evolve.seed", e.seed);

  auto& x = c.extract;
  add_real(t, "extract.lambda_min", x.lambda_min);
  add_real(t, "extract.lambda_max", x.lambda_max);
  add_int(t, "extract.points", x.points);
  add_int(t, "extract.degree", x.degree);
  add_int(t, "extract.synthetic_degree", x.synthetic_degree);
  add_int(t, "extract.max_order", x.max_order);
  add_real(t, "extract.condition_limit", x.condition_limit);
  add_ode(t, "extract.ode.", x.ode);

  auto& g = c.tolerance;
  add_real(t, "tolerance.block_abs", g.block_abs);
  add_real(t, "tolerance.I1_direct_rel", g.I1_direct_rel);
  add_real(t, "tolerance.I2_direct_rel", g.I2_direct_rel);
  add_real(t, "tolerance.I2_omega_rel", g.I2_omega_rel);
  add_real(t, "tolerance.I2_delta_abs", g.I2_delta_abs);
  add_real(t, "tolerance.I2_pv_abs", g.I2_pv_abs);
  add_real(t, "tolerance.I3_rel", g.I3_rel);
  add_real(t, "tolerance.J_rel", g.J_rel);
  add_real(t, "tolerance.J_imag_abs", g.J_imag_abs);
  add_real(t, "tolerance.zeta2_parametric_abs", g.zeta2_parametric_abs);
  add_real(t, "tolerance.zeta2_raw_abs", g.zeta2_raw_abs);
  add_real(t, "tolerance.z_abs", g.z_abs);
  add_real(t, "tolerance.a_abs", g.a_abs);
  add_real(t, "tolerance.hopf_abs", g.hopf_abs);
  add_real(t, "tolerance.extract_rel", g.extract_rel);
  add_real(t, "tolerance.synthetic_rel", g.synthetic_rel);
  return t;
}

}  // namespace

void AppConfig::set(const std::string& key, const std::string& value) {
  for (auto& entry : table(*this)) {
    if (entry.key == key) {
      entry.set(value);
      return;
    }
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

void AppConfig::validate() const {
  try {
    quadrature.validate();
    ode.validate();
    extract.ode.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
  if (!(evolve.lambda >= 0.0)) throw ConfigError("config: evolve.lambda must be >= 0");
  if (!(evolve.hopf_s_max > 0.0) || !(evolve.hopf_spacing > 0.0) || !(evolve.trajectory_spacing > 0.0)) {
    throw ConfigError("config: evolve spacings and hopf_s_max must be > 0");
  }
  if (evolve.block_max_length < 1) throw ConfigError("config: evolve.block_max_length must be >= 1");
  if (!(extract.lambda_min > 0.0) || !(extract.lambda_max > extract.lambda_min)) {
    throw ConfigError("config: need 0 < extract.lambda_min < extract.lambda_max");
  }
  if (extract.degree < 0 || extract.synthetic_degree < 0) throw ConfigError("config: extract degrees must be >= 0");
}

AppConfig parse_config(std::istream& in, const std::string& origin) {
  AppConfig cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& err) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": " + err.what());
    }
  }
  cfg.validate();
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

void dump_config(std::ostream& out, const AppConfig& cfg) {
  AppConfig copy = cfg;
  for (const auto& entry : table(copy)) out << entry.key << " = " << entry.get() << '\n';
}

nlohmann::json config_snapshot(const AppConfig& cfg) {
  AppConfig copy = cfg;
  nlohmann::json j = nlohmann::json::object();
  for (const auto& entry : table(copy)) j[entry.key] = entry.get();
  return j;
}

}  // namespace cornu::app
