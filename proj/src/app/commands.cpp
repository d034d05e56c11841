#include "cornu/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "cornu/evolution.hpp"
#include "cornu/extraction.hpp"
#include "cornu/quadrature.hpp"

#ifndef CORNU_VERSION
#define CORNU_VERSION "0.0.0"
#endif

namespace cornu::app {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

nlohmann::json value_json(complex v, bool complex_valued) {
  if (complex_valued) return {{"re", v.real()}, {"im", v.imag()}};
  return v.real();
}

nlohmann::json estimate_json(const quad::Estimate<double>& e) {
  return {{"value", e.value}, {"uncertainty", e.uncertainty}, {"converged", e.converged}};
}

std::vector<double> spaced_points(double lo, double hi, double spacing) {
  std::vector<double> pts;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / spacing));
  for (std::size_t k = 1; k <= n; ++k) pts.push_back(lo + spacing * static_cast<double>(k));
  if (pts.empty() || pts.back() < hi) pts.push_back(hi);
  // Guard against the last spaced point rounding onto or past hi.
  while (pts.size() > 1 && pts[pts.size() - 2] >= hi) pts.erase(pts.end() - 2);
  return pts;
}

}  // namespace

int CommandResult::exit_code() const noexcept {
  if (flagged) return kExitTolerance;
  for (const auto& r : records) {
    if (!r.pass()) return kExitTolerance;
  }
  return kExitPass;
}

CommandResult run_verify_basics(const AppConfig& cfg) {
  CommandResult out;
  out.command = "verify-basics";
  const double tol = cfg.quadrature.abs_tol;
  const double fresnel_ref = std::sqrt(kPi / 2.0);
  for (auto kind : {quad::FresnelKind::cos, quad::FresnelKind::sin}) {
    Stopwatch t;
    const auto r = quad::fresnel_full_line(kind, cfg.quadrature);
    const char* name = kind == quad::FresnelKind::cos ? "fresnel_cos" : "fresnel_sin";
    out.records.push_back(make_record(name, r.value, fresnel_ref, Route::direct, t.seconds(), tol));
    out.details[name] = estimate_json(r);
  }
  {
    Stopwatch t;
    const auto r = quad::dirichlet_integral(cfg.quadrature);
    out.records.push_back(make_record("dirichlet", r.value, kPi / 2.0, Route::direct, t.seconds(), tol));
    out.details["dirichlet"] = estimate_json(r);
  }
  {
    Stopwatch t;
    const auto& e = cfg.evolve;
    const auto rep = evo::block_structure_suite(e.block_products, e.block_pairs, e.block_max_length, e.block_s_range,
                                                SpiralParams::from_lambda(e.lambda), e.seed);
    out.records.push_back(make_record("block_structure", rep.max_deviation(), 0.0, Route::closed_form, t.seconds(),
                                      cfg.tolerance.block_abs));
    out.details["block_structure"] = {{"zero_block", rep.zero_block},
                                      {"block_formula", rep.block_formula},
                                      {"chi_identity", rep.chi_identity},
                                      {"products", rep.products},
                                      {"pairs", rep.pairs}};
  }
  return out;
}

CommandResult run_integrals(const std::vector<int>& orders, IntegralRoute route, bool with_j, const AppConfig& cfg) {
  if (orders.empty()) throw std::invalid_argument("integrals: no orders requested");
  for (int n : orders) {
    const bool ok = route == IntegralRoute::direct ? (n == 1 || n == 2) : (n == 2 || n == 3);
    if (!ok) {
      throw quad::CostGateError("integrals: n = " + std::to_string(n) + " is not available on the " +
                                (route == IntegralRoute::direct ? "direct route (cost gate: n <= 2)"
                                                                : "omega route (implemented for n = 2, 3)"));
    }
  }
  CommandResult out;
  out.command = "integrals";
  const auto& tol = cfg.tolerance;
  for (int n : orders) {
    const std::string suffix = std::to_string(n);
    const double ref = closed_form_In(n);
    if (route == IntegralRoute::direct) {
      Stopwatch t;
      const auto r = quad::direct_In(n, cfg.quadrature);
      const double rel = n == 1 ? tol.I1_direct_rel : tol.I2_direct_rel;
      out.records.push_back(make_record("I" + suffix + "_direct", r.value, ref, Route::direct, t.seconds(), rel * ref));
      out.details["I" + suffix + "_direct"] = estimate_json(r);
      if (with_j) {
        Stopwatch tj;
        const auto j = quad::direct_Jn(n, cfg.quadrature);
        const double jref = closed_form_Jn(n);
        const double secs = tj.seconds();
        out.records.push_back(make_record("J" + suffix + "_direct", j.value, complex(jref, 0.0), true, Route::direct,
                                          secs, tol.J_rel * jref));
        out.records.push_back(
            make_record("J" + suffix + "_direct_imag", j.value.imag(), 0.0, Route::direct, secs, tol.J_imag_abs));
        out.details["J" + suffix + "_direct"] = {{"re", j.value.real()}, {"im", j.value.imag()},
                                                 {"uncertainty", j.uncertainty}};
      }
    } else if (n == 2) {
      Stopwatch t;
      const auto r = quad::I2_omega(cfg.quadrature);
      const double secs = t.seconds();
      out.records.push_back(make_record("I2_omega", r.total.value, ref, Route::omega, secs, tol.I2_omega_rel * ref));
      out.records.push_back(make_record("I2_delta", r.delta_part, 0.5, Route::omega, secs, tol.I2_delta_abs));
      out.records.push_back(make_record("I2_pv", r.pv_part.value, -0.25, Route::omega, secs, tol.I2_pv_abs));
      out.details["I2_omega"] = estimate_json(r.total);
      out.details["I2_pv"] = estimate_json(r.pv_part);
    } else {
      Stopwatch t;
      const auto r = quad::I3_reduced(cfg.quadrature);
      const double secs = t.seconds();
      out.records.push_back(make_record("I3_omega", r.total.value, ref, Route::omega, secs, tol.I3_rel * ref));
      out.records.push_back(make_record("I3_dimensionless", r.dimensionless.value, 1.0 / 24.0, Route::omega, secs,
                                        tol.I3_rel / 24.0));
      out.details["I3_omega"] = estimate_json(r.total);
      out.details["I3_tilde"] = estimate_json(r.tilde);
    }
  }
  return out;
}

CommandResult run_evolve(const EvolveRequest& req, const AppConfig& cfg) {
  SpiralParams params;
  if (req.a || req.R) {
    if (!(req.a && req.R)) throw std::invalid_argument("evolve: --a and --R must be given together");
    if (req.lambda) throw std::invalid_argument("evolve: give either --lambda or --a/--R");
    params = SpiralParams::make(*req.a, *req.R);
  } else {
    const double lambda = req.lambda.value_or(cfg.evolve.lambda);
    if (!(lambda >= 0.0)) throw std::invalid_argument("evolve: lambda must be >= 0");
    params = SpiralParams::from_lambda(lambda);
  }
  const double lambda = lambda_of(params);
  CommandResult out;
  out.command = "evolve";
  const auto& tol = cfg.tolerance;

  Stopwatch t;
  const auto lim = evo::asymptotic_limits(params, cfg.ode);
  const double secs = t.seconds();
  const double z_ref = closed_form_z_infinity(lambda);
  const double a_ref = std::exp(-kPi * lambda / 8.0);
  out.records.push_back(make_record("z_infinity", lim.z.value, z_ref, Route::ode_extraction, secs, tol.z_abs));
  out.records.push_back(
      make_record("a_infinity_magnitude", lim.a_magnitude.value, a_ref, Route::ode_extraction, secs, tol.a_abs));
  const double a = lim.a_magnitude.value;
  out.records.push_back(make_record("z_from_a", 2.0 * a * a - 1.0, lim.z.value, Route::ode_extraction, secs,
                                    lim.z.uncertainty + 4.0 * a * lim.a_magnitude.uncertainty));

  Stopwatch th;
  evo::OdeConfig hopf_cfg = cfg.ode;
  hopf_cfg.s_start = -cfg.evolve.hopf_s_max;
  hopf_cfg.s_end = cfg.evolve.hopf_s_max;
  const auto pts = spaced_points(hopf_cfg.s_start, hopf_cfg.s_end, cfg.evolve.hopf_spacing);
  const double hopf = evo::hopf_consistency(SpinorState{}, params, hopf_cfg, pts);
  out.records.push_back(make_record("hopf_deviation", hopf, 0.0, Route::ode_extraction, th.seconds(), tol.hopf_abs));

  out.details = {{"lambda", lambda},
                 {"a", params.a},
                 {"R", params.R},
                 {"z_uncertainty", lim.z.uncertainty},
                 {"a_uncertainty", lim.a_magnitude.uncertainty},
                 {"accepted_steps", lim.stats.accepted},
                 {"rejected_steps", lim.stats.rejected},
                 {"projection", cfg.ode.projection == evo::Projection::diabatic ? "diabatic" : "superadiabatic"}};

  if (req.trajectory_path) {
    std::ofstream csv(*req.trajectory_path);
    if (!csv) throw std::runtime_error("evolve: cannot write trajectory file '" + *req.trajectory_path + "'");
    const auto rows = spaced_points(cfg.ode.s_start, cfg.ode.s_end, cfg.evolve.trajectory_spacing);
    if (req.spinor_columns) {
      evo::write_csv(csv, evo::integrate_spinor(SpinorState{}, params, cfg.ode, rows));
    } else {
      evo::write_csv(csv, evo::integrate_so3(SO3State{}, params, cfg.ode, rows));
    }
    out.details["trajectory"] = {{"rows", rows.size() + 1}, {"columns", req.spinor_columns ? "spinor" : "so3"}};
  }
  return out;
}

CommandResult run_extract(const AppConfig& cfg, bool synthetic, unsigned threads) {
  const auto& x = cfg.extract;
  CommandResult out;
  out.command = "extract";
  Stopwatch t;
  const auto grid = fit::chebyshev_grid(x.lambda_min, x.lambda_max, x.points);
  const int degree = synthetic ? x.synthetic_degree : x.degree;
  if (degree > 0 && grid.size() < 2 * static_cast<std::size_t>(degree + 1)) {
    throw std::invalid_argument("extract: degree " + std::to_string(degree) + " needs at least " +
                                std::to_string(2 * (degree + 1)) + " samples, extract.points = " +
                                std::to_string(grid.size()));
  }
  const auto samples = synthetic ? fit::synthetic_z_curve(grid) : fit::sample_z_curve(grid, x.ode, threads, x.lambda_max);
  const auto result = fit::extract_coefficients(samples, degree, x.lambda_max, x.condition_limit);
  const double secs = t.seconds();
  out.records = fit::verification_report(result, synthetic ? cfg.tolerance.synthetic_rel : cfg.tolerance.extract_rel,
                                         x.max_order, secs);
  out.flagged = result.ill_conditioned;
  out.details = result;
  out.details["synthetic"] = synthetic;
  out.sweep_header = {"lambda", "z", "uncertainty"};
  for (const auto& s : samples) out.sweep.push_back({s.lambda, static_cast<double>(s.value), s.uncertainty});
  return out;
}

CommandResult run_zeta2(Zeta2Choice method, const AppConfig& cfg) {
  CommandResult out;
  out.command = "zeta2";
  const double ref = kPi * kPi / 6.0;
  std::optional<quad::Estimate<double>> raw, param;
  if (method != Zeta2Choice::raw) {
    Stopwatch t;
    param = quad::zeta2_check(quad::Zeta2Method::parametric, cfg.quadrature);
    out.records.push_back(
        make_record("zeta2_parametric", param->value, ref, Route::omega, t.seconds(), cfg.tolerance.zeta2_parametric_abs));
    out.details["zeta2_parametric"] = estimate_json(*param);
  }
  if (method != Zeta2Choice::parametric) {
    Stopwatch t;
    raw = quad::zeta2_check(quad::Zeta2Method::raw, cfg.quadrature);
    out.records.push_back(make_record("zeta2_raw", raw->value, ref, Route::omega, t.seconds(), cfg.tolerance.zeta2_raw_abs));
    out.details["zeta2_raw"] = estimate_json(*raw);
  }
  if (raw && param) {
    out.records.push_back(make_record("zeta2_cross", raw->value, param->value, Route::omega, 0.0,
                                      raw->uncertainty + param->uncertainty));
  }
  return out;
}

nlohmann::json record_json(const VerificationRecord& rec) {
  return {{"name", rec.name},
          {"computed", value_json(rec.computed, rec.complex_valued)},
          {"reference", value_json(rec.reference, rec.complex_valued)},
          {"abs_err", rec.abs_err},
          {"rel_err", rec.rel_err},
          {"route", std::string(to_string(rec.route))},
          {"runtime_seconds", rec.runtime_seconds},
          {"tolerance", rec.tolerance},
          {"pass", rec.pass()}};
}

nlohmann::json make_manifest(const CommandResult& result, const AppConfig& cfg, const ManifestInfo& info) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : result.records) records.push_back(record_json(r));
  return {{"command", result.command},
          {"command_line", info.command_line},
          {"config", config_snapshot(cfg)},
          {"records", records},
          {"details", result.details},
          {"flagged", result.flagged},
          {"exit_code", result.exit_code()},
          {"version", version_string()},
          {"started_at", info.started_at},
          {"finished_at", info.finished_at},
          {"threads", info.threads}};
}

std::string records_csv(const std::vector<VerificationRecord>& records) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "name,computed_re,computed_im,reference_re,reference_im,abs_err,rel_err,route,runtime_seconds,tolerance,pass\n";
  for (const auto& r : records) {
    out << r.name << ',' << r.computed.real() << ',' << r.computed.imag() << ',' << r.reference.real() << ','
        << r.reference.imag() << ',' << r.abs_err << ',' << r.rel_err << ',' << to_string(r.route) << ','
        << r.runtime_seconds << ',' << r.tolerance << ',' << (r.pass() ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string version_string() { return CORNU_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cornu::app
