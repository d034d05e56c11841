#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cornu/evolution.hpp"

namespace cornu::evo {

void OdeConfig::validate() const {
  if (!(s_start < s_end)) throw std::invalid_argument("OdeConfig: need s_start < s_end");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("OdeConfig: tolerances must be > 0");
  if (!(max_step_coeff > 0.0)) throw std::invalid_argument("OdeConfig: max_step_coeff must be > 0");
  if (tail_window < 1) throw std::invalid_argument("OdeConfig: tail_window must be >= 1");
  if (max_steps == 0) throw std::invalid_argument("OdeConfig: max_steps must be >= 1");
}

StepControl OdeConfig::step_control(const SpiralParams& params) const {
  StepControl ctl;
  ctl.rel_tol = rel_tol;
  ctl.abs_tol = abs_tol;
  ctl.max_steps = max_steps;
  const double c = max_step_coeff;
  const double a = params.a;
  ctl.max_step = [c, a](double s) { return c / (1.0 + a * std::abs(s)); };
  return ctl;
}

std::array<double, 3> rhs_so3(double s, const SO3State& st, const SpiralParams& params) {
  const double inv_r = params.inverse_radius();
  const double phase = 0.5 * params.a * s * s;
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  return {-sn * st.z * inv_r, c * st.z * inv_r, (sn * st.x - c * st.y) * inv_r};
}

std::array<complex, 4> spinor_hamiltonian(double s, const SpiralParams& params) {
  const double h = -0.5 * params.inverse_radius();
  const double phase = 0.5 * params.a * s * s;
  return {complex{}, h * std::polar(1.0, -phase), h * std::polar(1.0, phase), complex{}};
}

std::array<complex, 2> rhs_spinor(double s, const SpinorState& st, const SpiralParams& params) {
  const auto h = spinor_hamiltonian(s, params);
  const complex minus_i(0.0, -1.0);
  return {minus_i * (h[0] * st.a + h[1] * st.b), minus_i * (h[2] * st.a + h[3] * st.b)};
}

SO3State hopf_map(const SpinorState& st) noexcept {
  const complex ab = st.a * std::conj(st.b);
  return {2.0 * ab.real(), -2.0 * ab.imag(), std::norm(st.a) - std::norm(st.b)};
}

namespace {

struct So3Rhs {
  double a;
  double inv_r;
  void operator()(double s, const std::array<double, 3>& y, std::array<double, 3>& dy) const {
    const double phase = 0.5 * a * s * s;
    const double c = std::cos(phase);
    const double sn = std::sin(phase);
    dy[0] = -sn * y[2] * inv_r;
    dy[1] = c * y[2] * inv_r;
    dy[2] = (sn * y[0] - c * y[1]) * inv_r;
  }
};

// K spinor columns stored as (Re a, Im a, Re b, Im b) blocks.
template <std::size_t K>
struct SpinorRhs {
  double a;
  double g;
  void operator()(double s, const std::array<double, 4 * K>& y, std::array<double, 4 * K>& dy) const {
    const double phase = 0.5 * a * s * s;
    const double c = std::cos(phase);
    const double sn = std::sin(phase);
    for (std::size_t k = 0; k < K; ++k) {
      const double ar = y[4 * k], ai = y[4 * k + 1], br = y[4 * k + 2], bi = y[4 * k + 3];
      dy[4 * k] = -g * (c * bi - sn * br);
      dy[4 * k + 1] = g * (c * br + sn * bi);
      dy[4 * k + 2] = -g * (c * ai + sn * ar);
      dy[4 * k + 3] = g * (c * ar - sn * ai);
    }
  }
};

SO3State to_so3(const std::array<double, 3>& y) { return {y[0], y[1], y[2]}; }
SpinorState to_spinor(const std::array<double, 4>& y) { return {{y[0], y[1]}, {y[2], y[3]}}; }

void check_unit(double norm, const char* what) {
  if (!(std::abs(norm - 1.0) <= 1e-10)) {
    throw std::invalid_argument(std::string(what) + ": initial state is not normalised");
  }
}

void check_samples(std::span<const double> pts, const OdeConfig& cfg) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i] > cfg.s_start && pts[i] <= cfg.s_end) || (i > 0 && !(pts[i] > pts[i - 1]))) {
      throw std::invalid_argument("integrate: sample points must increase strictly inside the window");
    }
  }
}

template <typename State, std::size_t N, typename Rhs, typename Convert>
Trajectory<State> run(Rhs rhs, std::array<double, N> y, const State& state0, const SpiralParams& params,
                      const OdeConfig& cfg, std::span<const double> pts, Convert convert) {
  Trajectory<State> traj;
  const bool every_step = pts.empty();
  traj.samples.emplace_back(cfg.s_start, state0);
  auto record = [&](double s, const std::array<double, N>& v) {
    const State st = convert(v);
    const double drift = std::abs(st.norm() - 1.0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    const double allowed = 10.0 * cfg.rel_tol * (s - cfg.s_start) + 8.0 * std::numeric_limits<double>::epsilon();
    if (drift > allowed) traj.tolerance_met = false;
    traj.samples.emplace_back(s, st);
  };
  traj.stats = integrate_dp54<N>(rhs, cfg.s_start, y, cfg.s_end, pts, cfg.step_control(params),
                                 [&](double s, const std::array<double, N>& v, bool at_stop) {
                                   if (every_step || at_stop) record(s, v);
                                 });
  if (traj.samples.back().first != cfg.s_end) record(cfg.s_end, y);
  traj.final_state = convert(y);
  return traj;
}

}  // namespace

Trajectory<SO3State> integrate_so3(const SO3State& state0, const SpiralParams& params, const OdeConfig& cfg,
                                   std::span<const double> sample_points) {
  cfg.validate();
  check_unit(state0.norm(), "integrate_so3");
  check_samples(sample_points, cfg);
  return run<SO3State, 3>(So3Rhs{params.a, params.inverse_radius()}, {state0.x, state0.y, state0.z}, state0,
                          params, cfg, sample_points, to_so3);
}

Trajectory<SpinorState> integrate_spinor(const SpinorState& state0, const SpiralParams& params,
                                         const OdeConfig& cfg, std::span<const double> sample_points) {
  cfg.validate();
  check_unit(state0.norm(), "integrate_spinor");
  check_samples(sample_points, cfg);
  const std::array<double, 4> y{state0.a.real(), state0.a.imag(), state0.b.real(), state0.b.imag()};
  return run<SpinorState, 4>(SpinorRhs<1>{params.a, 0.5 * params.inverse_radius()}, y, state0, params, cfg,
                             sample_points, to_spinor);
}

SO3State propagate_so3(const SO3State& state0, double s_from, double s_to, const SpiralParams& params,
                       const OdeConfig& cfg) {
  cfg.validate();
  std::array<double, 3> y{state0.x, state0.y, state0.z};
  integrate_dp54<3>(So3Rhs{params.a, params.inverse_radius()}, s_from, y, s_to, {}, cfg.step_control(params),
                    [](double, const std::array<double, 3>&, bool) {});
  return to_so3(y);
}

double hopf_consistency(const SpinorState& spinor0, const SpiralParams& params, const OdeConfig& cfg,
                        std::span<const double> sample_points) {
  const auto spin = integrate_spinor(spinor0, params, cfg, sample_points);
  const auto rot = integrate_so3(hopf_map(spinor0), params, cfg, sample_points);
  double worst = 0.0;
  for (std::size_t i = 0; i < spin.samples.size() && i < rot.samples.size(); ++i) {
    const SO3State mapped = hopf_map(spin.samples[i].second);
    const SO3State& direct = rot.samples[i].second;
    worst = std::max({worst, std::abs(mapped.x - direct.x), std::abs(mapped.y - direct.y),
                      std::abs(mapped.z - direct.z)});
  }
  return worst;
}

void write_csv(std::ostream& out, const Trajectory<SO3State>& traj) {
  const auto old = out.precision(17);
  out << "s,x,y,z,norm_drift\n";
  for (const auto& [s, st] : traj.samples) {
    out << s << ',' << st.x << ',' << st.y << ',' << st.z << ',' << st.norm() - 1.0 << '\n';
  }
  out.precision(old);
}

void write_csv(std::ostream& out, const Trajectory<SpinorState>& traj) {
  const auto old = out.precision(17);
  out << "s,a_re,a_im,b_re,b_im,norm_drift\n";
  for (const auto& [s, st] : traj.samples) {
    out << s << ',' << st.a.real() << ',' << st.a.imag() << ',' << st.b.real() << ',' << st.b.imag() << ','
        << st.norm() - 1.0 << '\n';
  }
  out.precision(old);
}

namespace detail {

// Propagator columns for the limit estimator; exposed to limits.cpp only.
IntegrationStats propagate_columns(const SpiralParams& params, const OdeConfig& cfg,
                                   std::span<const double> stops,
                                   std::vector<std::array<double, 8>>& at_stops) {
  std::array<double, 8> y{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
  at_stops.clear();
  at_stops.reserve(stops.size());
  std::size_t next = 0;
  return integrate_dp54<8>(SpinorRhs<2>{params.a, 0.5 * params.inverse_radius()}, cfg.s_start, y, cfg.s_end,
                           stops, cfg.step_control(params),
                           [&](double s, const std::array<double, 8>& v, bool at_stop) {
                             if (at_stop && next < stops.size() && s == stops[next]) {
                               at_stops.push_back(v);
                               ++next;
                             }
                           });
}

}  // namespace detail

}  // namespace cornu::evo
