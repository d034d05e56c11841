#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cornu/evolution.hpp"

namespace cornu::evo {

namespace detail {
IntegrationStats propagate_columns(const SpiralParams& params, const OdeConfig& cfg,
                                   std::span<const double> stops,
                                   std::vector<std::array<double, 8>>& at_stops);
}  // namespace detail

namespace {

using Vec2 = std::array<complex, 2>;

// Lab-frame spinor for a vector given in the superadiabatic frame at s.
//
// Rotating frame: (a e^{i phi/2}, b e^{-i phi/2}) with H = -(a s/2) sz - g sx.
// Adiabatic frame: rotation by theta = atan2(g, a s/2) about y, which leaves
// H_ad = -E sz - (theta'/2) sy; its eigenbasis is tilted by
// theta1 = atan2(theta'/2, E).
Vec2 superadiabatic_to_lab(double s, const SpiralParams& params, bool ground) {
  const double g = 0.5 * params.inverse_radius();
  const double delta = 0.5 * params.a * s;
  const double energy = std::hypot(delta, g);
  const double theta = std::atan2(g, delta);
  const double theta_dot = -g * 0.5 * params.a / (energy * energy);
  const double theta1 = std::atan2(0.5 * theta_dot, energy);
  const double c1 = std::cos(0.5 * theta1);
  const double s1 = std::sin(0.5 * theta1);
  const Vec2 sa = ground ? Vec2{complex(c1, 0.0), complex(0.0, s1)} : Vec2{complex(0.0, s1), complex(c1, 0.0)};
  const double c = std::cos(0.5 * theta);
  const double sn = std::sin(0.5 * theta);
  const Vec2 rot{c * sa[0] - sn * sa[1], sn * sa[0] + c * sa[1]};
  const double half_phase = 0.25 * params.a * s * s;
  return {rot[0] * std::polar(1.0, -half_phase), rot[1] * std::polar(1.0, half_phase)};
}

struct Mat2 {
  complex m00, m01, m10, m11;
};

Mat2 from_columns(const std::array<double, 8>& v) {
  return {{v[0], v[1]}, {v[4], v[5]}, {v[2], v[3]}, {v[6], v[7]}};
}

Vec2 mat_vec(const Mat2& m, const Vec2& x) { return {m.m00 * x[0] + m.m01 * x[1], m.m10 * x[0] + m.m11 * x[1]}; }

Vec2 solve(const Mat2& m, const Vec2& x) {
  const complex det = m.m00 * m.m11 - m.m01 * m.m10;
  return {(m.m11 * x[0] - m.m01 * x[1]) / det, (m.m00 * x[1] - m.m10 * x[0]) / det};
}

double unitarity_defect(const Mat2& m) {
  const double n0 = std::sqrt(std::norm(m.m00) + std::norm(m.m10));
  const double n1 = std::sqrt(std::norm(m.m01) + std::norm(m.m11));
  const double overlap = std::abs(std::conj(m.m00) * m.m01 + std::conj(m.m10) * m.m11);
  return std::max({std::abs(n0 - 1.0), std::abs(n1 - 1.0), overlap});
}

// Points uniform in u = s^2 over the window, ordered by increasing s.
std::vector<double> window(double edge, double du, std::size_t count, bool leading) {
  std::vector<double> s(count);
  const double u_edge = edge * edge;
  for (std::size_t j = 0; j < count; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(count - 1);
    if (leading) {
      s[j] = -std::sqrt(u_edge - du * frac);
    } else {
      s[j] = std::sqrt(u_edge - du + du * frac);
    }
  }
  if (leading) s.front() = edge;
  else s.back() = edge;
  return s;
}

double trapezoid_weight(std::size_t j, std::size_t count) { return j == 0 || j + 1 == count ? 0.5 : 1.0; }

}  // namespace

AsymptoticLimits asymptotic_limits(const SpiralParams& params, const OdeConfig& cfg) {
  cfg.validate();
  AsymptoticLimits out;
  if (params.inverse_radius() == 0.0) {
    out.z = {1.0, 0.0};
    out.a_magnitude = {1.0, 0.0};
    return out;
  }
  const double du = static_cast<double>(cfg.tail_window) * 4.0 * kPi / params.a;
  if (!(cfg.s_start < 0.0 && cfg.s_end > 0.0) || !(cfg.s_start * cfg.s_start > du) ||
      !(cfg.s_end * cfg.s_end > du)) {
    throw std::invalid_argument("asymptotic_limits: window too short for the requested tail averaging");
  }
  const std::size_t count = 16 * static_cast<std::size_t>(cfg.tail_window) + 1;
  const auto lead = window(cfg.s_start, du, count, true);
  const auto trail = window(cfg.s_end, du, count, false);

  std::vector<double> stops(lead.begin() + 1, lead.end());
  stops.insert(stops.end(), trail.begin(), trail.end());
  std::vector<std::array<double, 8>> columns;
  out.stats = detail::propagate_columns(params, cfg, stops, columns);
  if (columns.size() != stops.size()) throw IntegrationError("asymptotic_limits: missed an output point", cfg.s_end);

  std::vector<Mat2> at_lead{Mat2{1.0, 0.0, 0.0, 1.0}};
  for (std::size_t j = 0; j + 1 < count; ++j) at_lead.push_back(from_columns(columns[j]));
  std::vector<Mat2> at_trail;
  for (std::size_t i = 0; i < count; ++i) at_trail.push_back(from_columns(columns[count - 1 + i]));

  double drift = 0.0;
  for (const auto& m : at_lead) drift = std::max(drift, unitarity_defect(m));
  for (const auto& m : at_trail) drift = std::max(drift, unitarity_defect(m));

  const bool sa = cfg.projection == Projection::superadiabatic;
  // Start vectors pulled back to s_start: w_j = V(s_j)^{-1} psi_j.
  std::vector<Vec2> pulled;
  for (std::size_t j = 0; j < count; ++j) {
    const Vec2 psi0 = sa ? superadiabatic_to_lab(lead[j], params, false) : Vec2{complex(1.0), complex(0.0)};
    pulled.push_back(solve(at_lead[j], psi0));
  }
  std::vector<Vec2> probes;
  for (std::size_t i = 0; i < count; ++i) {
    probes.push_back(sa ? superadiabatic_to_lab(trail[i], params, true) : Vec2{complex(1.0), complex(0.0)});
  }

  double z_sum = 0.0, a_sum = 0.0, w_sum = 0.0;
  double z_lo = 2.0, z_hi = -2.0, a_lo = 2.0, a_hi = -1.0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      const Vec2 psi = mat_vec(at_trail[i], pulled[j]);
      const complex amp = std::conj(probes[i][0]) * psi[0] + std::conj(probes[i][1]) * psi[1];
      const double mag = std::abs(amp);
      const double z = 2.0 * mag * mag - 1.0;
      const double w = trapezoid_weight(i, count) * trapezoid_weight(j, count);
      z_sum += w * z;
      a_sum += w * mag;
      w_sum += w;
      z_lo = std::min(z_lo, z);
      z_hi = std::max(z_hi, z);
      a_lo = std::min(a_lo, mag);
      a_hi = std::max(a_hi, mag);
    }
  }
  out.z = {z_sum / w_sum, 0.5 * (z_hi - z_lo) + 2.0 * drift};
  out.a_magnitude = {a_sum / w_sum, 0.5 * (a_hi - a_lo) + drift};
  return out;
}

LimitEstimate z_infinity(const SpiralParams& params, const OdeConfig& cfg) {
  return asymptotic_limits(params, cfg).z;
}

LimitEstimate a_infinity_magnitude(const SpiralParams& params, const OdeConfig& cfg) {
  return asymptotic_limits(params, cfg).a_magnitude;
}

}  // namespace cornu::evo
