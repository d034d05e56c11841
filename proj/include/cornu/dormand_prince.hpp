#pragma once

// Embedded Dormand-Prince 5(4) integrator with PI step-size control.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cornu {

/// Raised when the step size underflows or the step budget runs out.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double location)
      : std::runtime_error(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Largest admissible |h| at position s.
  std::function<double(double)> max_step = [](double) { return 1e300; };
  std::size_t max_steps = 200'000'000;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace dp54 {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace dp54

/// Integrates y' = rhs(s, y) from s0 to s1 (either direction).
///
/// Steps are clipped so that every entry of `stops` (ordered along the
/// direction of integration, strictly inside (s0, s1]) is hit exactly.
/// `observer(s, y, at_stop)` runs after every accepted step.
template <std::size_t N, typename Rhs, typename Observer>
IntegrationStats integrate_dp54(Rhs&& rhs, double s0, std::array<double, N>& y, double s1,
                                std::span<const double> stops, const StepControl& ctl,
                                Observer&& observer) {
  using Vec = std::array<double, N>;
  IntegrationStats stats;
  if (s1 == s0) return stats;
  const double dir = s1 > s0 ? 1.0 : -1.0;
  constexpr double kSafety = 0.9;
  constexpr double kAlpha = 0.7 / 5.0;
  constexpr double kBeta = 0.4 / 5.0;

  auto axpy = [](const Vec& base, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
    Vec out = base;
    for (const auto& [coef, k] : terms) {
      if (coef == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) out[i] += h * coef * (*k)[i];
    }
    return out;
  };

  double s = s0;
  Vec k1, k2, k3, k4, k5, k6, k7;
  rhs(s, y, k1);
  double h = std::min(ctl.max_step(s), 1e-2 * std::abs(s1 - s0));
  h = std::max(h, 1e-12 * std::max(1.0, std::abs(s)));
  double err_prev = 1e-4;
  std::size_t next_stop = 0;

  while (dir * (s1 - s) > 0.0) {
    if (stats.accepted + stats.rejected >= ctl.max_steps) {
      throw IntegrationError("integrate_dp54: step budget exhausted", s);
    }
    h = std::min(h, ctl.max_step(s));
    double target = s1;
    bool hits_stop = false;
    while (next_stop < stops.size() && dir * (stops[next_stop] - s) <= 0.0) ++next_stop;
    if (next_stop < stops.size() && dir * (stops[next_stop] - s1) <= 0.0) target = stops[next_stop];
    double step = dir * h;
    const double remaining = std::abs(target - s);
    if (remaining <= h) {
      step = target - s;
      hits_stop = true;
    } else if (remaining < 1.5 * h) {
      // Split the approach so no sliver step is left before the stop.
      step = 0.5 * (target - s);
    }
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(s))) {
      std::ostringstream msg;
      msg << "integrate_dp54: step size underflow at s = " << s;
      throw IntegrationError(msg.str(), s);
    }

    using namespace dp54;
    rhs(s + c2 * step, axpy(y, step, {{a21, &k1}}), k2);
    rhs(s + c3 * step, axpy(y, step, {{a31, &k1}, {a32, &k2}}), k3);
    rhs(s + c4 * step, axpy(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), k4);
    rhs(s + c5 * step, axpy(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), k5);
    rhs(s + step, axpy(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), k6);
    const Vec y_new = axpy(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const double s_new = hits_stop ? target : s + step;
    rhs(s_new, y_new, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / static_cast<double>(N));

    if (err <= 1.0) {
      const double fac = err == 0.0 ? 5.0
                                    : std::clamp(kSafety * std::pow(err, -kAlpha) * std::pow(err_prev, kBeta),
                                                 0.2, 5.0);
      err_prev = std::max(err, 1e-4);
      s = s_new;
      y = y_new;
      k1 = k7;
      ++stats.accepted;
      observer(s, static_cast<const Vec&>(y), hits_stop);
      if (hits_stop) ++next_stop;
      // A clipped step says nothing about the natural step size.
      if (!hits_stop) h = std::abs(step) * fac;
    } else {
      ++stats.rejected;
      h = std::abs(step) * std::max(0.2, kSafety * std::pow(err, -1.0 / 5.0));
    }
  }
  return stats;
}

}  // namespace cornu
