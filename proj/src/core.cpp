#include "cornu/core.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cornu {

SpiralParams SpiralParams::make(double a, double R) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("SpiralParams: a must be positive and finite");
  if (!(R > 0.0)) throw std::invalid_argument("SpiralParams: R must be positive");
  return SpiralParams{a, R};
}

SpiralParams SpiralParams::from_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("SpiralParams::from_lambda: lambda must be finite and >= 0");
  }
  if (lambda == 0.0) return SpiralParams{2.0, std::numeric_limits<double>::infinity()};
  return SpiralParams{2.0, 1.0 / std::sqrt(lambda)};
}

double SpiralParams::inverse_radius() const noexcept { return std::isinf(R) ? 0.0 : 1.0 / R; }

double lambda_of(const SpiralParams& params) noexcept {
  const double inv_r = params.inverse_radius();
  return 2.0 * inv_r * inv_r / params.a;
}

namespace {

double factorial_checked(int n) {
  if (n < 1) throw std::invalid_argument("closed form requires n >= 1");
  // 170! is the largest factorial representable in a double.
  if (n > 170) throw std::overflow_error("n! overflows double for n > 170");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

double power(double base, int n) {
  double p = 1.0;
  for (int k = 0; k < n; ++k) p *= base;
  return p;
}

}  // namespace

double closed_form_In(int n) {
  const double f = factorial_checked(n);
  return 2.0 / f * power(kPi / 4.0, n);
}

double closed_form_Jn(int n) {
  const double f = factorial_checked(n);
  return power(kPi / 2.0, n) / f;
}

double closed_form_z_infinity(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("closed_form_z_infinity: lambda must be >= 0");
  return 2.0 * std::exp(-kPi * lambda / 4.0) - 1.0;
}

double SO3State::norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }

double SpinorState::norm() const noexcept { return std::sqrt(std::norm(a) + std::norm(b)); }

void QuadratureConfig::validate() const {
  if (eps_grid.empty()) throw std::invalid_argument("quadrature: eps_grid must be nonempty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) throw std::invalid_argument("quadrature: eps_grid entries must be > 0");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) {
      throw std::invalid_argument("quadrature: eps_grid must be strictly decreasing");
    }
  }
  if (!(s_max > 0.0)) throw std::invalid_argument("quadrature: s_max must be > 0");
  if (!(delta_excise > 0.0) || !(delta_excise < s_max)) {
    throw std::invalid_argument("quadrature: need 0 < delta_excise < s_max");
  }
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0)) throw std::invalid_argument("quadrature: tolerances must be >= 0");
  if (extrap_order < 0) throw std::invalid_argument("quadrature: extrap_order must be >= 0");
  if (max_intervals < 1) throw std::invalid_argument("quadrature: max_intervals must be >= 1");
  if (panel_points < 3) throw std::invalid_argument("quadrature: panel_points must be >= 3");
  if (!(x_max > 8.0 * kPi)) throw std::invalid_argument("quadrature: x_max must exceed 8 pi");
  if (tail_average_levels < 0) throw std::invalid_argument("quadrature: tail_average_levels must be >= 0");
}

std::string_view to_string(Route route) noexcept {
  switch (route) {
    case Route::direct: return "direct";
    case Route::omega: return "omega";
    case Route::ode_extraction: return "ode-extraction";
    case Route::closed_form: return "closed-form";
  }
  return "unknown";
}

VerificationRecord make_record(std::string name, complex computed, complex reference,
                               bool complex_valued, Route route, double runtime_seconds,
                               double tolerance) {
  VerificationRecord r;
  r.name = std::move(name);
  r.computed = computed;
  r.reference = reference;
  r.complex_valued = complex_valued;
  r.abs_err = std::abs(computed - reference);
  if (!std::isfinite(r.abs_err)) r.abs_err = std::numeric_limits<double>::infinity();
  r.rel_err = r.abs_err / std::max(std::abs(reference), DBL_MIN);
  r.route = route;
  r.runtime_seconds = runtime_seconds;
  r.tolerance = tolerance;
  return r;
}

VerificationRecord make_record(std::string name, double computed, double reference, Route route,
                               double runtime_seconds, double tolerance) {
  return make_record(std::move(name), complex(computed, 0.0), complex(reference, 0.0), false, route,
                     runtime_seconds, tolerance);
}

}  // namespace cornu
