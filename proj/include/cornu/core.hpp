#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cornu {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Parameters of the rolling-sphere / spinor systems.
///
/// `a` is the curvature growth rate of the Cornu track (kappa = a s) and `R`
/// the sphere radius. The zero-coupling limit is represented by
/// `R = +infinity`, for which the right-hand sides vanish identically.
struct SpiralParams {
  double a = 2.0;
  double R = 1.0;

  /// Throws std::invalid_argument unless a > 0, R > 0 (R may be +inf).
  static SpiralParams make(double a, double R);

  /// Canonical parameter point for a coupling: a = 2, R = 1/sqrt(lambda).
  /// With a = 2 the ODE phase a s^2 / 2 is exactly s^2, so no rescaling of
  /// the evolution variable is needed. lambda = 0 maps to R = +inf.
  static SpiralParams from_lambda(double lambda);

  /// 1/R, exactly zero in the zero-coupling limit.
  double inverse_radius() const noexcept;
};

/// Coupling 2 / (a R^2).
double lambda_of(const SpiralParams& params) noexcept;

/// (2 / n!) (pi/4)^n. Throws std::invalid_argument for n < 1 and
/// std::overflow_error once n! leaves the double range.
double closed_form_In(int n);

/// (1 / n!) (pi/2)^n, with the same error behaviour as closed_form_In.
double closed_form_Jn(int n);

/// 2 exp(-pi lambda / 4) - 1. Throws std::invalid_argument for lambda < 0.
double closed_form_z_infinity(double lambda);

/// Point on S^2 for the rolling-sphere system.
struct SO3State {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const noexcept;
};

/// Normalised pair of complex amplitudes on S^3.
struct SpinorState {
  complex a{1.0, 0.0};
  complex b{0.0, 0.0};

  double norm() const noexcept;
};

/// Damping grid and tolerances shared by every regularised quadrature.
struct QuadratureConfig {
  std::vector<double> eps_grid{0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625};
  double s_max = 6.0;
  double delta_excise = 1e-10;
  double abs_tol = 1e-7;
  double rel_tol = 1e-7;
  int extrap_order = 4;
  /// Subinterval budget for a single adaptive integral.
  std::size_t max_intervals = 200000;
  /// Chebyshev-Lobatto points per panel for nested (ordered) integrals.
  std::size_t panel_points = 24;
  /// Outer truncation of the reduced double integral.
  double x_max = 500.0;
  /// Rounds of neighbour averaging applied to the half-period partial sums.
  int tail_average_levels = 4;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  /// Per-panel target handed to the adaptive rules. Richardson weights
  /// amplify sample noise, so each sample is computed well below abs_tol.
  double sample_abs_tol() const noexcept { return abs_tol * 1e-3; }
  double sample_rel_tol() const noexcept { return rel_tol * 1e-3; }
};

enum class Route { direct, omega, ode_extraction, closed_form };

std::string_view to_string(Route route) noexcept;

struct VerificationRecord {
  std::string name;
  complex computed;
  complex reference;
  bool complex_valued = false;
  double abs_err = 0.0;
  double rel_err = 0.0;
  Route route = Route::closed_form;
  double runtime_seconds = 0.0;
  double tolerance = 0.0;

  bool pass() const noexcept { return abs_err <= tolerance; }
};

/// Builds a record with abs_err = |computed - reference| and
/// rel_err = abs_err / max(|reference|, DBL_MIN).
VerificationRecord make_record(std::string name, complex computed, complex reference,
                               bool complex_valued, Route route, double runtime_seconds,
                               double tolerance);

VerificationRecord make_record(std::string name, double computed, double reference, Route route,
                               double runtime_seconds, double tolerance);

}  // namespace cornu
