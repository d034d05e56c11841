#pragma once

// Regularised oscillatory quadrature: Gaussian-damped integrals with
// Richardson extrapolation of the damping to zero, the direct (ordered,
// nested) evaluations of I_n and J_n, the frequency-space principal-value
// evaluation of I_2, the reduced double integral giving I_3, and the two
// routes to the zeta(2) representation.

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cornu/core.hpp"
#include "cornu/extrapolation.hpp"

namespace cornu::quad {

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<complex(double)>;

/// Raised when a direct evaluation is requested beyond the supported orders.
class CostGateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by pv_halfline when g grows without bound at the origin.
class UnboundedAtZeroError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct DampedResult {
  double eps = 0.0;
  complex value;
  double est_error = 0.0;
  bool converged = true;
};

/// Extrapolated quantity with its uncertainty. `converged` is false if any
/// underlying adaptive integral exhausted its subdivision budget.
template <typename T>
struct Estimate {
  T value{};
  double uncertainty = 0.0;
  bool converged = true;
  std::vector<DampedResult> samples;
};

/// Integral of f(s) exp(-eps s^2) over [lo, hi]. Infinite endpoints are cut
/// at s_max / sqrt(eps) and the Gaussian tail bound (valid for |f| <= 1) is
/// added to est_error.
DampedResult damped_integral(const ComplexFn& f, double lo, double hi, double eps,
                             const QuadratureConfig& cfg);
DampedResult damped_integral(const RealFn& f, double lo, double hi, double eps,
                             const QuadratureConfig& cfg);

enum class FresnelKind { cos, sin };

/// Integral over the real line of cos(s^2) or sin(s^2).
Estimate<double> fresnel_full_line(FresnelKind kind, const QuadratureConfig& cfg);

/// Integral over (0, inf) of sin(w)/w, via w = u^2 and Gaussian damping in u.
Estimate<double> dirichlet_integral(const QuadratureConfig& cfg);

/// Integral over (0, inf) of sin(c w^2)/w for c > 0 (equals pi/4).
Estimate<double> dirichlet_scaled(double c, const QuadratureConfig& cfg);

/// Ordered 2n-fold integral of prod cos(s_{2k-1}^2 - s_{2k}^2) over
/// s_1 > s_2 > ... > s_{2n}. Only n = 1, 2 are supported (CostGateError).
Estimate<double> direct_In(int n, const QuadratureConfig& cfg);

/// Unordered full-plane integral of cos(s_1^2 - s_2^2), i.e. 2 I_1.
Estimate<double> direct_I1_unordered(const QuadratureConfig& cfg);

/// Ordered 2n-fold integral of exp(-i s_1^2) exp(i s_2^2) ... exp(i s_{2n}^2).
/// n = 1, 2 only.
Estimate<complex> direct_Jn(int n, const QuadratureConfig& cfg);

/// Damping applied to the half-line principal-value integrand.
enum class Regulator {
  gaussian,     ///< exp(-eps x^2): analytic in eps for quadratic phases.
  exponential,  ///< exp(-eps x): analytic in eps for linear phases.
};

/// (1 / 2 pi i) lim_{delta->0} integral_delta^inf [g(x) - g(-x)] / x dx.
/// The delta-function term of 1/(x - i0) is not included.
Estimate<complex> pv_halfline(const ComplexFn& g, const QuadratureConfig& cfg,
                              Regulator regulator = Regulator::gaussian);

struct PhiValue {
  double w1 = 0.0;
  double w2 = 0.0;
  complex value;
};

/// theta(w1-w2) e^{-i(w1^2-w2^2)} + theta(w2-w1) e^{-i(w2^2-w1^2)}, theta(0) = 1/2.
PhiValue phi(double w1, double w2);

struct I2OmegaResult {
  double delta_part = 0.0;    // I_2delta
  Estimate<double> pv_part;   // I_2P
  Estimate<double> total;     // (pi^2/4)(I_2delta + I_2P)
};

/// I_2 from the one-dimensional frequency integral split into its
/// delta-function and principal-value parts.
I2OmegaResult I2_omega(const QuadratureConfig& cfg);

/// Truncated-tail evaluation of the reduced double integral
/// int_0^inf dx/x int_0^x dy/y [cos(x - alpha y) - cos x].
Estimate<double> reduced_double_integral(double alpha, const QuadratureConfig& cfg);

struct I3Result {
  Estimate<double> tilde;        // the raw double integral (zeta(2))
  Estimate<double> dimensionless;  // tilde / (4 pi^2)
  Estimate<double> total;        // (pi/2)^3 * dimensionless
};

I3Result I3_reduced(const QuadratureConfig& cfg);

/// -int_0^alpha ln(1-b)/b db for alpha in [0, 1], using b = 1 - e^{-t}.
Estimate<double> parametric_dilog(double alpha, const QuadratureConfig& cfg);

enum class Zeta2Method { raw, parametric };

Estimate<double> zeta2_check(Zeta2Method method, const QuadratureConfig& cfg);

}  // namespace cornu::quad
