#include <algorithm>
#include <cmath>
#include <vector>

#include "cornu/chebyshev_panels.hpp"
#include "cornu/gauss_kronrod.hpp"
#include "cornu/quadrature.hpp"

namespace cornu::quad {

Estimate<double> reduced_double_integral(double alpha, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("reduced_double_integral: alpha must lie in [0, 1]");
  }
  // Partial sums are taken at multiples of pi (half-periods of the outer
  // oscillation); panels are quarter periods.
  const auto half_periods = static_cast<std::size_t>(std::floor(cfg.x_max / kPi));
  std::vector<double> breaks;
  for (std::size_t k = 0; k <= 2 * half_periods; ++k) breaks.push_back(0.5 * kPi * static_cast<double>(k));
  const PanelGrid grid(std::move(breaks), cfg.panel_points);
  const auto nodes = grid.nodes();
  const std::size_t n = grid.size();

  // cos(x - alpha y) - cos x = sin x sin(alpha y) + cos x (cos(alpha y) - 1),
  // so the inner integral splits into two cumulative integrals with regular
  // integrands; (cos t - 1)/y is written as -2 sin^2(t/2)/y to avoid
  // cancellation near y = 0.
  std::vector<double> sin_part(n), cos_part(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = nodes[j];
    if (y == 0.0) {
      sin_part[j] = alpha;
      cos_part[j] = 0.0;
      continue;
    }
    const double h = std::sin(0.5 * alpha * y);
    sin_part[j] = std::sin(alpha * y) / y;
    cos_part[j] = -2.0 * h * h / y;
  }
  std::vector<double> sin_cum(n), cos_cum(n);
  grid.cumulative(sin_part, sin_cum);
  grid.cumulative(cos_part, cos_cum);

  std::vector<double> outer(n), outer_cum(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = nodes[j];
    outer[j] = x == 0.0 ? 0.0 : (std::sin(x) * sin_cum[j] + std::cos(x) * cos_cum[j]) / x;
  }
  grid.cumulative(outer, outer_cum);

  const std::size_t stride = 2 * (cfg.panel_points - 1);
  std::vector<double> sums;
  std::vector<double> positions;
  for (std::size_t k = 1; k <= half_periods; ++k) {
    sums.push_back(outer_cum[k * stride]);
    positions.push_back(kPi * static_cast<double>(k));
  }
  // Neighbour averaging of consecutive half-period partial sums.
  for (int level = 0; level < cfg.tail_average_levels && sums.size() > 8; ++level) {
    for (std::size_t k = 0; k + 1 < sums.size(); ++k) {
      sums[k] = 0.5 * (sums[k] + sums[k + 1]);
      positions[k] = 0.5 * (positions[k] + positions[k + 1]);
    }
    sums.pop_back();
    positions.pop_back();
  }

  // Extrapolate the averaged sums in 1/X from X/4, X/2, X.
  const std::size_t last = sums.size() - 1;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t idx : {last / 4, last / 2, last}) pts.emplace_back(1.0 / positions[idx], sums[idx]);
  const auto lim = extrapolate_to_zero<double>(pts, 2);

  Estimate<double> out;
  out.value = lim.value;
  out.uncertainty = std::max(lim.uncertainty, std::abs(lim.value - sums[last]));
  return out;
}

I3Result I3_reduced(const QuadratureConfig& cfg) {
  I3Result r;
  r.tilde = reduced_double_integral(1.0, cfg);
  const double to_dimensionless = 1.0 / (4.0 * kPi * kPi);
  r.dimensionless.value = r.tilde.value * to_dimensionless;
  r.dimensionless.uncertainty = r.tilde.uncertainty * to_dimensionless;
  const double cube = (kPi / 2.0) * (kPi / 2.0) * (kPi / 2.0);
  r.total.value = cube * r.dimensionless.value;
  r.total.uncertainty = cube * r.dimensionless.uncertainty;
  return r;
}

Estimate<double> parametric_dilog(double alpha, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("parametric_dilog: alpha must lie in [0, 1]");
  Estimate<double> out;
  if (alpha == 0.0) return out;
  // b = 1 - e^{-t} turns -ln(1-b)/b db into t / (e^t - 1) dt.
  constexpr double kTailCut = 45.0;
  const double upper = alpha == 1.0 ? kTailCut : std::min(kTailCut, -std::log1p(-alpha));
  const auto f = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  const auto res = gk::integrate<double>(f, 0.0, upper, 1e-15, 1e-15, cfg.max_intervals, 8);
  out.value = res.value;
  out.uncertainty = res.error;
  // Remaining tail: int_T^inf t e^{-t} / (1 - e^{-t}) <= 2 (T + 1) e^{-T}.
  if (upper == kTailCut) out.uncertainty += 2.0 * (kTailCut + 1.0) * std::exp(-kTailCut);
  out.converged = res.converged || res.error < 1e-13;
  return out;
}

Estimate<double> zeta2_check(Zeta2Method method, const QuadratureConfig& cfg) {
  return method == Zeta2Method::raw ? reduced_double_integral(1.0, cfg) : parametric_dilog(1.0, cfg);
}

}  // namespace cornu::quad
