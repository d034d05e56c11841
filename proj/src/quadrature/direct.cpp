#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cornu/chebyshev_panels.hpp"
#include "cornu/quadrature.hpp"
#include "detail.hpp"

namespace cornu::quad {

namespace {

// Damped phase factors exp(+-i s^2 - eps s^2) sampled on a panel grid.
struct PhaseTable {
  std::vector<complex> plus;
  std::vector<complex> minus;
};

PhaseTable tabulate(const PanelGrid& grid, double eps) {
  PhaseTable t;
  t.plus.reserve(grid.size());
  t.minus.reserve(grid.size());
  for (double s : grid.nodes()) {
    const double s2 = s * s;
    const double damp = std::exp(-eps * s2);
    const complex e = std::polar(damp, s2);
    t.plus.push_back(e);
    t.minus.push_back(std::conj(e));
  }
  return t;
}

/// Ordered integral over s_1 > s_2 > ... > s_k of prod exp(i sign_j s_j^2),
/// evaluated innermost-first as a chain of cumulative integrals.
complex ordered_chain(const PanelGrid& grid, const PhaseTable& table, const std::vector<int>& signs) {
  const std::size_t n = grid.size();
  std::vector<complex> inner(n, complex(1.0, 0.0));
  std::vector<complex> work(n);
  for (std::size_t level = signs.size(); level-- > 0;) {
    const auto& factor = signs[level] > 0 ? table.plus : table.minus;
    for (std::size_t j = 0; j < n; ++j) work[j] = factor[j] * inner[j];
    if (level == 0) return grid.total(work);
    grid.cumulative(work, inner);
  }
  return {};
}

using Integrand = std::vector<std::pair<double, std::vector<int>>>;

// Weighted sum of ordered chains for one damping value on a grid with the
// given number of points per panel.
complex chain_sum(const Integrand& terms, double eps, const QuadratureConfig& cfg,
                  std::size_t points) {
  const double cut = cfg.s_max / std::sqrt(eps);
  // Combined chain frequencies reach about 4|s|; keep each panel near 2 pi
  // of that phase.
  const auto grid = PanelGrid::adaptive(
      -cut, cut, [](double s) { return kPi / (1.0 + 2.0 * std::abs(s)); }, points);
  const auto table = tabulate(grid, eps);
  complex total{};
  for (const auto& [weight, signs] : terms) total += weight * ordered_chain(grid, table, signs);
  return total;
}

Estimate<complex> over_eps_grid(const Integrand& terms, const QuadratureConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<double, complex>> pts;
  Estimate<complex> out;
  double worst = 0.0;
  const std::size_t coarse = std::max<std::size_t>(3, cfg.panel_points * 2 / 3);
  for (double eps : cfg.eps_grid) {
    DampedResult r;
    r.eps = eps;
    r.value = chain_sum(terms, eps, cfg, cfg.panel_points);
    r.est_error = std::abs(r.value - chain_sum(terms, eps, cfg, coarse));
    // Gaussian truncation tail, one factor per variable.
    r.est_error += static_cast<double>(terms.front().second.size()) * std::sqrt(kPi / eps) *
                   std::erfc(cfg.s_max);
    pts.emplace_back(eps, r.value);
    worst = std::max(worst, r.est_error);
    out.samples.push_back(r);
  }
  const auto lim = extrapolate_to_zero<complex>(pts, detail::effective_order(cfg));
  out.value = lim.value;
  out.uncertainty = lim.uncertainty + worst;
  return out;
}

void check_gate(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": order must be >= 1");
  if (n > 2) {
    throw CostGateError(std::string(what) +
                        ": direct nested quadrature is limited to n = 1, 2 (cost gate); "
                        "use the omega route or ODE extraction for higher n");
  }
}

// cos(a - b) = (e^{i(a-b)} + e^{-i(a-b)}) / 2 for each of the n pairs.
Integrand cosine_chain_terms(int n) {
  Integrand terms;
  const int patterns = 1 << n;
  const double weight = 1.0 / static_cast<double>(patterns);
  for (int mask = 0; mask < patterns; ++mask) {
    std::vector<int> signs;
    for (int k = 0; k < n; ++k) {
      const int tau = (mask >> k) & 1 ? -1 : 1;
      signs.push_back(tau);
      signs.push_back(-tau);
    }
    terms.emplace_back(weight, std::move(signs));
  }
  return terms;
}

}  // namespace

Estimate<double> direct_In(int n, const QuadratureConfig& cfg) {
  check_gate(n, "direct_In");
  const auto c = over_eps_grid(cosine_chain_terms(n), cfg);
  Estimate<double> out;
  out.value = c.value.real();
  out.uncertainty = c.uncertainty + std::abs(c.value.imag());
  out.converged = c.converged;
  out.samples = c.samples;
  return out;
}

Estimate<double> direct_I1_unordered(const QuadratureConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<double, double>> pts;
  Estimate<double> out;
  for (double eps : cfg.eps_grid) {
    const double cut = cfg.s_max / std::sqrt(eps);
    const auto grid = PanelGrid::adaptive(
        -cut, cut, [](double s) { return kPi / (1.0 + 2.0 * std::abs(s)); }, cfg.panel_points);
    const auto table = tabulate(grid, eps);
    // Re[(int e^{i s^2}) (int e^{-i s^2})] = int int cos(s1^2 - s2^2).
    const complex v = grid.total(table.plus) * grid.total(table.minus);
    DampedResult r{eps, v, 2.0 * std::sqrt(kPi / eps) * std::erfc(cfg.s_max), true};
    pts.emplace_back(eps, v.real());
    out.samples.push_back(r);
  }
  const auto lim = extrapolate_to_zero<double>(pts, detail::effective_order(cfg));
  out.value = lim.value;
  out.uncertainty = lim.uncertainty;
  return out;
}

Estimate<complex> direct_Jn(int n, const QuadratureConfig& cfg) {
  check_gate(n, "direct_Jn");
  std::vector<int> signs;
  for (int k = 0; k < 2 * n; ++k) signs.push_back(k % 2 == 0 ? -1 : 1);
  return over_eps_grid(Integrand{{1.0, signs}}, cfg);
}

}  // namespace cornu::quad
