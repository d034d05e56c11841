#include "cornu/chebyshev_panels.hpp"

#include <cmath>
#include <stdexcept>

#include "cornu/core.hpp"

namespace cornu {

namespace {

// Reference-panel integration matrix for Chebyshev-Lobatto nodes
// x_j = -cos(j pi / (m-1)), built from the Chebyshev antiderivative
// recurrence in extended precision.
std::vector<double> build_integration_matrix(std::size_t m) {
  using ld = long double;
  const std::size_t n = m - 1;
  const ld pi = 3.141592653589793238462643383279502884L;
  std::vector<ld> theta(m);
  for (std::size_t j = 0; j < m; ++j) theta[j] = pi - pi * static_cast<ld>(j) / static_cast<ld>(n);

  // T_k(x_j) = cos(k theta_j), with x_j = cos(theta_j).
  auto cheb = [&](std::size_t k, std::size_t j) { return std::cos(static_cast<ld>(k) * theta[j]); };
  // Antiderivative of T_k evaluated at node j (any constant is cancelled later).
  auto antideriv = [&](std::size_t k, std::size_t j) -> ld {
    if (k == 0) return cheb(1, j);
    if (k == 1) return cheb(2, j) / 4.0L;
    return cheb(k + 1, j) / (2.0L * static_cast<ld>(k + 1)) -
           cheb(k - 1, j) / (2.0L * static_cast<ld>(k - 1));
  };

  std::vector<double> mat(m * m, 0.0);
  for (std::size_t col = 0; col < m; ++col) {
    // Chebyshev coefficients of the cardinal function at node `col`.
    std::vector<ld> c(m);
    const ld end_weight = (col == 0 || col == n) ? 0.5L : 1.0L;
    for (std::size_t k = 0; k < m; ++k) {
      ld ck = 2.0L / static_cast<ld>(n) * end_weight * cheb(k, col);
      if (k == 0 || k == n) ck *= 0.5L;
      c[k] = ck;
    }
    ld base = 0.0L;
    for (std::size_t k = 0; k < m; ++k) base += c[k] * antideriv(k, 0);
    for (std::size_t row = 0; row < m; ++row) {
      ld v = 0.0L;
      for (std::size_t k = 0; k < m; ++k) v += c[k] * antideriv(k, row);
      mat[row * m + col] = static_cast<double>(v - base);
    }
  }
  return mat;
}

}  // namespace

PanelGrid::PanelGrid(std::vector<double> breaks, std::size_t points_per_panel)
    : breaks_(std::move(breaks)), m_(points_per_panel) {
  if (breaks_.size() < 2) throw std::invalid_argument("PanelGrid: need at least one panel");
  if (m_ < 3) throw std::invalid_argument("PanelGrid: need at least 3 points per panel");
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > breaks_[i - 1])) throw std::invalid_argument("PanelGrid: breaks must increase");
  }
  integration_ = build_integration_matrix(m_);
  const std::size_t n = m_ - 1;
  nodes_.reserve(panels() * n + 1);
  for (std::size_t p = 0; p < panels(); ++p) {
    const double lo = breaks_[p];
    const double hi = breaks_[p + 1];
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t j = (p == 0 ? 0 : 1); j < m_; ++j) {
      double x = -std::cos(kPi * static_cast<double>(j) / static_cast<double>(n));
      if (j == 0) x = -1.0;
      if (j == n) x = 1.0;
      nodes_.push_back(j == n ? hi : mid + half * x);
    }
  }
}

PanelGrid PanelGrid::adaptive(double lo, double hi, const std::function<double(double)>& width,
                              std::size_t points_per_panel) {
  if (!(hi > lo)) throw std::invalid_argument("PanelGrid::adaptive: need lo < hi");
  std::vector<double> breaks{lo};
  double s = lo;
  while (s < hi) {
    const double w = width(s);
    if (!(w > 0.0)) throw std::invalid_argument("PanelGrid::adaptive: width must be positive");
    // Let the final panel absorb a sliver instead of creating a tiny one.
    double next = s + w;
    if (next > hi - 0.25 * w) next = hi;
    breaks.push_back(next);
    s = next;
  }
  return PanelGrid(std::move(breaks), points_per_panel);
}

template <typename T>
void PanelGrid::cumulative_impl(std::span<const T> f, std::span<T> out) const {
  if (f.size() != nodes_.size() || out.size() != nodes_.size()) {
    throw std::invalid_argument("PanelGrid::cumulative: size mismatch");
  }
  const std::size_t n = m_ - 1;
  T running{};
  out[0] = T{};
  for (std::size_t p = 0; p < panels(); ++p) {
    const double half = 0.5 * (breaks_[p + 1] - breaks_[p]);
    const std::size_t offset = p * n;
    for (std::size_t row = 1; row < m_; ++row) {
      T acc{};
      const double* w = &integration_[row * m_];
      for (std::size_t col = 0; col < m_; ++col) acc += f[offset + col] * w[col];
      out[offset + row] = running + acc * half;
    }
    running = out[offset + n];
  }
}

void PanelGrid::cumulative(std::span<const std::complex<double>> f,
                           std::span<std::complex<double>> out) const {
  cumulative_impl<std::complex<double>>(f, out);
}

void PanelGrid::cumulative(std::span<const double> f, std::span<double> out) const {
  cumulative_impl<double>(f, out);
}

std::complex<double> PanelGrid::total(std::span<const std::complex<double>> f) const {
  std::vector<std::complex<double>> out(f.size());
  cumulative(f, out);
  return out.back();
}

double PanelGrid::total(std::span<const double> f) const {
  std::vector<double> out(f.size());
  cumulative(f, out);
  return out.back();
}

}  // namespace cornu
