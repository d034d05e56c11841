#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cornu {

/// Composite Chebyshev-Lobatto grid supporting spectral cumulative
/// integration. Panel endpoints are shared nodes, so a function sampled on
/// `nodes()` has one value per node and antiderivatives are continuous.
///
/// Used for iterated (ordered) integrals: each nesting level is one
/// cumulative pass over the same grid.
class PanelGrid {
 public:
  /// `breaks` must be strictly increasing with at least two entries;
  /// `points_per_panel` >= 3.
  PanelGrid(std::vector<double> breaks, std::size_t points_per_panel);

  /// Panels on [lo, hi] whose widths follow width(s) (evaluated at the left
  /// end of each panel). width must be positive.
  static PanelGrid adaptive(double lo, double hi, const std::function<double(double)>& width,
                            std::size_t points_per_panel);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t panels() const noexcept { return breaks_.size() - 1; }
  std::span<const double> breaks() const noexcept { return breaks_; }

  /// out[k] = integral from nodes()[0] to nodes()[k] of the interpolant of f.
  void cumulative(std::span<const std::complex<double>> f,
                  std::span<std::complex<double>> out) const;
  void cumulative(std::span<const double> f, std::span<double> out) const;

  /// Integral over the whole grid.
  std::complex<double> total(std::span<const std::complex<double>> f) const;
  double total(std::span<const double> f) const;

 private:
  template <typename T>
  void cumulative_impl(std::span<const T> f, std::span<T> out) const;

  std::vector<double> breaks_;
  std::size_t m_;
  std::vector<double> nodes_;
  // m x m matrix on the reference panel [-1, 1]: row i gives the weights of
  // the integral from -1 to x_i. Row m-1 holds the Clenshaw-Curtis weights.
  std::vector<double> integration_;
};

}  // namespace cornu
