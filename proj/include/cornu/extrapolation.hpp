#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cornu {

template <typename T>
struct Limit {
  T value{};
  double uncertainty = 0.0;
};

/// Polynomial (Richardson / Neville) extrapolation of value(eps) to eps = 0.
///
/// Builds the Neville tableau T[i][k] over the samples in the given order
/// (eps strictly decreasing) and returns T[last][order], i.e. the degree-
/// `order` polynomial through the last order+1 samples evaluated at zero.
/// The uncertainty is |T[last][order] - T[last-1][order]| when a second
/// estimate at the same level exists, otherwise the step to the level below.
template <typename T>
Limit<T> extrapolate_to_zero(std::span<const std::pair<double, T>> samples, int order) {
  if (order < 0) throw std::invalid_argument("extrapolate_to_zero: order must be >= 0");
  const std::size_t need = static_cast<std::size_t>(order) + 1;
  if (samples.size() < need) throw std::invalid_argument("extrapolate_to_zero: insufficient samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first < samples[i - 1].first)) {
      throw std::invalid_argument("extrapolate_to_zero: eps must be strictly decreasing");
    }
  }
  const std::size_t m = samples.size();
  const std::size_t levels = need;
  // tableau[i][k], only the part we need.
  std::vector<std::vector<T>> tab(m, std::vector<T>(levels));
  for (std::size_t i = 0; i < m; ++i) {
    tab[i][0] = samples[i].second;
    for (std::size_t k = 1; k <= std::min(i, levels - 1); ++k) {
      const double ei = samples[i].first;
      const double ek = samples[i - k].first;
      tab[i][k] = tab[i][k - 1] + (tab[i][k - 1] - tab[i - 1][k - 1]) * (ei / (ek - ei));
    }
  }
  Limit<T> out;
  const std::size_t top = levels - 1;
  out.value = tab[m - 1][top];
  if (m - 1 > top) {
    out.uncertainty = std::abs(tab[m - 1][top] - tab[m - 2][top]);
  } else if (top > 0) {
    out.uncertainty = std::abs(tab[m - 1][top] - tab[m - 1][top - 1]);
  }
  return out;
}

template <typename T>
Limit<T> extrapolate_to_zero(const std::vector<std::pair<double, T>>& samples, int order) {
  return extrapolate_to_zero<T>(std::span<const std::pair<double, T>>(samples), order);
}

}  // namespace cornu
