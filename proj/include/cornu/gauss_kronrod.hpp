#pragma once

// Adaptive 7/15-point Gauss-Kronrod quadrature for real or complex integrands.
//
// Subdivision is deterministic: the interval with the largest error estimate
// is bisected (ties broken by position), and the final value is summed in
// left-to-right interval order, so results do not depend on call context.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace cornu::gk {

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes at odd Kronrod indices 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

}  // namespace detail

template <typename T>
struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  T value{};
  double error = 0.0;
};

/// One 15-point Kronrod panel with the embedded 7-point Gauss estimate.
template <typename T, typename F>
Segment<T> kronrod15(F&& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const T fc = f(centre);
  T kronrod = fc * detail::kKronrodWeights[7];
  T gauss = fc * detail::kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * detail::kKronrodNodes[j];
    const T f1 = f(centre - dx);
    const T f2 = f(centre + dx);
    const T sum = f1 + f2;
    kronrod += sum * detail::kKronrodWeights[j];
    if (j % 2 == 1) gauss += sum * detail::kGaussWeights[j / 2];
  }
  Segment<T> seg;
  seg.lo = lo;
  seg.hi = hi;
  seg.value = kronrod * half;
  seg.error = detail::magnitude((kronrod - gauss) * half);
  return seg;
}

template <typename T>
struct Result {
  T value{};
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

/// Integrates f over [lo, hi] starting from `initial_pieces` equal panels.
/// Bisects until error <= max(abs_tol, rel_tol * |value|) or the interval
/// budget is exhausted (converged = false).
template <typename T, typename F>
Result<T> integrate(F&& f, double lo, double hi, double abs_tol, double rel_tol,
                    std::size_t max_intervals, std::size_t initial_pieces = 1) {
  Result<T> out;
  if (hi == lo) {
    out.converged = true;
    return out;
  }
  initial_pieces = std::max<std::size_t>(1, initial_pieces);
  std::vector<Segment<T>> segs;
  segs.reserve(std::max(initial_pieces * 2, std::size_t{64}));
  const double width = (hi - lo) / static_cast<double>(initial_pieces);
  for (std::size_t i = 0; i < initial_pieces; ++i) {
    const double a = lo + width * static_cast<double>(i);
    const double b = (i + 1 == initial_pieces) ? hi : lo + width * static_cast<double>(i + 1);
    segs.push_back(kronrod15<T>(f, a, b));
  }

  auto worse = [](const Segment<T>& x, const Segment<T>& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.lo > y.lo;
  };
  std::make_heap(segs.begin(), segs.end(), worse);

  auto totals = [&segs]() {
    T v{};
    double e = 0.0;
    for (const auto& s : segs) {
      v += s.value;
      e += s.error;
    }
    return std::pair<T, double>(v, e);
  };

  auto [value, error] = totals();
  while (true) {
    const double target = std::max(abs_tol, rel_tol * detail::magnitude(value));
    if (error <= target) {
      out.converged = true;
      break;
    }
    if (segs.size() >= max_intervals) break;
    std::pop_heap(segs.begin(), segs.end(), worse);
    const Segment<T> top = segs.back();
    segs.pop_back();
    const double mid = 0.5 * (top.lo + top.hi);
    if (!(mid > top.lo && mid < top.hi)) {
      segs.push_back(top);
      std::push_heap(segs.begin(), segs.end(), worse);
      break;
    }
    Segment<T> left = kronrod15<T>(f, top.lo, mid);
    Segment<T> right = kronrod15<T>(f, mid, top.hi);
    value += left.value + right.value - top.value;
    error += left.error + right.error - top.error;
    segs.push_back(left);
    std::push_heap(segs.begin(), segs.end(), worse);
    segs.push_back(right);
    std::push_heap(segs.begin(), segs.end(), worse);
    // Running sums drift; refresh them periodically.
    if (segs.size() % 1024 == 0) std::tie(value, error) = totals();
  }

  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  auto [v, e] = totals();
  out.value = v;
  out.error = e;
  out.intervals = segs.size();
  if (!out.converged) out.converged = e <= std::max(abs_tol, rel_tol * detail::magnitude(v));
  return out;
}

}  // namespace cornu::gk
