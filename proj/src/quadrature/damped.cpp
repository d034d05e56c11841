#include <algorithm>
#include <cmath>
#include <limits>

#include "cornu/gauss_kronrod.hpp"
#include "cornu/quadrature.hpp"
#include "detail.hpp"

namespace cornu::quad {

namespace detail {

std::size_t quadratic_phase_pieces(double lo, double hi, std::size_t max_intervals) {
  // About one piece per radian of s^2 phase, so the first pass is already
  // close to resolved.
  const double reach = std::max(std::abs(lo), std::abs(hi));
  const double pieces = (hi - lo) * (1.0 + 2.0 * reach) / kPi;
  const double cap = static_cast<double>(std::max<std::size_t>(8, max_intervals / 4));
  return static_cast<std::size_t>(std::clamp(std::ceil(pieces), 8.0, cap));
}

int effective_order(const QuadratureConfig& cfg) {
  return std::min<int>(cfg.extrap_order, static_cast<int>(cfg.eps_grid.size()) - 1);
}

template <typename T>
DampedResult damped(const std::function<T(double)>& f, double lo, double hi, double eps,
                    const QuadratureConfig& cfg) {
  if (!(eps > 0.0)) throw std::invalid_argument("damped_integral: eps must be > 0");
  if (!(hi >= lo)) throw std::invalid_argument("damped_integral: need lo <= hi");
  const double cut = cfg.s_max / std::sqrt(eps);
  double tail = 0.0;
  const double tail_one_side = 0.5 * std::sqrt(kPi / eps) * std::erfc(std::sqrt(eps) * cut);
  double a = lo;
  double b = hi;
  if (std::isinf(a)) {
    a = -cut;
    tail += tail_one_side;
  }
  if (std::isinf(b)) {
    b = cut;
    tail += tail_one_side;
  }
  DampedResult out;
  out.eps = eps;
  if (!(b > a)) return out;
  auto integrand = [&f, eps](double s) { return f(s) * std::exp(-eps * s * s); };
  const auto res = gk::integrate<T>(integrand, a, b, cfg.sample_abs_tol(), cfg.sample_rel_tol(),
                                    cfg.max_intervals,
                                    quadratic_phase_pieces(a, b, cfg.max_intervals));
  out.value = complex(res.value);
  out.est_error = res.error + tail;
  out.converged = res.converged;
  return out;
}

}  // namespace detail

DampedResult damped_integral(const ComplexFn& f, double lo, double hi, double eps,
                             const QuadratureConfig& cfg) {
  return detail::damped<complex>(f, lo, hi, eps, cfg);
}

DampedResult damped_integral(const RealFn& f, double lo, double hi, double eps,
                             const QuadratureConfig& cfg) {
  return detail::damped<double>(f, lo, hi, eps, cfg);
}

namespace {

Estimate<double> extrapolate_real(std::vector<DampedResult> samples, const QuadratureConfig& cfg) {
  std::vector<std::pair<double, double>> pts;
  Estimate<double> out;
  double worst = 0.0;
  for (const auto& s : samples) {
    pts.emplace_back(s.eps, s.value.real());
    out.converged = out.converged && s.converged;
    worst = std::max(worst, s.est_error);
  }
  const auto lim = extrapolate_to_zero<double>(pts, detail::effective_order(cfg));
  out.value = lim.value;
  out.uncertainty = lim.uncertainty + worst;
  out.samples = std::move(samples);
  return out;
}

double sin_sq_over(double u) {
  // sin(u^2)/u, regular at the origin.
  if (u < 1e-4) return u - u * u * u * u * u / 6.0;
  return std::sin(u * u) / u;
}

}  // namespace

Estimate<double> fresnel_full_line(FresnelKind kind, const QuadratureConfig& cfg) {
  cfg.validate();
  const RealFn f = kind == FresnelKind::cos ? RealFn([](double s) { return std::cos(s * s); })
                                            : RealFn([](double s) { return std::sin(s * s); });
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<DampedResult> samples;
  for (double eps : cfg.eps_grid) samples.push_back(damped_integral(f, -inf, inf, eps, cfg));
  return extrapolate_real(std::move(samples), cfg);
}

Estimate<double> dirichlet_integral(const QuadratureConfig& cfg) {
  cfg.validate();
  // sin(w)/w dw = 2 sin(u^2)/u du under w = u^2.
  const RealFn f = [](double u) { return 2.0 * sin_sq_over(u); };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<DampedResult> samples;
  for (double eps : cfg.eps_grid) samples.push_back(damped_integral(f, 0.0, inf, eps, cfg));
  return extrapolate_real(std::move(samples), cfg);
}

Estimate<double> dirichlet_scaled(double c, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(c > 0.0)) throw std::invalid_argument("dirichlet_scaled: c must be > 0");
  const double root = std::sqrt(c);
  const RealFn f = [root](double w) { return root * sin_sq_over(root * w); };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<DampedResult> samples;
  for (double eps : cfg.eps_grid) samples.push_back(damped_integral(f, 0.0, inf, eps, cfg));
  return extrapolate_real(std::move(samples), cfg);
}

Estimate<complex> pv_halfline(const ComplexFn& g, const QuadratureConfig& cfg, Regulator regulator) {
  cfg.validate();
  const double delta = cfg.delta_excise;
  auto edge = [&g](double x) { return std::max(std::abs(g(x)), std::abs(g(-x))); };
  const double near = edge(delta);
  const double far = edge(std::min(1e3 * delta, 0.5 * cfg.s_max));
  if (!std::isfinite(near) || near > 1e2 * (1.0 + far)) {
    throw UnboundedAtZeroError("pv_halfline: |g(+-x)| diverges as x -> 0");
  }
  const ComplexFn odd_quotient = [&g, delta](double x) {
    const double xe = std::max(x, delta);
    return (g(xe) - g(-xe)) / xe;
  };

  Estimate<complex> out;
  std::vector<std::pair<double, complex>> pts;
  double worst = 0.0;
  for (double eps : cfg.eps_grid) {
    DampedResult r;
    if (regulator == Regulator::gaussian) {
      r = damped_integral(odd_quotient, 0.0, std::numeric_limits<double>::infinity(), eps, cfg);
    } else {
      const double cut = cfg.s_max * cfg.s_max / eps;
      auto integrand = [&odd_quotient, eps](double x) { return odd_quotient(x) * std::exp(-eps * x); };
      const auto pieces = static_cast<std::size_t>(
          std::clamp(std::ceil(cut / kPi), 8.0, static_cast<double>(cfg.max_intervals / 4 + 8)));
      const auto res = gk::integrate<complex>(integrand, 0.0, cut, cfg.sample_abs_tol(),
                                              cfg.sample_rel_tol(), cfg.max_intervals, pieces);
      r.eps = eps;
      r.value = res.value;
      // |odd quotient| <= 2 sup|g| / cut beyond the cut.
      r.est_error = res.error + 2.0 * std::exp(-eps * cut) / (eps * cut);
      r.converged = res.converged;
    }
    pts.emplace_back(eps, r.value);
    out.converged = out.converged && r.converged;
    worst = std::max(worst, r.est_error);
    out.samples.push_back(r);
  }
  const auto lim = extrapolate_to_zero<complex>(pts, detail::effective_order(cfg));
  const complex scale = 1.0 / complex(0.0, 2.0 * kPi);
  out.value = lim.value * scale;
  out.uncertainty = (lim.uncertainty + worst) / (2.0 * kPi);
  return out;
}

PhiValue phi(double w1, double w2) {
  const double phase = w1 * w1 - w2 * w2;
  PhiValue p{w1, w2, {}};
  if (w1 > w2) {
    p.value = std::polar(1.0, -phase);
  } else if (w2 > w1) {
    p.value = std::polar(1.0, phase);
  } else {
    p.value = 0.5 * std::polar(1.0, -phase) + 0.5 * std::polar(1.0, phase);
  }
  return p;
}

I2OmegaResult I2_omega(const QuadratureConfig& cfg) {
  const ComplexFn g = [](double x) { return phi(0.0, x).value * phi(x, 0.0).value; };
  I2OmegaResult out;
  // (1 / 2 pi i) * i pi * g(0)
  out.delta_part = 0.5 * g(0.0).real();
  const auto pv = pv_halfline(g, cfg);
  out.pv_part.value = pv.value.real();
  out.pv_part.uncertainty = pv.uncertainty + std::abs(pv.value.imag());
  out.pv_part.converged = pv.converged;
  out.pv_part.samples = pv.samples;
  const double scale = kPi * kPi / 4.0;
  out.total.value = scale * (out.delta_part + out.pv_part.value);
  out.total.uncertainty = scale * out.pv_part.uncertainty;
  out.total.converged = pv.converged;
  return out;
}

}  // namespace cornu::quad
