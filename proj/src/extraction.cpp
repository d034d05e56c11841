#include "cornu/extraction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include <Eigen/Dense>

namespace cornu::fit {

std::vector<double> chebyshev_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (!(hi > lo)) throw std::invalid_argument("chebyshev_grid: need lo < hi");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = -std::cos(kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    out[k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
  }
  return out;
}

namespace {

void check_grid(std::span<const double> grid, double lambda_max) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || grid[i] > lambda_max) {
      throw std::invalid_argument("sample_z_curve: lambda outside [0, lambda_max]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("sample_z_curve: grid must increase strictly");
  }
}

}  // namespace

std::vector<ZSample> sample_z_curve(std::span<const double> lambda_grid, const evo::OdeConfig& cfg, unsigned threads,
                                    double lambda_max) {
  check_grid(lambda_grid, lambda_max);
  cfg.validate();
  std::vector<ZSample> out(lambda_grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < lambda_grid.size(); i = next++) {
      try {
        const double lambda = lambda_grid[i];
        const auto z = evo::z_infinity(SpiralParams::from_lambda(lambda), cfg);
        out[i] = {lambda, static_cast<long double>(z.value), z.uncertainty};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(lambda_grid.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<ZSample> synthetic_z_curve(std::span<const double> lambda_grid) {
  constexpr long double kPiL = 3.141592653589793238462643383279502884L;
  std::vector<ZSample> out;
  for (double lambda : lambda_grid) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("synthetic_z_curve: lambda must be >= 0");
    out.push_back({lambda, 2.0L * std::exp(-kPiL * static_cast<long double>(lambda) / 4.0L) - 1.0L, 0.0});
  }
  return out;
}

CoefficientFit extract_coefficients(std::span<const ZSample> samples, int degree, double lambda_max,
                                    double condition_limit) {
  if (degree < 0) throw std::invalid_argument("extract_coefficients: degree must be >= 0");
  CoefficientFit fit;
  fit.degree = degree;
  for (const auto& s : samples) {
    if (!(s.lambda >= 0.0) || s.lambda > lambda_max) {
      throw std::invalid_argument("extract_coefficients: lambda outside [0, lambda_max]");
    }
    if (!(s.uncertainty >= 0.0) || !std::isfinite(static_cast<double>(s.value))) {
      throw std::invalid_argument("extract_coefficients: invalid sample");
    }
    fit.lambdas.push_back(s.lambda);
    fit.values.push_back(s.value);
    fit.uncertainties.push_back(s.uncertainty);
  }
  if (degree == 0) return fit;
  const auto n = static_cast<std::size_t>(degree);
  const std::size_t m = samples.size();
  if (m < 2 * (n + 1)) {
    throw std::invalid_argument("extract_coefficients: need at least 2(N+1) samples for degree N = " +
                                std::to_string(degree));
  }

  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  fit.weighted = std::all_of(samples.begin(), samples.end(), [](const ZSample& s) { return s.uncertainty > 0.0; });
  MatL design(m, n);
  VecL rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const long double w = fit.weighted ? 1.0L / static_cast<long double>(samples[i].uncertainty) : 1.0L;
    long double power = 1.0L;
    for (std::size_t j = 0; j < n; ++j) {
      power *= static_cast<long double>(samples[i].lambda);
      design(i, j) = w * power;
    }
    rhs(i) = w * (samples[i].value - 1.0L);
  }
  // Column equilibration; the reported condition number refers to the
  // equilibrated design.
  VecL scale(n);
  for (std::size_t j = 0; j < n; ++j) {
    scale(j) = design.col(j).norm();
    if (scale(j) == 0.0L) throw std::runtime_error("extract_coefficients: rank-deficient design");
    design.col(j) /= scale(j);
  }
  const Eigen::JacobiSVD<MatL> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecL sigma = svd.singularValues();
  if (!(sigma(n - 1) > 1e-17L * sigma(0))) throw std::runtime_error("extract_coefficients: rank-deficient design");
  fit.condition_number = static_cast<double>(sigma(0) / sigma(n - 1));
  fit.ill_conditioned = !(fit.condition_number <= condition_limit);

  const VecL y = svd.solve(rhs);
  const VecL resid = design * y - rhs;
  const long double dof = static_cast<long double>(m - n);
  const long double chi2 = resid.squaredNorm() / dof;
  fit.reduced_chi2 = static_cast<double>(chi2);
  // Unweighted fits estimate the noise from the residuals; weighted fits
  // only inflate the nominal errors.
  const long double error_scale = fit.weighted ? std::max(1.0L, chi2) : chi2;
  const MatL v = svd.matrixV();
  for (std::size_t j = 0; j < n; ++j) {
    long double var = 0.0L;
    for (std::size_t k = 0; k < n; ++k) var += v(j, k) * v(j, k) / (sigma(k) * sigma(k));
    const long double c = y(j) / scale(j);
    const long double se = std::sqrt(var * error_scale) / scale(j);
    fit.coefficients.push_back(static_cast<double>(j % 2 == 0 ? -c : c));
    fit.standard_errors.push_back(static_cast<double>(se));
  }
  return fit;
}

std::vector<VerificationRecord> verification_report(const CoefficientFit& fit, double rel_tol, std::size_t max_order,
                                                    double runtime_seconds) {
  std::vector<VerificationRecord> out;
  const std::size_t count = std::min(max_order, fit.coefficients.size());
  for (std::size_t k = 0; k < count; ++k) {
    const int order = static_cast<int>(k) + 1;
    const double reference = closed_form_In(order);
    out.push_back(make_record("I" + std::to_string(order) + "_extract", fit.coefficients[k], reference,
                              Route::ode_extraction, runtime_seconds, rel_tol * reference));
  }
  return out;
}

void to_json(nlohmann::json& j, const CoefficientFit& fit) {
  std::vector<double> values;
  for (long double v : fit.values) values.push_back(static_cast<double>(v));
  j = nlohmann::json{{"grid", fit.lambdas},
                     {"values", values},
                     {"uncertainties", fit.uncertainties},
                     {"degree", fit.degree},
                     {"coefficients", fit.coefficients},
                     {"standard_errors", fit.standard_errors},
                     {"condition_number", fit.condition_number},
                     {"ill_conditioned", fit.ill_conditioned},
                     {"weighted", fit.weighted},
                     {"reduced_chi2", fit.reduced_chi2},
                     {"standard_error_note",
                      "least-squares artifact scaled by max(1, reduced chi^2); not a calibrated uncertainty"}};
}

}  // namespace cornu::fit
