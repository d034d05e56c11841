#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "cornu/core.hpp"
#include "cornu/evolution.hpp"

namespace cornu::fit {

inline constexpr double kDefaultLambdaMax = 0.6;

/// One point of the z(inf; lambda) curve. Synthetic curves carry extended
/// precision in `value`.
struct ZSample {
  double lambda = 0.0;
  long double value = 1.0L;
  double uncertainty = 0.0;
};

struct CoefficientFit {
  std::vector<double> lambdas;
  std::vector<long double> values;
  std::vector<double> uncertainties;
  int degree = 0;
  /// Recovered I_1..I_N, i.e. (-1)^n c_n.
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  /// 2-norm condition number of the column-equilibrated design.
  double condition_number = 1.0;
  bool ill_conditioned = false;
  bool weighted = false;
  double reduced_chi2 = 0.0;
};

/// n Chebyshev points of the first kind on [lo, hi], increasing.
std::vector<double> chebyshev_grid(double lo, double hi, std::size_t n);

/// z_infinity at each grid point. Points are distributed over `threads`
/// workers; the result does not depend on the thread count.
std::vector<ZSample> sample_z_curve(std::span<const double> lambda_grid, const evo::OdeConfig& cfg,
                                    unsigned threads = 1, double lambda_max = kDefaultLambdaMax);

/// Closed-form curve 2 exp(-pi lambda / 4) - 1 in extended precision.
std::vector<ZSample> synthetic_z_curve(std::span<const double> lambda_grid);

/// Weighted least-squares fit of z - 1 to sum_{n=1..N} c_n lambda^n.
///
/// Needs at least 2(N+1) samples, all with lambda <= lambda_max. Weights are
/// 1/uncertainty^2 unless some uncertainty is zero. Standard errors are
/// scaled by max(1, reduced chi^2). Throws std::invalid_argument on a
/// violated precondition and std::runtime_error on a rank-deficient design.
CoefficientFit extract_coefficients(std::span<const ZSample> samples, int degree,
                                    double lambda_max = kDefaultLambdaMax, double condition_limit = 1e10);

/// One record per recovered I_n against the closed form; `rel_tol` sets
/// each record's absolute tolerance to rel_tol * I_n.
std::vector<VerificationRecord> verification_report(const CoefficientFit& fit, double rel_tol,
                                                    std::size_t max_order, double runtime_seconds = 0.0);

void to_json(nlohmann::json& j, const CoefficientFit& fit);

}  // namespace cornu::fit
