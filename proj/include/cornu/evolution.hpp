#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "cornu/core.hpp"
#include "cornu/dormand_prince.hpp"

namespace cornu::evo {

/// How the asymptotic population is read off a finite window.
enum class Projection {
  /// Start in (a, b) = (1, 0) and report 2|a|^2 - 1 at the end of the window.
  diabatic,
  /// Start and finish in the first-order superadiabatic eigenstates of the
  /// instantaneous Hamiltonian. Removes the finite-window oscillation to
  /// O(1/S^5) and is used for coefficient extraction.
  superadiabatic,
};

struct OdeConfig {
  double s_start = -200.0;
  double s_end = 200.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Coefficient c of the step ceiling h <= c / (1 + a |s|).
  double max_step_coeff = 0.5;
  /// Number of trailing (and leading) oscillation periods averaged over.
  int tail_window = 8;
  Projection projection = Projection::diabatic;
  std::size_t max_steps = 200'000'000;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  StepControl step_control(const SpiralParams& params) const;
};

template <typename State>
struct Trajectory {
  std::vector<std::pair<double, State>> samples;
  State final_state;
  IntegrationStats stats;
  double max_norm_drift = 0.0;
  /// False when some sample drifted more than 10 rel_tol (s - s_start) off
  /// the unit sphere.
  bool tolerance_met = true;
};

std::array<double, 3> rhs_so3(double s, const SO3State& state, const SpiralParams& params);

std::array<complex, 2> rhs_spinor(double s, const SpinorState& state, const SpiralParams& params);

/// H(s) = -(1/2R) [[0, e^{-i a s^2/2}], [e^{i a s^2/2}, 0]], row major.
std::array<complex, 4> spinor_hamiltonian(double s, const SpiralParams& params);

/// Integrates over [cfg.s_start, cfg.s_end]. With empty `sample_points`
/// every accepted step is recorded; otherwise exactly the given points
/// (strictly increasing, inside the window) plus the two endpoints.
Trajectory<SO3State> integrate_so3(const SO3State& state0, const SpiralParams& params,
                                   const OdeConfig& cfg, std::span<const double> sample_points = {});

Trajectory<SpinorState> integrate_spinor(const SpinorState& state0, const SpiralParams& params,
                                         const OdeConfig& cfg,
                                         std::span<const double> sample_points = {});

/// Integrates from s_from to s_to (either direction) and returns the end state.
SO3State propagate_so3(const SO3State& state0, double s_from, double s_to,
                       const SpiralParams& params, const OdeConfig& cfg);

SO3State hopf_map(const SpinorState& state) noexcept;

void write_csv(std::ostream& out, const Trajectory<SO3State>& traj);
void write_csv(std::ostream& out, const Trajectory<SpinorState>& traj);

struct LimitEstimate {
  double value = 0.0;
  double uncertainty = 0.0;
};

struct AsymptoticLimits {
  LimitEstimate z;
  LimitEstimate a_magnitude;
  IntegrationStats stats;
};

/// z(inf) and |a(inf)| from one integration of the propagator.
///
/// The window averages run over tail_window periods of the phase a s^2 / 2
/// at both ends of [s_start, s_end]. The uncertainty is half the spread of
/// the averaged samples plus the largest unitarity drift of the propagator.
AsymptoticLimits asymptotic_limits(const SpiralParams& params, const OdeConfig& cfg);

LimitEstimate z_infinity(const SpiralParams& params, const OdeConfig& cfg);
LimitEstimate a_infinity_magnitude(const SpiralParams& params, const OdeConfig& cfg);

/// Largest componentwise gap between hopf_map(spinor(s)) and the SO(3)
/// trajectory started from hopf_map(spinor(s_start)), over `sample_points`.
double hopf_consistency(const SpinorState& spinor0, const SpiralParams& params,
                        const OdeConfig& cfg, std::span<const double> sample_points);

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Generator of the rolling-sphere system at s.
Mat3 generator_matrix(double s, const SpiralParams& params);

struct BlockReport {
  /// Largest entry of a block that must vanish.
  double zero_block = 0.0;
  /// Largest gap between a nonzero block and its closed form in the chi vectors.
  double block_formula = 0.0;
  /// Largest gap in chi_i^T chi_{i+1} = cos(a (s_i^2 - s_{i+1}^2) / 2) / R^2.
  double chi_identity = 0.0;
  std::size_t products = 0;
  std::size_t pairs = 0;

  double max_deviation() const noexcept;
};

/// Checks every prefix product M(s_1)...M(s_k) and every consecutive chi
/// pair. Throws std::invalid_argument for fewer than two values.
BlockReport block_structure_check(std::span<const double> s_values, const SpiralParams& params);

/// Randomised suite: `products` products of lengths 1..max_length and
/// `pairs` chi identity checks, s uniform in [-s_range, s_range].
BlockReport block_structure_suite(std::size_t products, std::size_t pairs, std::size_t max_length,
                                  double s_range, const SpiralParams& params, std::uint64_t seed);

}  // namespace cornu::evo
