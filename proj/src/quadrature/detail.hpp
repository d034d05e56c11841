#pragma once

#include <cstddef>

#include "cornu/core.hpp"

namespace cornu::quad::detail {

std::size_t quadratic_phase_pieces(double lo, double hi, std::size_t max_intervals);

/// Extrapolation order actually usable with the configured grid.
int effective_order(const QuadratureConfig& cfg);

}  // namespace cornu::quad::detail
