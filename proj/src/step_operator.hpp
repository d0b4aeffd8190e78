#pragma once

#include <span>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/hjb.hpp"

namespace mfg::detail {

/// Solves M x = rhs with M = I/Δt − νΔ_x + Σ_d diag(a⁺_d) D⁺_d + diag(a⁻_d) D⁻_d,
/// or Mᵀ x = rhs when transpose is set. Tridiagonal in 1D, 5-point in 2D.
std::vector<double> solve_step(const GridSpec& grid, double nu, const LfSlopes& slopes, bool transpose,
                               std::span<const double> rhs);

/// Dense row-major copy of M.
std::vector<double> step_matrix_dense(const GridSpec& grid, double nu, const LfSlopes& slopes);

}  // namespace mfg::detail
