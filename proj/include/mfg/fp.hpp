#pragma once

#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

namespace mfg {

/// Slice 0 holds ρ_0 − ρ0(x); slice n+1 holds
/// (ρ_{n+1} − ρ_n)/Δt − νΔ_xρ_{n+1} − 2 D_x*[ρ_{n+1} v_n] with v± the LF
/// velocities of [D_x φ_n].
ScalarField fp_residual(const ScalarField& rho, const ScalarField& phi, const ProblemSpec& problem);

ScalarField fp_forward_sweep(const ScalarField& phi, const ProblemSpec& problem);

}  // namespace mfg
