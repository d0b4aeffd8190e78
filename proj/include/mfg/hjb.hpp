#pragma once

#include <span>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct NewtonOptions {
    /// Max-norm bound on the per-slice residual.
    double tol_residual = 1e-11;
    int max_newton = 50;
    double min_step = 1.0 / (1 << 20);

    void validate() const;
    bool operator==(const NewtonOptions&) const = default;
};

/// Interaction cost slices f(·, ρ_n, t_n) for n = 1..n_t (slot 0 stays empty)
/// and the terminal cost f_T(·, ρ_{n_t}) for one frozen density.
struct Coupling {
    std::vector<std::vector<double>> f;
    std::vector<double> f_T;
};

Coupling evaluate_coupling(const ScalarField& rho, const ProblemSpec& problem);

/// ∂H^LF/∂p⁺ and ∂H^LF/∂p⁻ per dimension at every node of one slice,
/// given [D_x φ] there.
struct LfSlopes {
    std::vector<std::vector<double>> plus;
    std::vector<std::vector<double>> minus;
};

LfSlopes lf_slopes(const SidedPair& grad, const ProblemSpec& problem);

/// H^LF(x_i, [D_x φ]_i) over one slice, potential included.
std::vector<double> lf_hamiltonian_slice(const SidedPair& grad, const ProblemSpec& problem);

ScalarField hjb_residual(const ScalarField& rho, const ScalarField& phi, const ProblemSpec& problem);

/// Residual of one backward step: (φ − φ_next)/Δt − νΔ_xφ + H^LF([D_xφ]) − f_next.
std::vector<double> hjb_step_residual(std::span<const double> phi, std::span<const double> phi_next,
                                      std::span<const double> f_next, const ProblemSpec& problem);

/// Newton Jacobian of hjb_step_residual, dense row-major. Test and diagnostic use.
std::vector<double> hjb_step_jacobian_dense(std::span<const double> phi, const ProblemSpec& problem);

std::vector<double> newton_time_step(std::span<const double> phi_next, std::span<const double> f_next,
                                     const ProblemSpec& problem, const NewtonOptions& opts = {},
                                     int time_index = -1);
std::vector<double> newton_time_step(std::span<const double> phi_next, std::span<const double> rho_next,
                                     double t_next, const ProblemSpec& problem, const NewtonOptions& opts = {});

ScalarField hjb_backward_sweep(const Coupling& coupling, const ProblemSpec& problem, const NewtonOptions& opts = {});
ScalarField hjb_backward_sweep(const ScalarField& rho, const ProblemSpec& problem, const NewtonOptions& opts = {});

}  // namespace mfg
