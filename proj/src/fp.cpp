#include "mfg/fp.hpp"

#include <string>

#include "mfg/error.hpp"
#include "mfg/hjb.hpp"
#include "step_operator.hpp"

namespace mfg {

ScalarField fp_residual(const ScalarField& rho, const ScalarField& phi, const ProblemSpec& problem) {
    const GridSpec& g = problem.grid;
    if (!(rho.grid() == g) || !(phi.grid() == g)) {
        throw Error(ErrorKind::GridMismatch, "fp_residual: field grid differs from problem grid");
    }
    const std::size_t size = g.slice_size();
    const double inv_dt = 1.0 / g.dt();
    ScalarField out(g);
    {
        auto r0 = out.slice(0);
        const auto rho0 = rho.slice(0);
        for (std::size_t p = 0; p < size; ++p) r0[p] = rho0[p] - problem.rho0[p];
    }
    for (int n = 0; n < g.n_t(); ++n) {
        const auto slopes = lf_slopes(one_sided_gradients(phi.slice(n), g), problem);
        const auto next = rho.slice(n + 1);
        const auto prev = rho.slice(n);
        // −2 D*[ρ v] with v± = −∂H^LF/∂p±.
        SidedPair flux;
        flux.plus.assign(g.dim(), std::vector<double>(size));
        flux.minus.assign(g.dim(), std::vector<double>(size));
        for (int d = 0; d < g.dim(); ++d) {
            for (std::size_t p = 0; p < size; ++p) {
                flux.plus[d][p] = slopes.plus[d][p] * next[p];
                flux.minus[d][p] = slopes.minus[d][p] * next[p];
            }
        }
        const auto transport = adjoint_divergence(flux, g);
        const auto lap = laplacian(next, g);
        auto r = out.slice(n + 1);
        for (std::size_t p = 0; p < size; ++p) {
            r[p] = (next[p] - prev[p]) * inv_dt - problem.nu * lap[p] + 2.0 * transport[p];
        }
    }
    return out;
}

ScalarField fp_forward_sweep(const ScalarField& phi, const ProblemSpec& problem) {
    const GridSpec& g = problem.grid;
    if (!(phi.grid() == g)) throw Error(ErrorKind::GridMismatch, "fp sweep: value function grid differs");
    const double inv_dt = 1.0 / g.dt();
    ScalarField rho(g);
    rho.set_slice(0, problem.rho0);
    std::vector<double> rhs(g.slice_size());
    for (int n = 0; n < g.n_t(); ++n) {
        const auto slopes = lf_slopes(one_sided_gradients(phi.slice(n), g), problem);
        const auto prev = rho.slice(n);
        for (std::size_t p = 0; p < rhs.size(); ++p) rhs[p] = prev[p] * inv_dt;
        try {
            rho.set_slice(n + 1, detail::solve_step(g, problem.nu, slopes, true, rhs));
        } catch (const SingularMatrixError& e) {
            throw SingularMatrixError(e.pivot(), "fp sweep at time index " + std::to_string(n) + ": " + e.what());
        } catch (const IterativeFailure& e) {
            throw IterativeFailure(e.residual(), "fp sweep at time index " + std::to_string(n) + ": " + e.what());
        }
    }
    return rho;
}

}  // namespace mfg
