#include "mfg/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfg/error.hpp"
#include "step_operator.hpp"

namespace mfg {

void NewtonOptions::validate() const {
    if (!(tol_residual > 0.0)) throw Error(ErrorKind::Range, "newton: tol_residual must be positive");
    if (max_newton < 1) throw Error(ErrorKind::Range, "newton: max_newton must be at least 1");
    if (!(min_step > 0.0 && min_step <= 1.0)) throw Error(ErrorKind::Range, "newton: min_step must lie in (0,1]");
}

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b, const ProblemSpec& problem, const char* what) {
    if (!(a.grid() == problem.grid) || !(b.grid() == problem.grid)) {
        throw Error(ErrorKind::GridMismatch, std::string(what) + ": field grid differs from problem grid");
    }
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

Coupling evaluate_coupling(const ScalarField& rho, const ProblemSpec& problem) {
    if (!(rho.grid() == problem.grid)) throw Error(ErrorKind::GridMismatch, "coupling: density grid differs");
    const GridSpec& g = problem.grid;
    Coupling c;
    c.f.resize(g.n_t() + 1);
    for (int n = 1; n <= g.n_t(); ++n) c.f[n] = eval_interaction(rho.slice(n), g.time(n), problem.interaction, g);
    c.f_T = eval_terminal(rho.slice(g.n_t()), problem.terminal, g);
    return c;
}

LfSlopes lf_slopes(const SidedPair& grad, const ProblemSpec& problem) {
    const int dim = problem.dim();
    const std::size_t size = problem.grid.slice_size();
    LfSlopes s;
    s.plus.assign(dim, std::vector<double>(size));
    s.minus.assign(dim, std::vector<double>(size));
    const double half_nu = 0.5 * problem.nu_n;
    for (std::size_t p = 0; p < size; ++p) {
        Vec bar{0.0, 0.0};
        for (int d = 0; d < dim; ++d) bar[d] = 0.5 * (grad.plus[d][p] + grad.minus[d][p]);
        const Vec gH = problem.hamiltonian.kinetic_gradient(bar);
        for (int d = 0; d < dim; ++d) {
            s.plus[d][p] = 0.5 * gH[d] - half_nu;
            s.minus[d][p] = 0.5 * gH[d] + half_nu;
        }
    }
    return s;
}

std::vector<double> lf_hamiltonian_slice(const SidedPair& grad, const ProblemSpec& problem) {
    const int dim = problem.dim();
    const std::size_t size = problem.grid.slice_size();
    std::vector<double> out(size);
    for (std::size_t p = 0; p < size; ++p) {
        Vec bar{0.0, 0.0};
        double dissipation = 0.0;
        for (int d = 0; d < dim; ++d) {
            bar[d] = 0.5 * (grad.plus[d][p] + grad.minus[d][p]);
            dissipation += 0.5 * (grad.plus[d][p] - grad.minus[d][p]);
        }
        out[p] = problem.potential[p] + problem.hamiltonian.kinetic(bar) - problem.nu_n * dissipation;
    }
    return out;
}

std::vector<double> hjb_step_residual(std::span<const double> phi, std::span<const double> phi_next,
                                      std::span<const double> f_next, const ProblemSpec& problem) {
    const GridSpec& g = problem.grid;
    if (phi_next.size() != g.slice_size() || f_next.size() != g.slice_size()) {
        throw Error(ErrorKind::Shape, "hjb step residual: slice extent mismatch");
    }
    const auto grad = one_sided_gradients(phi, g);
    const auto ham = lf_hamiltonian_slice(grad, problem);
    const auto lap = laplacian(phi, g);
    const double inv_dt = 1.0 / g.dt();
    std::vector<double> r(phi.size());
    for (std::size_t p = 0; p < r.size(); ++p) {
        r[p] = (phi[p] - phi_next[p]) * inv_dt - problem.nu * lap[p] + ham[p] - f_next[p];
    }
    return r;
}

std::vector<double> hjb_step_jacobian_dense(std::span<const double> phi, const ProblemSpec& problem) {
    const auto slopes = lf_slopes(one_sided_gradients(phi, problem.grid), problem);
    return detail::step_matrix_dense(problem.grid, problem.nu, slopes);
}

ScalarField hjb_residual(const ScalarField& rho, const ScalarField& phi, const ProblemSpec& problem) {
    require_same_grid(rho, phi, problem, "hjb_residual");
    const GridSpec& g = problem.grid;
    const Coupling c = evaluate_coupling(rho, problem);
    ScalarField out(g);
    for (int n = 0; n < g.n_t(); ++n) {
        out.set_slice(n, hjb_step_residual(phi.slice(n), phi.slice(n + 1), c.f[n + 1], problem));
    }
    auto last = out.slice(g.n_t());
    const auto phiT = phi.slice(g.n_t());
    for (std::size_t p = 0; p < last.size(); ++p) last[p] = phiT[p] - c.f_T[p];
    return out;
}

std::vector<double> newton_time_step(std::span<const double> phi_next, std::span<const double> f_next,
                                     const ProblemSpec& problem, const NewtonOptions& opts, int time_index) {
    opts.validate();
    const GridSpec& g = problem.grid;
    std::vector<double> phi(phi_next.begin(), phi_next.end());
    std::vector<double> r = hjb_step_residual(phi, phi_next, f_next, problem);
    double rn = max_abs(r);
    if (!std::isfinite(rn)) throw NewtonFailure(rn, time_index, "newton: nonfinite residual at warm start");

    for (int it = 0; it < opts.max_newton; ++it) {
        if (rn <= opts.tol_residual) return phi;
        const auto slopes = lf_slopes(one_sided_gradients(phi, g), problem);
        std::vector<double> neg(r.size());
        for (std::size_t p = 0; p < r.size(); ++p) neg[p] = -r[p];
        const auto step_dir = detail::solve_step(g, problem.nu, slopes, false, neg);

        double step = 1.0;
        bool accepted = false;
        std::vector<double> trial(phi.size());
        while (step >= opts.min_step) {
            for (std::size_t p = 0; p < phi.size(); ++p) trial[p] = phi[p] + step * step_dir[p];
            auto r_trial = hjb_step_residual(trial, phi_next, f_next, problem);
            const double rn_trial = max_abs(r_trial);
            if (rn_trial < rn) {
                phi.swap(trial);
                r.swap(r_trial);
                rn = rn_trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // Stagnation at roundoff: the update is below the representable
            // resolution of φ and the residual is already near tolerance.
            const double scale = std::max(1.0, max_abs(phi));
            if (max_abs(step_dir) <= 1e-12 * scale && rn <= 1e3 * opts.tol_residual) return phi;
            throw NewtonFailure(rn, time_index,
                                "newton: no residual decrease down to the minimum step at time index " +
                                    std::to_string(time_index) + ", residual " + std::to_string(rn));
        }
    }
    if (rn <= opts.tol_residual) return phi;
    throw NewtonFailure(rn, time_index,
                        "newton: not converged after " + std::to_string(opts.max_newton) +
                            " iterations at time index " + std::to_string(time_index) + ", residual " +
                            std::to_string(rn));
}

std::vector<double> newton_time_step(std::span<const double> phi_next, std::span<const double> rho_next,
                                     double t_next, const ProblemSpec& problem, const NewtonOptions& opts) {
    const auto f = eval_interaction(rho_next, t_next, problem.interaction, problem.grid);
    return newton_time_step(phi_next, f, problem, opts, -1);
}

ScalarField hjb_backward_sweep(const Coupling& coupling, const ProblemSpec& problem, const NewtonOptions& opts) {
    const GridSpec& g = problem.grid;
    if (static_cast<int>(coupling.f.size()) != g.n_t() + 1 || coupling.f_T.size() != g.slice_size()) {
        throw Error(ErrorKind::Shape, "hjb sweep: coupling does not match the problem grid");
    }
    ScalarField phi(g);
    phi.set_slice(g.n_t(), coupling.f_T);
    for (int n = g.n_t() - 1; n >= 0; --n) {
        const auto next = phi.slice(n + 1);
        phi.set_slice(n, newton_time_step(next, coupling.f[n + 1], problem, opts, n));
    }
    return phi;
}

ScalarField hjb_backward_sweep(const ScalarField& rho, const ProblemSpec& problem, const NewtonOptions& opts) {
    return hjb_backward_sweep(evaluate_coupling(rho, problem), problem, opts);
}

}  // namespace mfg
