#pragma once

#include <string>

#include "mfg/catalog.hpp"
#include "mfg/problem.hpp"

namespace fixtures {

/// Catalog problem on a desk-scale grid.
inline mfg::ProblemSpec desk(const std::string& name, int n_x_1d = 64, int n_t = 16) {
    mfg::ProblemDefinition d = mfg::builtin_definition(name);
    if (d.dim == 1) {
        d.n_x = {n_x_1d, 0};
        d.n_t = n_t;
    } else {
        d.n_x = {16, 16};
        d.n_t = 4;
    }
    return mfg::instantiate(d, d.grid(d.eta_per_level ? 1 : 0));
}

/// 1D quadratic-Hamiltonian problem without costs on [0, 1].
inline mfg::ProblemDefinition plain_line(int n_x, int n_t, double nu, double nu_n) {
    mfg::ProblemDefinition d;
    d.name = "plain";
    d.lower = {0.0, 0.0};
    d.upper = {1.0, 0.0};
    d.n_x = {n_x, 0};
    d.n_t = n_t;
    d.nu = nu;
    d.nu_n = nu_n;
    d.rho0 = mfg::Profile::gaussian({0.4, 0.0}, {0.15, 1.0});
    return d;
}

inline mfg::ScalarField stationary_rho(const mfg::ProblemSpec& p) {
    mfg::ScalarField rho(p.grid);
    for (int n = 0; n <= p.grid.n_t(); ++n) rho.set_slice(n, p.rho0);
    return rho;
}

}  // namespace fixtures
