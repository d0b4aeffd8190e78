#include "mfg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mfg/error.hpp"
#include "mfg/linsolve.hpp"

namespace mfg {

Profile Profile::constant(double c) {
    Profile p;
    p.kind = Kind::Constant;
    p.scale = c;
    return p;
}

Profile Profile::sine(double scale, double frequency) {
    Profile p;
    p.kind = Kind::Sine;
    p.scale = scale;
    p.frequency = frequency;
    return p;
}

Profile Profile::exp_sine(double scale, double frequency) {
    Profile p;
    p.kind = Kind::ExpSine;
    p.scale = scale;
    p.frequency = frequency;
    return p;
}

Profile Profile::gaussian(Point mean, Point std, double scale) {
    if (!(std[0] > 0.0) || !(std[1] > 0.0)) throw Error(ErrorKind::Range, "gaussian profile: std must be positive");
    Profile p;
    p.kind = Kind::Gaussian;
    p.mean = mean;
    p.std = std;
    p.scale = scale;
    return p;
}

double gaussian_density(double x, double mean, double std) {
    const double z = (x - mean) / std;
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * std);
}

double Profile::operator()(Point x, int dim) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return scale;
        case Kind::Sine:
            return scale * std::sin(2.0 * std::numbers::pi * frequency * x[0]);
        case Kind::ExpSine:
            return scale * std::exp(std::sin(2.0 * std::numbers::pi * frequency * x[0]));
        case Kind::Gaussian: {
            double v = scale;
            for (int d = 0; d < dim; ++d) v *= gaussian_density(x[d], mean[d], std[d]);
            return v;
        }
    }
    return 0.0;
}

std::vector<double> Profile::sample(const GridSpec& grid) const {
    std::vector<double> out(grid.slice_size());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = (*this)(grid.point(p), grid.dim());
    return out;
}

Hamiltonian Hamiltonian::quadratic() { return Hamiltonian{}; }

Hamiltonian Hamiltonian::power(double gamma, Profile potential) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw Error(ErrorKind::Range, "power hamiltonian: gamma must exceed 1");
    Hamiltonian h;
    h.kind_ = Kind::Power;
    h.gamma_ = gamma;
    h.potential_ = potential;
    return h;
}

double Hamiltonian::kinetic(const Vec& p) const {
    const double sq = p[0] * p[0] + p[1] * p[1];
    if (kind_ == Kind::Quadratic) return 0.5 * sq;
    return std::pow(std::sqrt(sq), gamma_) / gamma_;
}

Vec Hamiltonian::kinetic_gradient(const Vec& p) const {
    if (kind_ == Kind::Quadratic) return p;
    const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1]);
    if (norm < 1e-12) return {0.0, 0.0};
    const double w = std::pow(norm, gamma_ - 2.0);
    return {w * p[0], w * p[1]};
}

double Hamiltonian::kinetic_lagrangian(const Vec& v) const {
    const double sq = v[0] * v[0] + v[1] * v[1];
    if (kind_ == Kind::Quadratic) return 0.5 * sq;
    const double g = conjugate_exponent();
    return std::pow(std::sqrt(sq), g) / g;
}

double lf_hamiltonian(const Hamiltonian& h, Point x, const Vec& p_plus, const Vec& p_minus, double nu_n, int dim) {
    Vec bar{0.0, 0.0};
    double dissipation = 0.0;
    for (int d = 0; d < dim; ++d) {
        bar[d] = 0.5 * (p_plus[d] + p_minus[d]);
        dissipation += 0.5 * (p_plus[d] - p_minus[d]);
    }
    return h.H(x, bar, dim) - nu_n * dissipation;
}

VelocityPair lf_velocities(const Hamiltonian& h, Point x, const Vec& p_plus, const Vec& p_minus, double nu_n,
                           int dim) {
    Vec bar{0.0, 0.0};
    for (int d = 0; d < dim; ++d) bar[d] = 0.5 * (p_plus[d] + p_minus[d]);
    const Vec g = h.grad_p(x, bar);
    VelocityPair v;
    for (int d = 0; d < dim; ++d) {
        v.plus[d] = -0.5 * g[d] + 0.5 * nu_n;
        v.minus[d] = -0.5 * g[d] - 0.5 * nu_n;
    }
    return v;
}

double AnalyticReference::std(double t) const { return p_.sigma0 * std::exp(p_.alpha * t); }

double AnalyticReference::rho(double x, double t) const { return gaussian_density(x, mean(t), std(t)); }

double AnalyticReference::phi(double x, double t) const {
    const double s = std(t);
    const double d = x - mean(t);
    return -(2.0 * p_.a * t + p_.b) * x - 0.5 * (p_.alpha - p_.nu / (s * s)) * d * d;
}

std::pair<std::vector<double>, std::vector<double>> analytic_reference(double t, const AnalyticReference& ref,
                                                                       const GridSpec& grid) {
    if (grid.dim() != 1) throw Error(ErrorKind::UnsupportedDimension, "analytic reference is one-dimensional");
    std::vector<double> rho(grid.slice_size()), phi(grid.slice_size());
    for (int i = 0; i <= grid.n_x(0); ++i) {
        const double x = grid.coordinate(0, i);
        rho[i] = ref.rho(x, t);
        phi[i] = ref.phi(x, t);
    }
    return {std::move(rho), std::move(phi)};
}

CostSpec CostSpec::local_affine(double a, Profile b) {
    CostSpec c;
    c.kind = Kind::LocalAffine;
    c.coefficient = a;
    c.profile = b;
    return c;
}

CostSpec CostSpec::convolution(double coefficient, Profile kernel) {
    CostSpec c;
    c.kind = Kind::Convolution;
    c.coefficient = coefficient;
    c.profile = kernel;
    return c;
}

CostSpec CostSpec::smoothed(double coefficient) {
    CostSpec c;
    c.kind = Kind::Smoothed;
    c.coefficient = coefficient;
    return c;
}

CostSpec CostSpec::moment_quadratic(ReferenceParams p) {
    CostSpec c;
    c.kind = Kind::MomentQuadratic;
    c.moment = p;
    return c;
}

CostSpec CostSpec::obstacle(double value, Point center, double radius_sq) {
    CostSpec c;
    c.kind = Kind::Obstacle;
    c.coefficient = value;
    c.center = center;
    c.radius_sq = radius_sq;
    return c;
}

TerminalCost TerminalCost::fixed(Profile f) {
    TerminalCost c;
    c.kind = Kind::Fixed;
    c.profile = f;
    return c;
}

TerminalCost TerminalCost::density_tracking(double eta, Profile target) {
    TerminalCost c;
    c.kind = Kind::DensityTracking;
    c.coefficient = eta;
    c.profile = target;
    return c;
}

TerminalCost TerminalCost::local_affine(double a) {
    TerminalCost c;
    c.kind = Kind::LocalAffine;
    c.coefficient = a;
    return c;
}

TerminalCost TerminalCost::moment_quadratic(ReferenceParams p) {
    TerminalCost c;
    c.kind = Kind::MomentQuadratic;
    c.moment = p;
    return c;
}

std::pair<double, double> moments(std::span<const double> rho, const GridSpec& grid) {
    if (grid.dim() != 1) throw Error(ErrorKind::UnsupportedDimension, "moments: only defined on 1D grids");
    if (rho.size() != grid.slice_size()) throw Error(ErrorKind::Shape, "moments: slice extent mismatch");
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i <= grid.n_x(0); ++i) {
        const double x = grid.coordinate(0, i);
        m1 += x * rho[i];
        m2 += x * x * rho[i];
    }
    return {m1 * grid.dx(0), m2 * grid.dx(0)};
}

namespace {

double checked_variance(std::span<const double> rho, const GridSpec& grid, double& mu1) {
    const auto [m1, m2] = moments(rho, grid);
    const double var = m2 - m1 * m1;
    if (!(var > 0.0)) {
        throw Error(ErrorKind::DegenerateCost, "moment-quadratic cost: nonpositive variance " + std::to_string(var));
    }
    mu1 = m1;
    return var;
}

std::vector<double> convolve(std::span<const double> rho, const CostSpec& spec, const GridSpec& grid) {
    const std::size_t size = grid.slice_size();
    std::vector<double> out(size, 0.0);
    const double weight = spec.coefficient * grid.cell_volume();
    if (grid.dim() == 1) {
        const int n = grid.n_x(0);
        std::vector<double> table(2 * n + 1);
        for (int k = -n; k <= n; ++k) table[k + n] = spec.profile({k * grid.dx(0), 0.0}, 1);
        for (int i = 0; i <= n; ++i) {
            double acc = 0.0;
            for (int j = 0; j <= n; ++j) acc += table[i - j + n] * rho[j];
            out[i] = weight * acc;
        }
        return out;
    }
    const int n0 = grid.n_x(0), n1 = grid.n_x(1);
    const int w1 = 2 * n1 + 1;
    std::vector<double> table(static_cast<std::size_t>(2 * n0 + 1) * w1);
    for (int a = -n0; a <= n0; ++a) {
        for (int b = -n1; b <= n1; ++b) {
            table[static_cast<std::size_t>(a + n0) * w1 + (b + n1)] = spec.profile({a * grid.dx(0), b * grid.dx(1)}, 2);
        }
    }
    const std::size_t s0 = grid.stride(0);
    for (int i0 = 0; i0 <= n0; ++i0) {
        for (int i1 = 0; i1 <= n1; ++i1) {
            double acc = 0.0;
            for (int j0 = 0; j0 <= n0; ++j0) {
                const double* row = &table[static_cast<std::size_t>(i0 - j0 + n0) * w1 + (i1 + n1)];
                const double* r = &rho[j0 * s0];
                for (int j1 = 0; j1 <= n1; ++j1) acc += row[-j1] * r[j1];
            }
            out[i0 * s0 + i1] = weight * acc;
        }
    }
    return out;
}

}  // namespace

std::vector<double> helmholtz_solve(std::span<const double> w, const GridSpec& grid) {
    const std::size_t size = grid.slice_size();
    if (w.size() != size) throw Error(ErrorKind::Shape, "helmholtz_solve: slice extent mismatch");
    if (grid.dim() == 1) {
        const int n = grid.n_x(0);
        const double inv2 = 1.0 / (grid.dx(0) * grid.dx(0));
        BandedMatrix A(size, 1, 1);
        for (int i = 0; i <= n; ++i) {
            A(i, i) = 1.0;
            if (i > 0) {
                A(i, i) += inv2;
                A(i, i - 1) = -inv2;
            }
            if (i < n) {
                A(i, i) += inv2;
                A(i, i + 1) = -inv2;
            }
        }
        return solve_banded(A, w);
    }
    std::vector<Triplet> trips;
    trips.reserve(5 * size);
    for (std::size_t p = 0; p < size; ++p) {
        trips.push_back({p, p, 1.0});
        const auto idx = grid.multi_index(p);
        for (int d = 0; d < 2; ++d) {
            const double inv2 = 1.0 / (grid.dx(d) * grid.dx(d));
            const std::size_t s = grid.stride(d);
            if (idx[d] > 0) {
                trips.push_back({p, p, inv2});
                trips.push_back({p, p - s, -inv2});
            }
            if (idx[d] < grid.n_x(d)) {
                trips.push_back({p, p, inv2});
                trips.push_back({p, p + s, -inv2});
            }
        }
    }
    return solve_sparse(SparseMatrix(size, std::move(trips)), w, 1e-13, 2000);
}

std::vector<double> eval_interaction(std::span<const double> rho, double t, const CostSpec& spec,
                                     const GridSpec& grid) {
    const std::size_t size = grid.slice_size();
    if (rho.size() != size) throw Error(ErrorKind::Shape, "eval_interaction: slice extent mismatch");
    std::vector<double> out(size, 0.0);
    switch (spec.kind) {
        case CostSpec::Kind::Zero:
            break;
        case CostSpec::Kind::LocalAffine:
            for (std::size_t p = 0; p < size; ++p) {
                out[p] = spec.coefficient * rho[p] + spec.profile(grid.point(p), grid.dim());
            }
            break;
        case CostSpec::Kind::Convolution:
            out = convolve(rho, spec, grid);
            break;
        case CostSpec::Kind::Smoothed: {
            out = helmholtz_solve(helmholtz_solve(rho, grid), grid);
            for (double& v : out) v *= spec.coefficient;
            break;
        }
        case CostSpec::Kind::MomentQuadratic: {
            double mu1 = 0.0;
            const double var = checked_variance(rho, grid, mu1);
            const auto& m = spec.moment;
            const double quad = 0.5 * (m.alpha * m.alpha + m.nu * m.nu / (var * var));
            const double beta = 2.0 * m.a * t + m.b;
            const double constant = 0.5 * beta * beta + m.alpha * m.nu - m.nu * m.nu / var;
            for (int i = 0; i <= grid.n_x(0); ++i) {
                const double x = grid.coordinate(0, i);
                out[i] = quad * (x - mu1) * (x - mu1) + 2.0 * m.a * x + constant;
            }
            break;
        }
        case CostSpec::Kind::Obstacle:
            for (std::size_t p = 0; p < size; ++p) {
                const Point x = grid.point(p);
                double r2 = 0.0;
                for (int d = 0; d < grid.dim(); ++d) r2 += (x[d] - spec.center[d]) * (x[d] - spec.center[d]);
                out[p] = r2 <= spec.radius_sq ? spec.coefficient : 0.0;
            }
            break;
    }
    return out;
}

std::vector<double> eval_terminal(std::span<const double> rho_T, const TerminalCost& spec, const GridSpec& grid) {
    const std::size_t size = grid.slice_size();
    if (rho_T.size() != size) throw Error(ErrorKind::Shape, "eval_terminal: slice extent mismatch");
    std::vector<double> out(size, 0.0);
    switch (spec.kind) {
        case TerminalCost::Kind::Zero:
            break;
        case TerminalCost::Kind::Fixed:
            out = spec.profile.sample(grid);
            break;
        case TerminalCost::Kind::DensityTracking: {
            const auto target = spec.profile.sample(grid);
            for (std::size_t p = 0; p < size; ++p) out[p] = spec.coefficient * (rho_T[p] - target[p]);
            break;
        }
        case TerminalCost::Kind::LocalAffine:
            for (std::size_t p = 0; p < size; ++p) out[p] = spec.coefficient * rho_T[p];
            break;
        case TerminalCost::Kind::MomentQuadratic: {
            double mu1 = 0.0;
            const double var = checked_variance(rho_T, grid, mu1);
            const auto& m = spec.moment;
            const double slope = 2.0 * m.a * grid.T() + m.b;
            const double curv = m.alpha - m.nu / var;
            for (int i = 0; i <= grid.n_x(0); ++i) {
                const double x = grid.coordinate(0, i);
                out[i] = -slope * x - 0.5 * curv * (x - mu1) * (x - mu1);
            }
            break;
        }
    }
    return out;
}

GridSpec ProblemDefinition::grid(int level) const {
    const int scale = 1 << level;
    if (dim == 1) return GridSpec::line(lower[0], upper[0], n_x[0] * scale, T, n_t * scale, level);
    return GridSpec::plane(lower, upper, {n_x[0] * scale, n_x[1] * scale}, T, n_t * scale, level);
}

ProblemSpec instantiate(const ProblemDefinition& def, const GridSpec& grid) {
    if (grid.dim() != def.dim) throw Error(ErrorKind::GridMismatch, "instantiate: grid dimension differs from problem");
    for (int d = 0; d < def.dim; ++d) {
        if (grid.x_min(d) != def.lower[d] || grid.x_max(d) != def.upper[d]) {
            throw Error(ErrorKind::GridMismatch, "instantiate: grid extent differs from problem domain");
        }
    }
    if (!(def.nu >= 0.0) || !(def.nu_n >= 0.0)) throw Error(ErrorKind::Range, "instantiate: viscosities must be >= 0");
    if ((def.interaction.kind == CostSpec::Kind::MomentQuadratic ||
         def.terminal.kind == TerminalCost::Kind::MomentQuadratic) &&
        def.dim != 1) {
        throw Error(ErrorKind::UnsupportedDimension, "moment-quadratic costs need a 1D grid");
    }

    ProblemSpec p;
    p.definition = def;
    p.grid = grid;
    p.hamiltonian = def.hamiltonian;
    p.interaction = def.interaction;
    p.terminal = def.terminal;
    p.nu = def.nu;
    p.nu_n = def.nu_n;
    p.interaction.moment.nu = def.nu;
    p.terminal.moment.nu = def.nu;
    if (def.eta_per_level) {
        const double eta = *def.eta_per_level * grid.level();
        if (p.terminal.kind == TerminalCost::Kind::DensityTracking) p.terminal.coefficient = eta;
        if (p.interaction.kind == CostSpec::Kind::Obstacle) p.interaction.coefficient = 2.0 * eta;
    }
    p.rho0 = def.rho0.sample(grid);
    double mass = 0.0;
    for (double v : p.rho0) {
        if (!(v >= 0.0)) throw Error(ErrorKind::Range, "instantiate: initial density must be nonnegative");
        mass += v;
    }
    p.mass0 = mass * grid.cell_volume();
    if (!(p.mass0 > 0.0)) throw Error(ErrorKind::Range, "instantiate: initial density has zero mass");
    p.potential = def.hamiltonian.potential().sample(grid);
    if (def.reference) {
        ReferenceParams r = *def.reference;
        r.nu = def.nu;
        p.reference = AnalyticReference(r);
    }
    return p;
}

ScalarField reference_density(const ProblemSpec& problem) {
    if (!problem.reference) throw Error(ErrorKind::Catalog, "problem has no analytic reference");
    ScalarField out(problem.grid);
    for (int n = 0; n <= problem.grid.n_t(); ++n) {
        out.set_slice(n, analytic_reference(problem.grid.time(n), *problem.reference, problem.grid).first);
    }
    return out;
}

}  // namespace mfg
