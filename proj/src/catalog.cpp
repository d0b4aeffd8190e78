#include "mfg/catalog.hpp"

#include "mfg/error.hpp"

namespace mfg {

namespace {

ProblemDefinition line_problem(std::string name, std::string description, double lo, double hi, int n_x, int n_t) {
    ProblemDefinition d;
    d.name = std::move(name);
    d.description = std::move(description);
    d.dim = 1;
    d.lower = {lo, 0.0};
    d.upper = {hi, 0.0};
    d.n_x = {n_x, 0};
    d.n_t = n_t;
    d.T = 1.0;
    return d;
}

ProblemDefinition plane_problem(std::string name, std::string description, double lo, double hi, int n_x, int n_t) {
    ProblemDefinition d;
    d.name = std::move(name);
    d.description = std::move(description);
    d.dim = 2;
    d.lower = {lo, lo};
    d.upper = {hi, hi};
    d.n_x = {n_x, n_x};
    d.n_t = n_t;
    d.T = 1.0;
    return d;
}

CatalogEntry fixpoint_div() {
    CatalogEntry e;
    e.definition = line_problem("fixpoint-div", "fixed-point iteration divergence, local cost rho + exp(sin 2 pi x)",
                                -0.5, 0.5, 200, 30);
    auto& d = e.definition;
    d.interaction = CostSpec::local_affine(1.0, Profile::exp_sine(1.0, 1.0));
    d.rho0 = Profile::gaussian({0.0, 0.0}, {0.2, 1.0});
    d.nu = 0.1;
    d.nu_n = 1.0;
    e.schedule = WeightSchedule::constant(1.0);
    e.epsilon = 1e-10;
    e.k_max = 100;
    return e;
}

CatalogEntry local_linear() {
    CatalogEntry e;
    e.definition = line_problem("local-linear", "linear convergence demo, local cost f = rho on [-5,5]", -5.0, 5.0,
                                1000, 30);
    auto& d = e.definition;
    d.interaction = CostSpec::local_affine(1.0);
    d.rho0 = Profile::gaussian({0.0, 0.0}, {0.5, 1.0});
    d.nu = 0.1;
    d.nu_n = 1.0;
    e.schedule = WeightSchedule::constant(0.5);
    e.gain_form = GainForm::Value;
    e.epsilon = 1e-12;
    e.k_max = 200;
    return e;
}

CatalogEntry nonpot_2d() {
    CatalogEntry e;
    e.definition = plane_problem("nonpot-2d", "non-potential 2D game, anisotropic Gaussian convolution cost", -5.0,
                                 5.0, 32, 4);
    auto& d = e.definition;
    d.interaction = CostSpec::convolution(10.0, Profile::gaussian({0.0, 0.0}, {4.0, 0.5}));
    d.terminal = TerminalCost::density_tracking(150.0, Profile::gaussian({2.0, 2.0}, {1.0, 0.5}));
    d.rho0 = Profile::gaussian({-2.0, -2.0}, {1.0, 0.5});
    d.nu = 1.0;
    d.nu_n = 0.0;
    e.schedule = WeightSchedule::constant(0.1);
    e.epsilon = 1e-6;
    e.k_max = 500;
    return e;
}

CatalogEntry power_nonlocal() {
    CatalogEntry e;
    e.definition = line_problem("power-nonlocal", "power Hamiltonian gamma=1.5 with smoothed nonlocal cost", -1.0, 1.0,
                                500, 100);
    auto& d = e.definition;
    d.hamiltonian = Hamiltonian::power(1.5, Profile::sine(-1.0, 1.0));
    d.interaction = CostSpec::smoothed(100.0);
    d.terminal = TerminalCost::local_affine(1.0);
    d.rho0 = Profile::gaussian({0.0, 0.0}, {0.1, 1.0});
    d.nu = 0.1;
    d.nu_n = 0.0;
    e.schedule = WeightSchedule::btls(1.0, 0.5, 0.8);
    e.epsilon = 1e-10;
    e.k_max = 500;
    return e;
}

ReferenceParams gauss_params(double a, double b, double c, double sigma0, double alpha) {
    ReferenceParams p;
    p.a = a;
    p.b = b;
    p.c = c;
    p.sigma0 = sigma0;
    p.alpha = alpha;
    return p;
}

CatalogEntry gauss_problem(std::string name, std::string description, ReferenceParams p, double nu, double nu_n,
                           int n_x, int n_t) {
    CatalogEntry e;
    e.definition = line_problem(std::move(name), std::move(description), -5.0, 5.0, n_x, n_t);
    auto& d = e.definition;
    d.interaction = CostSpec::moment_quadratic(p);
    d.terminal = TerminalCost::moment_quadratic(p);
    d.rho0 = Profile::gaussian({p.c, 0.0}, {p.sigma0, 1.0});
    d.nu = nu;
    d.nu_n = nu_n;
    d.reference = p;
    e.init = "rho";
    return e;
}

CatalogEntry gauss_firstorder() {
    CatalogEntry e = gauss_problem("gauss-firstorder", "first-order moving Gaussian with closed-form equilibrium",
                                   gauss_params(0.0, 0.5, -0.25, 0.5, -0.1), 0.0, 1.0, 4096, 128);
    e.schedule = WeightSchedule::constant(0.1);
    e.epsilon = 1e-6;
    e.k_max = 500;
    e.levels = 3;
    return e;
}

CatalogEntry gauss_viscous() {
    CatalogEntry e = gauss_problem("gauss-viscous", "viscous moving Gaussian with closed-form equilibrium",
                                   gauss_params(6.0, -5.0, 0.0, 1.0, -0.5), 0.1, 0.0, 1024, 64);
    e.init = "phi";
    e.schedule = WeightSchedule::constant(0.25);
    e.epsilon = 1e-6;
    e.k_max = 500;
    e.levels = 2;
    return e;
}

CatalogEntry planning_obstacle() {
    CatalogEntry e;
    e.definition = plane_problem("planning-obstacle", "penalized planning around a disk obstacle, eta = 50 per level",
                                 -5.0, 5.0, 64, 16);
    auto& d = e.definition;
    d.interaction = CostSpec::obstacle(0.0, {0.0, 0.0}, 2.0);
    d.terminal = TerminalCost::density_tracking(0.0, Profile::gaussian({3.0, 3.0}, {0.5, 0.5}));
    d.rho0 = Profile::gaussian({-3.0, -3.0}, {0.5, 0.5});
    d.nu = 1.0;
    d.nu_n = 0.0;
    d.eta_per_level = 50.0;
    e.schedule = WeightSchedule::constant(0.1);
    e.epsilon = 1e-6;
    e.k_max = 200;
    e.levels = 3;
    return e;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"fixpoint-div",     "local-linear",  "nonpot-2d",
                                                "power-nonlocal",   "gauss-firstorder", "gauss-viscous",
                                                "planning-obstacle"};
    return names;
}

CatalogEntry catalog_entry(const std::string& name) {
    if (name == "fixpoint-div") return fixpoint_div();
    if (name == "local-linear") return local_linear();
    if (name == "nonpot-2d") return nonpot_2d();
    if (name == "power-nonlocal") return power_nonlocal();
    if (name == "gauss-firstorder") return gauss_firstorder();
    if (name == "gauss-viscous") return gauss_viscous();
    if (name == "planning-obstacle") return planning_obstacle();
    std::string valid;
    for (const auto& n : catalog_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::Catalog, "unknown problem '" + name + "'; valid names: " + valid);
}

ProblemDefinition builtin_definition(const std::string& name) { return catalog_entry(name).definition; }

ProblemSpec builtin_catalog(const std::string& name) {
    const ProblemDefinition d = builtin_definition(name);
    return instantiate(d, d.grid(0));
}

ProblemDefinition coarsened(const ProblemDefinition& def, int levels) {
    if (levels < 0) throw Error(ErrorKind::Range, "coarsened: levels must be nonnegative");
    ProblemDefinition out = def;
    const int factor = 1 << levels;
    auto shrink = [&](int n, const char* what) {
        if (n % factor != 0 || n / factor < (std::string(what) == "n_t" ? 1 : 2)) {
            throw Error(ErrorKind::Range, std::string("hierarchy: ") + what + "=" + std::to_string(n) +
                                              " is not divisible into " + std::to_string(levels) + " coarser levels");
        }
        return n / factor;
    };
    for (int d = 0; d < def.dim; ++d) out.n_x[d] = shrink(def.n_x[d], "n_x");
    out.n_t = shrink(def.n_t, "n_t");
    return out;
}

}  // namespace mfg
