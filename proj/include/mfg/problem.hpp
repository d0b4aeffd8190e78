#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfg/grid.hpp"

namespace mfg {

/// Momentum-space vector; entries past the grid dimension stay zero.
using Vec = std::array<double, 2>;

/// Closed-form scalar function of position, sampled onto grids on demand.
struct Profile {
    enum class Kind { Zero, Constant, Sine, ExpSine, Gaussian };

    Kind kind = Kind::Zero;
    double scale = 1.0;
    /// Sine, ExpSine: scale·sin(2π·frequency·x₀) and scale·exp(sin(2π·frequency·x₀)).
    double frequency = 1.0;
    /// Gaussian: scale·Π_d ρ_G(x_d; mean_d, std_d).
    Point mean{0.0, 0.0};
    Point std{1.0, 1.0};

    static Profile zero() { return {}; }
    static Profile constant(double c);
    static Profile sine(double scale, double frequency);
    static Profile exp_sine(double scale, double frequency);
    static Profile gaussian(Point mean, Point std, double scale = 1.0);

    double operator()(Point x, int dim) const;
    std::vector<double> sample(const GridSpec& grid) const;

    bool operator==(const Profile&) const = default;
};

/// Univariate Gaussian density.
double gaussian_density(double x, double mean, double std);

class Hamiltonian {
public:
    enum class Kind { Quadratic, Power };

    static Hamiltonian quadratic();
    /// h(x) + |p|^γ/γ, γ > 1.
    static Hamiltonian power(double gamma, Profile potential = {});

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    double conjugate_exponent() const { return gamma_ / (gamma_ - 1.0); }
    const Profile& potential() const { return potential_; }

    // H splits as potential(x) + kinetic(p); sweeps use the sampled potential.
    double kinetic(const Vec& p) const;
    Vec kinetic_gradient(const Vec& p) const;
    double kinetic_lagrangian(const Vec& v) const;

    double H(Point x, const Vec& p, int dim) const { return potential_(x, dim) + kinetic(p); }
    Vec grad_p(Point, const Vec& p) const { return kinetic_gradient(p); }
    double L(Point x, const Vec& v, int dim) const { return kinetic_lagrangian(v) - potential_(x, dim); }

    bool operator==(const Hamiltonian&) const = default;

private:
    Kind kind_ = Kind::Quadratic;
    double gamma_ = 2.0;
    Profile potential_;
};

/// Per-dimension LF velocities.
struct VelocityPair {
    Vec plus{0.0, 0.0};
    Vec minus{0.0, 0.0};
};

/// H(x, p̄) − ν_n Σ_j (p⁺_j − p⁻_j)/2 with p̄ the per-dimension mean.
double lf_hamiltonian(const Hamiltonian& h, Point x, const Vec& p_plus, const Vec& p_minus, double nu_n, int dim);
/// v± = −½ D_pH(x, p̄) ± ν_n/2.
VelocityPair lf_velocities(const Hamiltonian& h, Point x, const Vec& p_plus, const Vec& p_minus, double nu_n,
                           int dim);

/// Parameters of the moving-Gaussian closed-form equilibrium.
struct ReferenceParams {
    double a = 0.0, b = 0.0, c = 0.0;
    double sigma0 = 1.0, alpha = 0.0;
    double nu = 0.0;

    bool operator==(const ReferenceParams&) const = default;
};

class AnalyticReference {
public:
    explicit AnalyticReference(ReferenceParams p) : p_(p) {}

    const ReferenceParams& params() const { return p_; }
    double mean(double t) const { return (p_.a * t + p_.b) * t + p_.c; }
    double std(double t) const;
    double rho(double x, double t) const;
    double phi(double x, double t) const;

private:
    ReferenceParams p_;
};

/// (ρ*, φ*) sampled at time t on a 1D grid.
std::pair<std::vector<double>, std::vector<double>> analytic_reference(double t, const AnalyticReference& ref,
                                                                       const GridSpec& grid);

struct CostSpec {
    enum class Kind { Zero, LocalAffine, Convolution, Smoothed, MomentQuadratic, Obstacle };

    Kind kind = Kind::Zero;
    /// LocalAffine a, Convolution c, Smoothed c, Obstacle value.
    double coefficient = 0.0;
    /// LocalAffine b(x); Convolution kernel K(x − y).
    Profile profile;
    /// Obstacle region |x − center|² ≤ radius_sq.
    Point center{0.0, 0.0};
    double radius_sq = 0.0;
    ReferenceParams moment;

    static CostSpec zero() { return {}; }
    static CostSpec local_affine(double a, Profile b = {});
    static CostSpec convolution(double c, Profile kernel);
    static CostSpec smoothed(double c);
    static CostSpec moment_quadratic(ReferenceParams p);
    static CostSpec obstacle(double value, Point center, double radius_sq);

    bool density_dependent() const { return kind != Kind::Zero && kind != Kind::Obstacle; }
    bool operator==(const CostSpec&) const = default;
};

struct TerminalCost {
    enum class Kind { Zero, Fixed, DensityTracking, LocalAffine, MomentQuadratic };

    Kind kind = Kind::Zero;
    /// DensityTracking η, LocalAffine a.
    double coefficient = 0.0;
    /// Fixed f_T(x); DensityTracking target density.
    Profile profile;
    ReferenceParams moment;

    static TerminalCost zero() { return {}; }
    static TerminalCost fixed(Profile f);
    static TerminalCost density_tracking(double eta, Profile target);
    static TerminalCost local_affine(double a);
    static TerminalCost moment_quadratic(ReferenceParams p);

    bool density_dependent() const { return kind != Kind::Zero && kind != Kind::Fixed; }
    bool operator==(const TerminalCost&) const = default;
};

/// μ₁ = Σ x ρ Δx, μ₂ = Σ x² ρ Δx on a 1D grid.
std::pair<double, double> moments(std::span<const double> rho, const GridSpec& grid);

std::vector<double> eval_interaction(std::span<const double> rho, double t, const CostSpec& spec,
                                     const GridSpec& grid);
std::vector<double> eval_terminal(std::span<const double> rho_T, const TerminalCost& spec, const GridSpec& grid);

/// Solves (I − Δ_x) u = w with the Neumann Laplacian.
std::vector<double> helmholtz_solve(std::span<const double> w, const GridSpec& grid);

/// Grid-free description of a problem. Instantiating on a grid samples every
/// profile and applies per-level overrides.
struct ProblemDefinition {
    std::string name;
    std::string description;
    int dim = 1;
    Point lower{0.0, 0.0};
    Point upper{1.0, 0.0};
    double T = 1.0;
    std::array<int, 2> n_x{64, 0};
    int n_t = 16;

    Hamiltonian hamiltonian;
    CostSpec interaction;
    TerminalCost terminal;
    Profile rho0;
    double nu = 0.0;
    double nu_n = 0.0;
    std::optional<ReferenceParams> reference;
    /// When set, level l uses η = eta_per_level·l in the density-tracking
    /// terminal cost and 2η as the obstacle value.
    std::optional<double> eta_per_level;

    GridSpec grid(int level = 0) const;
    bool operator==(const ProblemDefinition&) const = default;
};

struct ProblemSpec {
    ProblemDefinition definition;
    GridSpec grid;
    Hamiltonian hamiltonian;
    CostSpec interaction;
    TerminalCost terminal;
    std::vector<double> rho0;
    double mass0 = 0.0;
    /// h(x) sampled at the nodes.
    std::vector<double> potential;
    double nu = 0.0;
    double nu_n = 0.0;
    std::optional<AnalyticReference> reference;

    int dim() const { return grid.dim(); }
};

ProblemSpec instantiate(const ProblemDefinition& def, const GridSpec& grid);

/// Reference density sampled on the whole space-time grid.
ScalarField reference_density(const ProblemSpec& problem);

}  // namespace mfg
