#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/hjb.hpp"
#include "mfg/problem.hpp"

namespace mfg {

/// One space-time field per spatial dimension. Slice 0 is unused and zero.
using MomentumField = std::vector<ScalarField>;

struct PlayState {
    ScalarField rho;
    MomentumField m;
    /// Running average of response value functions, same weights as ρ. Feeds
    /// the value-form gain only; never drives a sweep.
    ScalarField phi;
    int k = 0;
};

struct BestResponse {
    ScalarField phi;
    ScalarField rho;
    MomentumField m;
    /// J(ρ̂, φ̂; ρ) against the density the response was computed for.
    double cost = 0.0;
};

struct WeightSchedule {
    enum class Kind { Constant, Diminishing, Btls };

    Kind kind = Kind::Constant;
    double delta = 0.5;
    /// Diminishing: δ_k = α/(k+α).
    double alpha = 1.0;
    /// Btls: δ_init = delta, shrink β, acceptance ζ, at most max_trials solves.
    double beta = 0.5;
    double zeta = 0.8;
    int max_trials = 20;

    static WeightSchedule constant(double delta);
    static WeightSchedule diminishing(double alpha);
    static WeightSchedule btls(double delta_init, double beta, double zeta, int max_trials = 20);

    void validate() const;
    bool operator==(const WeightSchedule&) const = default;
};

/// Momentum: J(ρ, m; ρ) − J(ρ̂, φ̂; ρ), nonnegative in theory.
/// Value: J(ρ, φ; ρ) − J(ρ̂, φ̂; ρ) with φ the averaged value function.
enum class GainForm { Momentum, Value };

struct IterationRecord {
    int k = 0;
    int level = 0;
    /// Weight applied after this record's best response; NaN on the last row.
    double delta = std::numeric_limits<double>::quiet_NaN();
    /// Gain in the run's stopping form.
    double gain = 0.0;
    /// Momentum-form gain; what the line search compares against.
    double gain_momentum = 0.0;
    double consec_residue = 0.0;
    double fp_residue = 0.0;
    std::optional<double> ref_error;
    /// NaN when either vector vanishes.
    std::optional<double> cosine;
    int btls_trials = 0;
    std::optional<double> btls_D;
    bool saturated = false;
    std::size_t floored = 0;
    double wall_s = 0.0;
};

/// Velocity –D_pH(x, D^c φ_n) paired with ρ_{n+1}.
MomentumField momentum_from(const ScalarField& rho, const ScalarField& phi, const ProblemSpec& problem);

BestResponse best_response(const ScalarField& rho, const ProblemSpec& problem, const NewtonOptions& opts = {});
BestResponse best_response(const ScalarField& rho, const Coupling& coupling, const ProblemSpec& problem,
                           const NewtonOptions& opts = {});

struct CostBreakdown {
    double dynamic = 0.0;
    double interaction = 0.0;
    double terminal = 0.0;
    /// Nodes where m/ρ hit the division floor.
    std::size_t floored = 0;

    double total() const { return dynamic + interaction + terminal; }
};

CostBreakdown cost_J(const ScalarField& rho, const ScalarField& phi, const Coupling& coupling,
                     const ProblemSpec& problem);
CostBreakdown cost_J(const ScalarField& rho, const MomentumField& m, const Coupling& coupling,
                     const ProblemSpec& problem);
double cost_J(const ScalarField& rho, const ScalarField& phi, const ScalarField& rho_ref, const ProblemSpec& problem);
double cost_J(const ScalarField& rho, const MomentumField& m, const ScalarField& rho_ref, const ProblemSpec& problem);

/// J(ρ, m; ρ) − J(ρ̂, φ̂; ρ) for a response computed at state.rho.
double gain(const PlayState& state, const BestResponse& br, const ProblemSpec& problem);
double gain(const PlayState& state, const BestResponse& br, const Coupling& coupling, const ProblemSpec& problem,
            std::size_t* floored = nullptr);
double value_gain(const PlayState& state, const BestResponse& br, const Coupling& coupling,
                  const ProblemSpec& problem);

PlayState average_step(const PlayState& state, const BestResponse& br, double delta);

double next_weight(const WeightSchedule& schedule, int k);

struct BtlsResult {
    double delta = 0.0;
    PlayState state;
    BestResponse br_next;
    double D = 0.0;
    int trials = 0;
    bool saturated = false;
};

/// −⟨f(ρ_prev) − f(ρ_trial), ρ̂_k − ρ̂_next⟩ over time slices 1..n_t, plus the
/// terminal pairing when f_T depends on the density.
double btls_D(const Coupling& c_prev, const Coupling& c_trial, const ScalarField& rho_hat_k,
              const ScalarField& rho_hat_next, const ProblemSpec& problem);

BtlsResult btls_select(const PlayState& state_prev, const BestResponse& br_k, double g_prev,
                       const WeightSchedule& params, const ProblemSpec& problem, const NewtonOptions& opts = {});

struct Initialization {
    enum class Kind { Phi, Rho, State };

    Kind kind = Kind::Phi;
    ScalarField field;
    MomentumField m;
    ScalarField phi;

    /// Value-function start; the zero field when omitted.
    static Initialization from_phi(ScalarField phi);
    /// Density start with zero momentum.
    static Initialization from_rho(ScalarField rho);
    static Initialization from_state(PlayState state);
    /// ρ(x, t) = ρ0(x) at every time, zero momentum.
    static Initialization stationary(const ProblemSpec& problem);
};

struct PlayOptions {
    double epsilon = 1e-6;
    int k_max = 500;
    GainForm gain_form = GainForm::Momentum;
    /// Ignore the tolerance and run all k_max iterations.
    bool run_to_k_max = false;
    NewtonOptions newton;
    /// Reference density for ref_error and cosine; falls back to the
    /// problem's analytic reference.
    std::optional<ScalarField> reference;
    int level = 0;
    std::function<void(const PlayState&, const BestResponse&, const IterationRecord&)> on_iteration;
};

struct PlayResult {
    PlayState state;
    /// Best response at the final state.
    BestResponse br;
    std::vector<IterationRecord> records;
    bool converged = false;
};

PlayResult run_fictitious_play(const ProblemSpec& problem, const WeightSchedule& schedule, const PlayOptions& opts,
                               const Initialization& init);
PlayResult run_fictitious_play(const ProblemSpec& problem, const WeightSchedule& schedule, double epsilon, int k_max,
                               const Initialization& init);

/// Diagnostics of the response br at state_prev: consecutive residue, FP
/// residue, reference error and alignment cosine. Gain and weight are left to
/// the caller.
IterationRecord compute_diagnostics(const PlayState& state_prev, const BestResponse& br, const ProblemSpec& problem,
                                    const std::optional<ScalarField>& reference);

struct HierarchySpec {
    int L = 0;
    double epsilon = 1e-6;
    int k_max = 500;
    GainForm gain_form = GainForm::Momentum;
    /// Level-0 start when no explicit initialization is given: ρ(x,t) = ρ0(x)
    /// instead of the zero value function.
    bool stationary_start = false;

    void validate() const;
};

struct LevelResult {
    int level = 0;
    GridSpec grid;
    std::vector<IterationRecord> records;
    bool converged = false;
    double wall_s = 0.0;
    /// ‖ρ_T − target‖ on the level's terminal slice when the terminal cost
    /// tracks a target density.
    std::optional<double> terminal_mismatch;
};

struct HierarchyResult {
    ProblemSpec problem;
    PlayResult final;
    std::vector<LevelResult> levels;
    std::vector<std::string> warnings;
};

/// Runs levels 0..L, level l on the definition's grid coarsened by 2^{L−l},
/// each to tolerance 10^{L−l}ε. Level 0
/// starts from init0 (zero value function when absent); later levels start
/// from the prolongated value function of the previous level's last response.
HierarchyResult run_hierarchical(const ProblemDefinition& def, const HierarchySpec& hierarchy,
                                 const WeightSchedule& schedule, const NewtonOptions& newton = {},
                                 std::optional<Initialization> init0 = std::nullopt,
                                 std::function<void(const IterationRecord&)> on_record = {});

}  // namespace mfg
