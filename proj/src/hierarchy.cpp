#include <chrono>
#include <cmath>
#include <string>

#include "mfg/catalog.hpp"
#include "mfg/error.hpp"
#include "mfg/play.hpp"

namespace mfg {

void HierarchySpec::validate() const {
    if (L < 0) throw Error(ErrorKind::Range, "hierarchy.L must be nonnegative");
    if (!(epsilon > 0.0)) throw Error(ErrorKind::Range, "hierarchy epsilon must be positive");
    if (k_max < 1) throw Error(ErrorKind::Range, "hierarchy k_max must be at least 1");
}

namespace {

std::optional<double> terminal_mismatch(const PlayState& state, const ProblemSpec& problem) {
    if (problem.terminal.kind != TerminalCost::Kind::DensityTracking) return std::nullopt;
    const GridSpec& g = problem.grid;
    const auto target = problem.terminal.profile.sample(g);
    const auto rT = state.rho.slice(g.n_t());
    std::vector<double> diff(target.size());
    for (std::size_t p = 0; p < diff.size(); ++p) diff[p] = rT[p] - target[p];
    return std::sqrt(slice_inner_product(diff, diff, g));
}

}  // namespace

HierarchyResult run_hierarchical(const ProblemDefinition& finest, const HierarchySpec& hierarchy,
                                 const WeightSchedule& schedule, const NewtonOptions& newton,
                                 std::optional<Initialization> init0,
                                 std::function<void(const IterationRecord&)> on_record) {
    hierarchy.validate();
    const ProblemDefinition def = coarsened(finest, hierarchy.L);
    HierarchyResult out;
    ScalarField carried_phi;
    for (int l = 0; l <= hierarchy.L; ++l) {
        const auto start = std::chrono::steady_clock::now();
        ProblemSpec problem = instantiate(def, def.grid(l));
        Initialization init;
        if (l == 0) {
            if (init0) {
                init = *init0;
            } else if (hierarchy.stationary_start) {
                init = Initialization::stationary(problem);
            } else {
                init = Initialization::from_phi(ScalarField(problem.grid));
            }
        } else {
            init = Initialization::from_phi(prolongate(carried_phi, problem.grid));
        }
        PlayOptions opts;
        opts.epsilon = hierarchy.epsilon * std::pow(10.0, hierarchy.L - l);
        opts.k_max = hierarchy.k_max;
        opts.gain_form = hierarchy.gain_form;
        opts.newton = newton;
        opts.level = l;
        if (on_record) opts.on_iteration = [&](const PlayState&, const BestResponse&, const IterationRecord& r) { on_record(r); };

        PlayResult res = run_fictitious_play(problem, schedule, opts, init);
        LevelResult lr;
        lr.level = l;
        lr.grid = problem.grid;
        lr.records = res.records;
        lr.converged = res.converged;
        lr.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        lr.terminal_mismatch = terminal_mismatch(res.state, problem);
        if (!res.converged) {
            out.warnings.push_back("level " + std::to_string(l) + " stopped at k_max=" +
                                   std::to_string(hierarchy.k_max) + " without reaching tolerance");
        }
        out.levels.push_back(std::move(lr));
        carried_phi = res.br.phi;
        out.final = std::move(res);
        out.problem = std::move(problem);
    }
    return out;
}

}  // namespace mfg
