#include "mfg/play.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "mfg/error.hpp"
#include "mfg/fp.hpp"

namespace mfg {

WeightSchedule WeightSchedule::constant(double delta) {
    WeightSchedule s;
    s.kind = Kind::Constant;
    s.delta = delta;
    s.validate();
    return s;
}

WeightSchedule WeightSchedule::diminishing(double alpha) {
    WeightSchedule s;
    s.kind = Kind::Diminishing;
    s.alpha = alpha;
    s.validate();
    return s;
}

WeightSchedule WeightSchedule::btls(double delta_init, double beta, double zeta, int max_trials) {
    WeightSchedule s;
    s.kind = Kind::Btls;
    s.delta = delta_init;
    s.beta = beta;
    s.zeta = zeta;
    s.max_trials = max_trials;
    s.validate();
    return s;
}

void WeightSchedule::validate() const {
    switch (kind) {
        case Kind::Constant:
            if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::Range, "schedule.delta must lie in (0,1]");
            break;
        case Kind::Diminishing:
            if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::Range, "schedule.alpha must be positive");
            break;
        case Kind::Btls:
            if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::Range, "schedule.delta must lie in (0,1]");
            if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::Range, "schedule.beta must lie in (0,1)");
            if (!(zeta > 0.0 && zeta < 1.0)) throw Error(ErrorKind::Range, "schedule.zeta must lie in (0,1)");
            if (max_trials < 1) throw Error(ErrorKind::Range, "schedule.max_trials must be at least 1");
            break;
    }
}

MomentumField momentum_from(const ScalarField& rho, const ScalarField& phi, const ProblemSpec& problem) {
    const GridSpec& g = problem.grid;
    if (!(rho.grid() == g) || !(phi.grid() == g)) throw Error(ErrorKind::GridMismatch, "momentum: grid mismatch");
    MomentumField m(g.dim(), ScalarField(g));
    for (int n = 0; n < g.n_t(); ++n) {
        const auto grad = one_sided_gradients(phi.slice(n), g);
        const auto r = rho.slice(n + 1);
        for (std::size_t p = 0; p < g.slice_size(); ++p) {
            Vec bar{0.0, 0.0};
            for (int d = 0; d < g.dim(); ++d) bar[d] = 0.5 * (grad.plus[d][p] + grad.minus[d][p]);
            const Vec gH = problem.hamiltonian.kinetic_gradient(bar);
            for (int d = 0; d < g.dim(); ++d) m[d].at(p, n + 1) = -r[p] * gH[d];
        }
    }
    return m;
}

BestResponse best_response(const ScalarField& rho, const Coupling& coupling, const ProblemSpec& problem,
                           const NewtonOptions& opts) {
    if (!(rho.grid() == problem.grid)) throw Error(ErrorKind::GridMismatch, "best_response: density grid differs");
    BestResponse br;
    br.phi = hjb_backward_sweep(coupling, problem, opts);
    br.rho = fp_forward_sweep(br.phi, problem);
    br.m = momentum_from(br.rho, br.phi, problem);
    br.cost = cost_J(br.rho, br.phi, coupling, problem).total();
    return br;
}

BestResponse best_response(const ScalarField& rho, const ProblemSpec& problem, const NewtonOptions& opts) {
    return best_response(rho, evaluate_coupling(rho, problem), problem, opts);
}

namespace {

// Interaction and terminal pairings shared by both cost forms.
void add_coupling_terms(CostBreakdown& c, const ScalarField& rho, const Coupling& coupling, const GridSpec& g) {
    const double w = g.cell_volume();
    double inter = 0.0;
    for (int n = 1; n <= g.n_t(); ++n) {
        const auto r = rho.slice(n);
        for (std::size_t p = 0; p < r.size(); ++p) inter += coupling.f[n][p] * r[p];
    }
    c.interaction = inter * w * g.dt();
    double term = 0.0;
    const auto rT = rho.slice(g.n_t());
    for (std::size_t p = 0; p < rT.size(); ++p) term += coupling.f_T[p] * rT[p];
    c.terminal = term * w;
}

void require_coupling(const Coupling& coupling, const GridSpec& g) {
    if (static_cast<int>(coupling.f.size()) != g.n_t() + 1 || coupling.f_T.size() != g.slice_size()) {
        throw Error(ErrorKind::Shape, "cost_J: coupling does not match the grid");
    }
}

}  // namespace

CostBreakdown cost_J(const ScalarField& rho, const ScalarField& phi, const Coupling& coupling,
                     const ProblemSpec& problem) {
    const GridSpec& g = problem.grid;
    if (!(rho.grid() == g) || !(phi.grid() == g)) throw Error(ErrorKind::GridMismatch, "cost_J: grid mismatch");
    require_coupling(coupling, g);
    CostBreakdown c;
    double dyn = 0.0;
    for (int n = 0; n < g.n_t(); ++n) {
        const auto grad = one_sided_gradients(phi.slice(n), g);
        const auto r = rho.slice(n + 1);
        for (std::size_t p = 0; p < g.slice_size(); ++p) {
            Vec bar{0.0, 0.0};
            for (int d = 0; d < g.dim(); ++d) bar[d] = 0.5 * (grad.plus[d][p] + grad.minus[d][p]);
            const Vec gH = problem.hamiltonian.kinetic_gradient(bar);
            const Vec v{-gH[0], -gH[1]};
            dyn += r[p] * (problem.hamiltonian.kinetic_lagrangian(v) - problem.potential[p]);
        }
    }
    c.dynamic = dyn * g.cell_volume() * g.dt();
    add_coupling_terms(c, rho, coupling, g);
    return c;
}

CostBreakdown cost_J(const ScalarField& rho, const MomentumField& m, const Coupling& coupling,
                     const ProblemSpec& problem) {
    const GridSpec& g = problem.grid;
    if (!(rho.grid() == g) || static_cast<int>(m.size()) != g.dim()) {
        throw Error(ErrorKind::GridMismatch, "cost_J: momentum does not match the grid");
    }
    for (const auto& md : m) {
        if (!(md.grid() == g)) throw Error(ErrorKind::GridMismatch, "cost_J: momentum grid mismatch");
    }
    require_coupling(coupling, g);
    double rho_max = 0.0, m_max = 0.0;
    for (int n = 1; n <= g.n_t(); ++n) {
        for (double v : rho.slice(n)) rho_max = std::max(rho_max, v);
        for (const auto& md : m) {
            for (double v : md.slice(n)) m_max = std::max(m_max, std::abs(v));
        }
    }
    const double rho_floor = 1e-13 * rho_max;
    const double m_floor = 1e-13 * m_max;

    CostBreakdown c;
    double dyn = 0.0;
    for (int n = 1; n <= g.n_t(); ++n) {
        const auto r = rho.slice(n);
        for (std::size_t p = 0; p < g.slice_size(); ++p) {
            Vec mv{0.0, 0.0};
            double m_abs = 0.0;
            for (int d = 0; d < g.dim(); ++d) {
                mv[d] = m[d].at(p, n);
                m_abs = std::max(m_abs, std::abs(mv[d]));
            }
            double weight = r[p];
            if (std::abs(r[p]) <= rho_floor) {
                if (m_abs <= m_floor) continue;
                weight = rho_floor;
                ++c.floored;
            }
            const Vec v{mv[0] / weight, mv[1] / weight};
            dyn += weight * (problem.hamiltonian.kinetic_lagrangian(v) - problem.potential[p]);
        }
    }
    c.dynamic = dyn * g.cell_volume() * g.dt();
    add_coupling_terms(c, rho, coupling, g);
    return c;
}

double cost_J(const ScalarField& rho, const ScalarField& phi, const ScalarField& rho_ref, const ProblemSpec& problem) {
    return cost_J(rho, phi, evaluate_coupling(rho_ref, problem), problem).total();
}

double cost_J(const ScalarField& rho, const MomentumField& m, const ScalarField& rho_ref, const ProblemSpec& problem) {
    return cost_J(rho, m, evaluate_coupling(rho_ref, problem), problem).total();
}

double gain(const PlayState& state, const BestResponse& br, const Coupling& coupling, const ProblemSpec& problem,
            std::size_t* floored) {
    const CostBreakdown at_state = cost_J(state.rho, state.m, coupling, problem);
    if (floored) *floored = at_state.floored;
    return at_state.total() - br.cost;
}

double value_gain(const PlayState& state, const BestResponse& br, const Coupling& coupling,
                  const ProblemSpec& problem) {
    if (!(state.phi.grid() == problem.grid) || state.phi.values().empty()) {
        throw Error(ErrorKind::Shape, "value_gain: state carries no averaged value function");
    }
    return cost_J(state.rho, state.phi, coupling, problem).total() - br.cost;
}

double gain(const PlayState& state, const BestResponse& br, const ProblemSpec& problem) {
    return gain(state, br, evaluate_coupling(state.rho, problem), problem);
}

PlayState average_step(const PlayState& state, const BestResponse& br, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::Range, "average_step: delta must lie in (0,1]");
    if (!(state.rho.grid() == br.rho.grid()) || state.m.size() != br.m.size()) {
        throw Error(ErrorKind::GridMismatch, "average_step: state and response differ in shape");
    }
    PlayState out;
    out.k = state.k + 1;
    auto blend = [delta](const ScalarField& a, const ScalarField& b) {
        std::vector<double> v(a.values().size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 - delta) * a.values()[i] + delta * b.values()[i];
        return ScalarField(a.grid(), std::move(v));
    };
    out.rho = delta == 1.0 ? br.rho : blend(state.rho, br.rho);
    for (std::size_t d = 0; d < state.m.size(); ++d) out.m.push_back(delta == 1.0 ? br.m[d] : blend(state.m[d], br.m[d]));
    if (!state.phi.values().empty()) out.phi = delta == 1.0 ? br.phi : blend(state.phi, br.phi);
    return out;
}

double next_weight(const WeightSchedule& schedule, int k) {
    if (k < 1) throw Error(ErrorKind::Range, "next_weight: k must be at least 1");
    switch (schedule.kind) {
        case WeightSchedule::Kind::Constant:
        case WeightSchedule::Kind::Btls:
            return schedule.delta;
        case WeightSchedule::Kind::Diminishing:
            return schedule.alpha / (k + schedule.alpha);
    }
    return schedule.delta;
}

double btls_D(const Coupling& c_prev, const Coupling& c_trial, const ScalarField& rho_hat_k,
              const ScalarField& rho_hat_next, const ProblemSpec& problem) {
    const GridSpec& g = problem.grid;
    require_coupling(c_prev, g);
    require_coupling(c_trial, g);
    double acc = 0.0;
    for (int n = 1; n <= g.n_t(); ++n) {
        const auto a = rho_hat_k.slice(n);
        const auto b = rho_hat_next.slice(n);
        for (std::size_t p = 0; p < a.size(); ++p) acc += (c_prev.f[n][p] - c_trial.f[n][p]) * (a[p] - b[p]);
    }
    double total = acc * g.cell_volume() * g.dt();
    if (problem.terminal.density_dependent()) {
        const auto a = rho_hat_k.slice(g.n_t());
        const auto b = rho_hat_next.slice(g.n_t());
        double term = 0.0;
        for (std::size_t p = 0; p < a.size(); ++p) term += (c_prev.f_T[p] - c_trial.f_T[p]) * (a[p] - b[p]);
        total += term * g.cell_volume();
    }
    return -total;
}

BtlsResult btls_select(const PlayState& state_prev, const BestResponse& br_k, double g_prev,
                       const WeightSchedule& params, const ProblemSpec& problem, const NewtonOptions& opts) {
    params.validate();
    if (params.kind != WeightSchedule::Kind::Btls) throw Error(ErrorKind::Range, "btls_select: schedule is not btls");
    const Coupling c_prev = evaluate_coupling(state_prev.rho, problem);
    BtlsResult out;
    double delta = params.delta;
    for (int trial = 1; trial <= params.max_trials; ++trial) {
        PlayState candidate = average_step(state_prev, br_k, delta);
        const Coupling c_trial = evaluate_coupling(candidate.rho, problem);
        BestResponse br_next = best_response(candidate.rho, c_trial, problem, opts);
        const double D = btls_D(c_prev, c_trial, br_k.rho, br_next.rho, problem);
        const bool accept = D <= params.zeta * delta * g_prev;
        if (accept || trial == params.max_trials) {
            out.delta = delta;
            out.state = std::move(candidate);
            out.br_next = std::move(br_next);
            out.D = D;
            out.trials = trial;
            out.saturated = !accept;
            return out;
        }
        delta *= params.beta;
    }
    return out;
}

Initialization Initialization::from_phi(ScalarField phi) {
    Initialization i;
    i.kind = Kind::Phi;
    i.field = std::move(phi);
    return i;
}

Initialization Initialization::from_rho(ScalarField rho) {
    Initialization i;
    i.kind = Kind::Rho;
    i.field = std::move(rho);
    return i;
}

Initialization Initialization::from_state(PlayState state) {
    Initialization i;
    i.kind = Kind::State;
    i.field = std::move(state.rho);
    i.m = std::move(state.m);
    i.phi = std::move(state.phi);
    return i;
}

Initialization Initialization::stationary(const ProblemSpec& problem) {
    ScalarField rho(problem.grid);
    for (int n = 0; n <= problem.grid.n_t(); ++n) rho.set_slice(n, problem.rho0);
    return from_rho(std::move(rho));
}

IterationRecord compute_diagnostics(const PlayState& state_prev, const BestResponse& br, const ProblemSpec& problem,
                                    const std::optional<ScalarField>& reference) {
    IterationRecord rec;
    const auto& rho = state_prev.rho.values();
    const auto& hat = br.rho.values();
    std::vector<double> diff(rho.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = hat[i] - rho[i];
    rec.consec_residue = grid_norm(ScalarField(problem.grid, std::move(diff)));
    rec.fp_residue = grid_norm(fp_residual(state_prev.rho, br.phi, problem));

    std::optional<ScalarField> ref = reference;
    if (!ref && problem.reference) ref = reference_density(problem);
    if (ref) {
        if (!(ref->grid() == problem.grid)) throw Error(ErrorKind::GridMismatch, "diagnostics: reference grid differs");
        const auto& star = ref->values();
        std::vector<double> e(rho.size()), eh(rho.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = rho[i] - star[i];
            eh[i] = hat[i] - star[i];
        }
        const ScalarField fe(problem.grid, std::move(e));
        const ScalarField feh(problem.grid, std::move(eh));
        const double ne = grid_norm(fe);
        const double neh = grid_norm(feh);
        rec.ref_error = ne;
        rec.cosine = (ne > 0.0 && neh > 0.0) ? inner_product(fe, feh) / (ne * neh)
                                             : std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

namespace {

PlayState initial_state(const ProblemSpec& problem, const Initialization& init, const NewtonOptions&) {
    const GridSpec& g = problem.grid;
    PlayState s;
    switch (init.kind) {
        case Initialization::Kind::Phi: {
            const ScalarField phi = init.field.values().empty() ? ScalarField(g) : init.field;
            if (!(phi.grid() == g)) throw Error(ErrorKind::GridMismatch, "initialization: value function grid differs");
            s.rho = fp_forward_sweep(phi, problem);
            s.m = momentum_from(s.rho, phi, problem);
            s.phi = phi;
            break;
        }
        case Initialization::Kind::Rho:
            if (!(init.field.grid() == g)) throw Error(ErrorKind::GridMismatch, "initialization: density grid differs");
            s.rho = init.field;
            s.m.assign(g.dim(), ScalarField(g));
            s.phi = ScalarField(g);
            break;
        case Initialization::Kind::State:
            if (!(init.field.grid() == g) || static_cast<int>(init.m.size()) != g.dim()) {
                throw Error(ErrorKind::GridMismatch, "initialization: state grid differs");
            }
            s.rho = init.field;
            s.m = init.m;
            s.phi = init.phi.values().empty() ? ScalarField(g) : init.phi;
            if (!(s.phi.grid() == g)) throw Error(ErrorKind::GridMismatch, "initialization: value function grid differs");
            break;
    }
    return s;
}

}  // namespace

PlayResult run_fictitious_play(const ProblemSpec& problem, const WeightSchedule& schedule, const PlayOptions& opts,
                               const Initialization& init) {
    schedule.validate();
    opts.newton.validate();
    if (!(opts.epsilon > 0.0)) throw Error(ErrorKind::Range, "fictitious play: epsilon must be positive");
    if (opts.k_max < 1) throw Error(ErrorKind::Range, "fictitious play: k_max must be at least 1");
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    std::optional<ScalarField> reference = opts.reference;
    if (!reference && problem.reference) reference = reference_density(problem);

    PlayResult out;
    out.state = initial_state(problem, init, opts.newton);
    Coupling coupling = evaluate_coupling(out.state.rho, problem);
    out.br = best_response(out.state.rho, coupling, problem, opts.newton);

    for (int k = 1; k <= opts.k_max; ++k) {
        std::size_t floored = 0;
        const double g = gain(out.state, out.br, coupling, problem, &floored);
        IterationRecord rec = compute_diagnostics(out.state, out.br, problem, reference);
        rec.k = k;
        rec.level = opts.level;
        rec.gain_momentum = g;
        rec.gain = opts.gain_form == GainForm::Value ? value_gain(out.state, out.br, coupling, problem) : g;
        rec.floored = floored;
        const bool done = !opts.run_to_k_max && std::abs(rec.gain) <= opts.epsilon;
        if (done || k == opts.k_max) {
            out.converged = std::abs(rec.gain) <= opts.epsilon;
            rec.wall_s = elapsed();
            out.records.push_back(rec);
            if (opts.on_iteration) opts.on_iteration(out.state, out.br, rec);
            break;
        }
        PlayState prev_state = out.state;
        BestResponse prev_br = out.br;
        if (schedule.kind == WeightSchedule::Kind::Btls) {
            BtlsResult sel = btls_select(out.state, out.br, g, schedule, problem, opts.newton);
            rec.delta = sel.delta;
            rec.btls_trials = sel.trials;
            rec.btls_D = sel.D;
            rec.saturated = sel.saturated;
            out.state = std::move(sel.state);
            out.br = std::move(sel.br_next);
            coupling = evaluate_coupling(out.state.rho, problem);
        } else {
            const double delta = next_weight(schedule, k);
            rec.delta = delta;
            out.state = average_step(out.state, out.br, delta);
            coupling = evaluate_coupling(out.state.rho, problem);
            out.br = best_response(out.state.rho, coupling, problem, opts.newton);
        }
        rec.wall_s = elapsed();
        out.records.push_back(rec);
        if (opts.on_iteration) opts.on_iteration(prev_state, prev_br, rec);
    }
    return out;
}

PlayResult run_fictitious_play(const ProblemSpec& problem, const WeightSchedule& schedule, double epsilon, int k_max,
                               const Initialization& init) {
    PlayOptions opts;
    opts.epsilon = epsilon;
    opts.k_max = k_max;
    return run_fictitious_play(problem, schedule, opts, init);
}

}  // namespace mfg
