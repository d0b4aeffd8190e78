#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "mfg/catalog.hpp"
#include "mfg/error.hpp"
#include "mfg/play.hpp"
#include "oracle.hpp"

using namespace mfg;

namespace {

PlayOptions options(double epsilon, int k_max, GainForm form = GainForm::Momentum) {
    PlayOptions o;
    o.epsilon = epsilon;
    o.k_max = k_max;
    o.gain_form = form;
    return o;
}

const Initialization kZeroPhi = Initialization::from_phi(ScalarField());

double slope(const std::vector<double>& y, std::size_t from, std::size_t to) {
    const double n = static_cast<double>(to - from);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        mx += static_cast<double>(i);
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        sxy += (static_cast<double>(i) - mx) * (y[i] - my);
        sxx += (static_cast<double>(i) - mx) * (static_cast<double>(i) - mx);
    }
    return sxy / sxx;
}

double total_mass(std::span<const double> s) { return std::accumulate(s.begin(), s.end(), 0.0); }

}  // namespace

TEST_CASE("averaging step") {
    const auto g = GridSpec::line(0.0, 1.0, 2, 1.0, 1);
    PlayState s;
    s.rho = ScalarField(g, 1.0);
    s.m = {ScalarField(g, 2.0)};
    BestResponse br;
    br.rho = ScalarField(g, std::vector<double>{0.0, 2.0, 0.0, 2.0, 0.0, 2.0});
    br.m = {ScalarField(g, -2.0)};
    br.phi = ScalarField(g, 5.0);

    const auto half = average_step(s, br, 0.5);
    CHECK(half.rho.values() == std::vector<double>{0.5, 1.5, 0.5, 1.5, 0.5, 1.5});
    CHECK(half.m[0].values() == std::vector<double>(6, 0.0));
    CHECK(half.k == 1);

    const auto full = average_step(s, br, 1.0);
    CHECK(full.rho.values() == br.rho.values());
    CHECK(full.m[0].values() == br.m[0].values());

    CHECK_THROWS_AS(average_step(s, br, 0.0), Error);
    CHECK_THROWS_AS(average_step(s, br, 1.5), Error);
}

TEST_CASE("weight schedules") {
    const auto dim = WeightSchedule::diminishing(2.0);
    CHECK(next_weight(dim, 1) == doctest::Approx(2.0 / 3.0));
    const auto one = WeightSchedule::diminishing(1.0);
    for (int k = 1; k < 50; ++k) CHECK(next_weight(one, k + 1) < next_weight(one, k));
    CHECK(next_weight(one, 1000000) < 1e-5);
    const auto c = WeightSchedule::constant(0.1);
    for (int k : {1, 7, 500}) CHECK(next_weight(c, k) == 0.1);

    CHECK_THROWS_AS(WeightSchedule::constant(1.5).validate(), Error);
    CHECK_THROWS_AS(WeightSchedule::constant(0.0).validate(), Error);
    CHECK_THROWS_AS(WeightSchedule::btls(1.0, 1.0, 0.8).validate(), Error);
    CHECK_THROWS_AS(next_weight(c, 0), Error);
}

TEST_CASE("cost of a resting population") {
    const auto d = fixtures::plain_line(16, 4, 0.1, 0.0);
    const auto p = instantiate(d, d.grid());
    const auto rho = fixtures::stationary_rho(p);
    CHECK(cost_J(rho, ScalarField(p.grid, 3.0), rho, p) == 0.0);
    MomentumField zero_m{ScalarField(p.grid, 0.0)};
    CHECK(cost_J(rho, zero_m, rho, p) == 0.0);
    CHECK(cost_J(ScalarField(p.grid, 0.0), zero_m, rho, p) == 0.0);
}

TEST_CASE("cost division floor") {
    const auto d = fixtures::plain_line(8, 2, 0.1, 0.0);
    const auto p = instantiate(d, d.grid());
    ScalarField rho(p.grid, 1.0);
    MomentumField m{ScalarField(p.grid, 0.5)};
    rho.at(3, 1) = 0.0;
    m[0].at(3, 1) = 0.0;
    const auto c = cost_J(rho, m, evaluate_coupling(rho, p), p);
    CHECK(c.floored == 0);
    CHECK(std::isfinite(c.total()));
    // Every other node moves at speed ½: (n_t·(n_x+1) − 1) · ½·¼ · ΔxΔt.
    CHECK(c.dynamic == doctest::Approx((2 * 9 - 1) * 0.125 * p.grid.dx(0) * p.grid.dt()));

    m[0].at(3, 1) = 0.5;
    const auto blown = cost_J(rho, m, evaluate_coupling(rho, p), p);
    CHECK(blown.floored == 1);
    CHECK(blown.dynamic > 1e6);
}

TEST_CASE("gain vanishes when the state is its own response") {
    const auto p = fixtures::desk("local-linear");
    const auto rho = fixtures::stationary_rho(p);
    const auto br = best_response(rho, p);
    PlayState s;
    s.rho = br.rho;
    s.m = br.m;
    const auto c = evaluate_coupling(rho, p);
    CHECK(std::abs(gain(s, br, c, p)) <= 1e-12 * std::abs(br.cost));
}

TEST_CASE("best response ignores the density when costs do not depend on it") {
    auto d = fixtures::plain_line(32, 8, 0.1, 0.5);
    d.interaction = CostSpec::obstacle(4.0, {0.5, 0.0}, 0.01);
    d.terminal = TerminalCost::fixed(Profile::sine(0.3, 1.0));
    const auto p = instantiate(d, d.grid());
    const auto a = best_response(fixtures::stationary_rho(p), p);
    const auto b = best_response(ScalarField(p.grid, 0.7), p);
    CHECK(a.phi.values() == b.phi.values());
    CHECK(a.rho.values() == b.rho.values());

    PlayState s;
    s.rho = fixtures::stationary_rho(p);
    s.m = {ScalarField(p.grid, 0.0)};
    const auto sel = btls_select(s, a, 1.0, WeightSchedule::btls(1.0, 0.5, 0.8), p);
    CHECK(sel.trials == 1);
    CHECK(sel.delta == 1.0);
    CHECK(sel.D == 0.0);
    CHECK_FALSE(sel.saturated);
}

TEST_CASE("btls saturates after max_trials") {
    const auto p = fixtures::desk("power-nonlocal", 64, 16);
    PlayState s;
    s.rho = fixtures::stationary_rho(p);
    s.m = {ScalarField(p.grid, 0.0)};
    const auto br = best_response(s.rho, p);
    const auto sel = btls_select(s, br, -1.0, WeightSchedule::btls(1.0, 0.5, 0.8, 3), p);
    CHECK(sel.trials == 3);
    CHECK(sel.saturated);
    CHECK(sel.delta == 0.25);
}

TEST_CASE("infinite tolerance stops after the initial diagnostics") {
    const auto p = fixtures::desk("local-linear");
    const auto res = run_fictitious_play(p, WeightSchedule::constant(0.5), std::numeric_limits<double>::infinity(), 10,
                                         kZeroPhi);
    CHECK(res.records.size() == 1);
    CHECK(res.converged);
    CHECK(std::isnan(res.records[0].delta));
}

TEST_CASE("undefined cosine is reported as NaN") {
    const auto p = fixtures::desk("local-linear");
    const auto br = best_response(fixtures::stationary_rho(p), p);
    PlayState s;
    s.rho = br.rho;
    s.m = br.m;
    const auto r = compute_diagnostics(s, br, p, br.rho);
    REQUIRE(r.cosine);
    CHECK(std::isnan(*r.cosine));
    REQUIRE(r.ref_error);
    CHECK(*r.ref_error == 0.0);
    CHECK(r.consec_residue == 0.0);
}

TEST_CASE("local-linear run properties") {
    const auto p = fixtures::desk("local-linear", 100, 30);
    const auto star = run_fictitious_play(p, WeightSchedule::constant(0.5), options(1e-13, 300, GainForm::Value),
                                          kZeroPhi);
    REQUIRE(star.converged);

    SUBCASE("equilibrium is a fixed point of the best response") {
        const auto br = best_response(star.state.rho, p);
        ScalarField diff = br.rho;
        for (std::size_t i = 0; i < diff.values().size(); ++i) diff.values()[i] -= star.state.rho.values()[i];
        CHECK(grid_norm(diff) <= 1e-6 * grid_norm(star.state.rho));
        CHECK(star.records.back().fp_residue <= 1e-6);
    }

    SUBCASE("mass, sign of the gain and opposite-side geometry") {
        auto o = options(1e-10, 200);
        o.reference = star.state.rho;
        const double m0 = total_mass(p.rho0);
        int checked = 0;
        o.on_iteration = [&](const PlayState& s, const BestResponse& br, const IterationRecord& r) {
            for (int n = 0; n <= p.grid.n_t(); ++n) CHECK(std::abs(total_mass(s.rho.slice(n)) - m0) <= 1e-9 * m0);
            CHECK(r.gain_momentum >= -1e-8 * std::max(1.0, std::abs(r.gain_momentum + br.cost)));
            if (r.cosine && !std::isnan(*r.cosine)) CHECK(*r.cosine <= 1e-8);
            ++checked;
        };
        const auto res = run_fictitious_play(p, WeightSchedule::constant(0.5), o, kZeroPhi);
        CHECK(res.converged);
        CHECK(checked == static_cast<int>(res.records.size()));
    }

    SUBCASE("small constant weight gives monotone decay") {
        const auto res = run_fictitious_play(p, WeightSchedule::constant(0.1), options(1e-10, 400), kZeroPhi);
        CHECK(res.converged);
        for (std::size_t i = 1; i < res.records.size(); ++i)
            CHECK(res.records[i].gain <= res.records[i - 1].gain * (1.0 + 1e-10));
    }

    SUBCASE("linear rate") {
        const auto res = run_fictitious_play(p, WeightSchedule::constant(0.5), options(1e-12, 200, GainForm::Value),
                                             kZeroPhi);
        REQUIRE(res.converged);
        std::vector<double> y;
        for (const auto& r : res.records) y.push_back(std::log(std::abs(r.gain)));
        const std::size_t n = y.size(), start = n / 3, mid = (start + n) / 2;
        const double s_all = slope(y, start, n), s_a = slope(y, start, mid), s_b = slope(y, mid, n);
        CHECK(s_all < 0.0);
        CHECK(std::abs(s_a - s_b) <= 0.2 * std::abs(s_all));
    }
}

TEST_CASE("gain sign on monotone catalog problems") {
    for (const std::string name : {"power-nonlocal", "nonpot-2d"}) {
        CAPTURE(name);
        const auto p = name == "nonpot-2d" ? builtin_catalog(name) : fixtures::desk(name, 64, 16);
        auto o = options(1e-8, 25);
        o.on_iteration = [&](const PlayState&, const BestResponse& br, const IterationRecord& r) {
            CHECK(r.gain_momentum >= -1e-8 * std::max(1.0, std::abs(r.gain_momentum + br.cost)));
        };
        run_fictitious_play(p, WeightSchedule::constant(0.1), o, kZeroPhi);
    }
}

TEST_CASE("line search condition holds on every accepted step") {
    const auto p = fixtures::desk("power-nonlocal", 100, 20);
    const auto sched = WeightSchedule::btls(1.0, 0.5, 0.8);
    const auto res = run_fictitious_play(p, sched, options(1e-9, 40), kZeroPhi);
    int searched = 0;
    for (const auto& r : res.records) {
        if (!r.btls_D) continue;
        ++searched;
        CHECK(r.btls_trials >= 1);
        if (!r.saturated) CHECK(*r.btls_D <= sched.zeta * r.delta * r.gain_momentum);
    }
    CHECK(searched > 0);
}

TEST_CASE("single-level hierarchy equals a plain run") {
    auto def = builtin_definition("gauss-viscous");
    def.n_x = {128, 0};
    def.n_t = 8;
    HierarchySpec h;
    h.L = 0;
    h.epsilon = 1e-5;
    h.k_max = 200;
    const auto sched = WeightSchedule::constant(0.25);
    const auto hier = run_hierarchical(def, h, sched);
    const auto p = instantiate(def, def.grid());
    const auto plain = run_fictitious_play(p, sched, options(1e-5, 200), kZeroPhi);
    REQUIRE(hier.levels.size() == 1);
    CHECK(hier.levels[0].records.size() == plain.records.size());
    CHECK(hier.final.state.rho.values() == plain.state.rho.values());
    CHECK(hier.final.converged == plain.converged);
}

TEST_CASE("hierarchy levels") {
    auto def = builtin_definition("gauss-viscous");
    def.n_x = {128, 0};
    def.n_t = 8;
    HierarchySpec h;
    h.L = 2;
    h.epsilon = 1e-5;
    h.k_max = 200;
    const auto res = run_hierarchical(def, h, WeightSchedule::constant(0.25));
    REQUIRE(res.levels.size() == 3);
    CHECK(res.levels[0].grid.n_x(0) == 32);
    CHECK(res.levels[2].grid.n_x(0) == 128);
    CHECK(res.problem.grid.n_x(0) == 128);
    CHECK(res.problem.grid.n_t() == 8);
    for (const auto& l : res.levels) CHECK(l.converged);
    CHECK(res.levels[2].records.back().gain <= 1e-5);
    CHECK(res.levels[0].records.back().gain <= 1e-3);

    HierarchySpec bad = h;
    bad.L = -1;
    CHECK_THROWS_AS(bad.validate(), Error);
}
