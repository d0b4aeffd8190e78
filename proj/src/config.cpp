#include "mfg/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mfg/catalog.hpp"
#include "mfg/error.hpp"

namespace mfg {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string show(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Object view that remembers which keys were read so leftovers can be
// rejected as unknown.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string at(const std::string& key) const { return join(path_, key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    Node child(const std::string& key) {
        seen_.insert(key);
        return Node(j_.at(key), at(key));
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "inf" || s == "infinity" || s == "+inf") return std::numeric_limits<double>::infinity();
        }
        throw ConfigError(at(key), "expected a number");
    }

    int integer(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
        return v.get<int>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }

    // Per-dimension array; entries past dim keep the fallback.
    Point point(const std::string& key, Point fallback, int dim) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_array() || static_cast<int>(v.size()) != dim) {
            throw ConfigError(at(key), "expected an array of " + std::to_string(dim) + " numbers");
        }
        Point p = fallback;
        for (int d = 0; d < dim; ++d) {
            if (!v[d].is_number()) throw ConfigError(at(key), "expected an array of numbers");
            p[d] = v[d].get<double>();
        }
        return p;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& expectation, double got) {
    if (!ok) throw ConfigError(path, "must " + expectation + ", got " + show(got));
}

std::string choose(const std::string& value, const std::string& path, std::initializer_list<const char*> options) {
    std::string list;
    for (const char* o : options) {
        if (value == o) return value;
        list += (list.empty() ? "" : ", ") + std::string(o);
    }
    throw ConfigError(path, "unknown value '" + value + "'; expected one of " + list);
}

// ---- profiles and costs ----------------------------------------------------

const char* profile_kind_name(Profile::Kind k) {
    switch (k) {
        case Profile::Kind::Zero: return "zero";
        case Profile::Kind::Constant: return "constant";
        case Profile::Kind::Sine: return "sine";
        case Profile::Kind::ExpSine: return "exp-sine";
        case Profile::Kind::Gaussian: return "gaussian";
    }
    return "zero";
}

Profile parse_profile(Node n, int dim) {
    const std::string kind =
        choose(n.string("kind", "zero"), n.at("kind"), {"zero", "constant", "sine", "exp-sine", "gaussian"});
    Profile p;
    if (kind == "constant") {
        p = Profile::constant(n.number("value", 0.0));
    } else if (kind == "sine" || kind == "exp-sine") {
        const double scale = n.number("scale", 1.0);
        const double freq = n.number("frequency", 1.0);
        p = kind == "sine" ? Profile::sine(scale, freq) : Profile::exp_sine(scale, freq);
    } else if (kind == "gaussian") {
        const Point mean = n.point("mean", {0.0, 0.0}, dim);
        const Point std = n.point("std", {1.0, 1.0}, dim);
        for (int d = 0; d < dim; ++d) require(std[d] > 0.0, n.at("std"), "be positive", std[d]);
        p = Profile::gaussian(mean, std, n.number("scale", 1.0));
    }
    n.finish();
    return p;
}

ojson dump_point(const Point& p, int dim) {
    ojson a = ojson::array();
    for (int d = 0; d < dim; ++d) a.push_back(p[d]);
    return a;
}

ojson dump_profile(const Profile& p, int dim) {
    ojson o;
    o["kind"] = profile_kind_name(p.kind);
    switch (p.kind) {
        case Profile::Kind::Zero:
            break;
        case Profile::Kind::Constant:
            o["value"] = p.scale;
            break;
        case Profile::Kind::Sine:
        case Profile::Kind::ExpSine:
            o["scale"] = p.scale;
            o["frequency"] = p.frequency;
            break;
        case Profile::Kind::Gaussian:
            o["mean"] = dump_point(p.mean, dim);
            o["std"] = dump_point(p.std, dim);
            o["scale"] = p.scale;
            break;
    }
    return o;
}

ReferenceParams parse_reference(Node n) {
    ReferenceParams r;
    r.a = n.number("a", 0.0);
    r.b = n.number("b", 0.0);
    r.c = n.number("c", 0.0);
    r.sigma0 = n.number("sigma0", 1.0);
    r.alpha = n.number("alpha", 0.0);
    require(r.sigma0 > 0.0, n.at("sigma0"), "be positive", r.sigma0);
    n.finish();
    return r;
}

ojson dump_reference(const ReferenceParams& r) {
    ojson o;
    o["a"] = r.a;
    o["b"] = r.b;
    o["c"] = r.c;
    o["sigma0"] = r.sigma0;
    o["alpha"] = r.alpha;
    return o;
}

CostSpec parse_interaction(Node n, int dim, const std::optional<ReferenceParams>& ref) {
    const std::string kind =
        choose(n.string("kind", "zero"), n.at("kind"),
               {"zero", "local-affine", "convolution", "smoothed", "moment-quadratic", "obstacle"});
    CostSpec c;
    if (kind == "local-affine") {
        const double a = n.number("a", 1.0);
        require(a >= 0.0, n.at("a"), "be nonnegative", a);
        Profile b;
        if (n.has("b")) b = parse_profile(n.child("b"), dim);
        c = CostSpec::local_affine(a, b);
    } else if (kind == "convolution") {
        const double coef = n.number("c", 1.0);
        if (!n.has("kernel")) throw ConfigError(n.at("kernel"), "required for a convolution cost");
        c = CostSpec::convolution(coef, parse_profile(n.child("kernel"), dim));
    } else if (kind == "smoothed") {
        const double coef = n.number("c", 1.0);
        require(coef >= 0.0, n.at("c"), "be nonnegative", coef);
        c = CostSpec::smoothed(coef);
    } else if (kind == "moment-quadratic") {
        if (!ref) throw ConfigError(n.at("kind"), "moment-quadratic needs problem.reference");
        c = CostSpec::moment_quadratic(*ref);
    } else if (kind == "obstacle") {
        const double value = n.number("value", 0.0);
        require(value >= 0.0, n.at("value"), "be nonnegative", value);
        const Point center = n.point("center", {0.0, 0.0}, dim);
        const double r2 = n.number("radius_sq", 1.0);
        require(r2 > 0.0, n.at("radius_sq"), "be positive", r2);
        c = CostSpec::obstacle(value, center, r2);
    }
    n.finish();
    return c;
}

ojson dump_interaction(const CostSpec& c, int dim) {
    ojson o;
    switch (c.kind) {
        case CostSpec::Kind::Zero:
            o["kind"] = "zero";
            break;
        case CostSpec::Kind::LocalAffine:
            o["kind"] = "local-affine";
            o["a"] = c.coefficient;
            o["b"] = dump_profile(c.profile, dim);
            break;
        case CostSpec::Kind::Convolution:
            o["kind"] = "convolution";
            o["c"] = c.coefficient;
            o["kernel"] = dump_profile(c.profile, dim);
            break;
        case CostSpec::Kind::Smoothed:
            o["kind"] = "smoothed";
            o["c"] = c.coefficient;
            break;
        case CostSpec::Kind::MomentQuadratic:
            o["kind"] = "moment-quadratic";
            break;
        case CostSpec::Kind::Obstacle:
            o["kind"] = "obstacle";
            o["value"] = c.coefficient;
            o["center"] = dump_point(c.center, dim);
            o["radius_sq"] = c.radius_sq;
            break;
    }
    return o;
}

TerminalCost parse_terminal(Node n, int dim, const std::optional<ReferenceParams>& ref) {
    const std::string kind = choose(n.string("kind", "zero"), n.at("kind"),
                                    {"zero", "fixed", "density-tracking", "local-affine", "moment-quadratic"});
    TerminalCost c;
    if (kind == "fixed") {
        if (!n.has("profile")) throw ConfigError(n.at("profile"), "required for a fixed terminal cost");
        c = TerminalCost::fixed(parse_profile(n.child("profile"), dim));
    } else if (kind == "density-tracking") {
        const double eta = n.number("eta", 1.0);
        require(eta >= 0.0, n.at("eta"), "be nonnegative", eta);
        if (!n.has("target")) throw ConfigError(n.at("target"), "required for a density-tracking terminal cost");
        c = TerminalCost::density_tracking(eta, parse_profile(n.child("target"), dim));
    } else if (kind == "local-affine") {
        const double a = n.number("a", 1.0);
        require(a >= 0.0, n.at("a"), "be nonnegative", a);
        c = TerminalCost::local_affine(a);
    } else if (kind == "moment-quadratic") {
        if (!ref) throw ConfigError(n.at("kind"), "moment-quadratic needs problem.reference");
        c = TerminalCost::moment_quadratic(*ref);
    }
    n.finish();
    return c;
}

ojson dump_terminal(const TerminalCost& c, int dim) {
    ojson o;
    switch (c.kind) {
        case TerminalCost::Kind::Zero:
            o["kind"] = "zero";
            break;
        case TerminalCost::Kind::Fixed:
            o["kind"] = "fixed";
            o["profile"] = dump_profile(c.profile, dim);
            break;
        case TerminalCost::Kind::DensityTracking:
            o["kind"] = "density-tracking";
            o["eta"] = c.coefficient;
            o["target"] = dump_profile(c.profile, dim);
            break;
        case TerminalCost::Kind::LocalAffine:
            o["kind"] = "local-affine";
            o["a"] = c.coefficient;
            break;
        case TerminalCost::Kind::MomentQuadratic:
            o["kind"] = "moment-quadratic";
            break;
    }
    return o;
}

Hamiltonian parse_hamiltonian(Node n, int dim) {
    const std::string kind = choose(n.string("kind", "quadratic"), n.at("kind"), {"quadratic", "power"});
    Hamiltonian h;
    if (kind == "power") {
        const double gamma = n.number("gamma", 2.0);
        require(gamma > 1.0 && std::isfinite(gamma), n.at("gamma"), "exceed 1", gamma);
        Profile potential;
        if (n.has("potential")) potential = parse_profile(n.child("potential"), dim);
        h = Hamiltonian::power(gamma, potential);
    }
    n.finish();
    return h;
}

ojson dump_hamiltonian(const Hamiltonian& h, int dim) {
    ojson o;
    if (h.kind() == Hamiltonian::Kind::Quadratic) {
        o["kind"] = "quadratic";
    } else {
        o["kind"] = "power";
        o["gamma"] = h.gamma();
        o["potential"] = dump_profile(h.potential(), dim);
    }
    return o;
}

// ---- problem ---------------------------------------------------------------

// Reads problem fields over a starting definition, so a catalog base can be
// partially overridden.
void parse_problem_fields(Node& n, ProblemDefinition& d) {
    d.name = n.string("name", d.name);
    d.description = n.string("description", d.description);
    if (n.has("dim")) {
        const int dim = n.integer("dim", d.dim);
        if (dim != 1 && dim != 2) throw ConfigError(n.at("dim"), "must be 1 or 2, got " + std::to_string(dim));
        if (dim != d.dim) {
            d.dim = dim;
            d.n_x = dim == 1 ? std::array<int, 2>{d.n_x[0], 0} : std::array<int, 2>{d.n_x[0], d.n_x[0]};
            if (dim == 1) {
                d.lower[1] = 0.0;
                d.upper[1] = 0.0;
            }
        }
    }
    const int dim = d.dim;
    if (n.has("domain")) {
        Node dom = n.child("domain");
        d.lower = dom.point("lower", d.lower, dim);
        d.upper = dom.point("upper", d.upper, dim);
        dom.finish();
    }
    for (int k = 0; k < dim; ++k) {
        if (!(d.upper[k] > d.lower[k])) {
            throw ConfigError(n.at("domain"), "upper must exceed lower in every dimension");
        }
    }
    d.T = n.number("T", d.T);
    require(d.T > 0.0 && std::isfinite(d.T), n.at("T"), "be positive and finite", d.T);
    d.nu = n.number("nu", d.nu);
    require(d.nu >= 0.0 && std::isfinite(d.nu), n.at("nu"), "be nonnegative", d.nu);
    d.nu_n = n.number("nu_n", d.nu_n);
    require(d.nu_n >= 0.0 && std::isfinite(d.nu_n), n.at("nu_n"), "be nonnegative", d.nu_n);

    if (n.has("reference")) {
        const json& r = n.raw("reference");
        if (r.is_null()) {
            d.reference.reset();
        } else {
            d.reference = parse_reference(Node(r, n.at("reference")));
        }
    }
    if (n.has("hamiltonian")) d.hamiltonian = parse_hamiltonian(n.child("hamiltonian"), dim);
    if (n.has("interaction")) d.interaction = parse_interaction(n.child("interaction"), dim, d.reference);
    if (n.has("terminal")) d.terminal = parse_terminal(n.child("terminal"), dim, d.reference);
    if (n.has("rho0")) {
        d.rho0 = parse_profile(n.child("rho0"), dim);
        if (d.rho0.kind != Profile::Kind::Gaussian) throw ConfigError(n.at("rho0"), "initial density must be gaussian");
    }
    // A base reference that changed keeps moment costs in sync.
    if (d.reference) {
        if (d.interaction.kind == CostSpec::Kind::MomentQuadratic) d.interaction.moment = *d.reference;
        if (d.terminal.kind == TerminalCost::Kind::MomentQuadratic) d.terminal.moment = *d.reference;
    } else if (d.interaction.kind == CostSpec::Kind::MomentQuadratic ||
               d.terminal.kind == TerminalCost::Kind::MomentQuadratic) {
        throw ConfigError(n.at("reference"), "required by moment-quadratic costs");
    }
    if ((d.interaction.kind == CostSpec::Kind::MomentQuadratic ||
         d.terminal.kind == TerminalCost::Kind::MomentQuadratic) &&
        dim != 1) {
        throw ConfigError(n.at("interaction"), "moment-quadratic costs need dim = 1");
    }
}

ojson dump_problem(const RunConfig& c) {
    const ProblemDefinition& d = c.problem;
    ojson o;
    if (!c.base.empty()) o["base"] = c.base;
    o["name"] = d.name;
    o["description"] = d.description;
    o["dim"] = d.dim;
    o["domain"]["lower"] = dump_point(d.lower, d.dim);
    o["domain"]["upper"] = dump_point(d.upper, d.dim);
    o["T"] = d.T;
    o["nu"] = d.nu;
    o["nu_n"] = d.nu_n;
    o["hamiltonian"] = dump_hamiltonian(d.hamiltonian, d.dim);
    o["interaction"] = dump_interaction(d.interaction, d.dim);
    o["terminal"] = dump_terminal(d.terminal, d.dim);
    o["rho0"] = dump_profile(d.rho0, d.dim);
    if (d.reference) {
        o["reference"] = dump_reference(*d.reference);
    } else {
        o["reference"] = nullptr;
    }
    return o;
}

// ---- schedule --------------------------------------------------------------

WeightSchedule parse_schedule(Node n, const WeightSchedule& base) {
    const std::string fallback = base.kind == WeightSchedule::Kind::Constant      ? "constant"
                                 : base.kind == WeightSchedule::Kind::Diminishing ? "diminishing"
                                                                                  : "btls";
    const std::string kind = choose(n.string("kind", fallback), n.at("kind"), {"constant", "diminishing", "btls"});
    // Parameters of the base only carry over when the kind is unchanged.
    WeightSchedule s = kind == fallback ? base : WeightSchedule{};
    if (kind == "constant") {
        s.kind = WeightSchedule::Kind::Constant;
        s.delta = n.number("delta", kind == fallback ? base.delta : 0.5);
        require(s.delta > 0.0 && s.delta <= 1.0, n.at("delta"), "lie in (0,1]", s.delta);
        s = WeightSchedule::constant(s.delta);
    } else if (kind == "diminishing") {
        const double alpha = n.number("alpha", kind == fallback ? base.alpha : 1.0);
        require(alpha > 0.0 && std::isfinite(alpha), n.at("alpha"), "be positive", alpha);
        s = WeightSchedule::diminishing(alpha);
    } else {
        const WeightSchedule d = kind == fallback ? base : WeightSchedule::btls(1.0, 0.5, 0.8);
        const double delta = n.number("delta", d.delta);
        const double beta = n.number("beta", d.beta);
        const double zeta = n.number("zeta", d.zeta);
        const int trials = n.integer("max_trials", d.max_trials);
        require(delta > 0.0 && delta <= 1.0, n.at("delta"), "lie in (0,1]", delta);
        require(beta > 0.0 && beta < 1.0, n.at("beta"), "lie in (0,1)", beta);
        require(zeta > 0.0 && zeta < 1.0, n.at("zeta"), "lie in (0,1)", zeta);
        require(trials >= 1, n.at("max_trials"), "be at least 1", trials);
        s = WeightSchedule::btls(delta, beta, zeta, trials);
    }
    n.finish();
    return s;
}

ojson dump_schedule(const WeightSchedule& s) {
    ojson o;
    switch (s.kind) {
        case WeightSchedule::Kind::Constant:
            o["kind"] = "constant";
            o["delta"] = s.delta;
            break;
        case WeightSchedule::Kind::Diminishing:
            o["kind"] = "diminishing";
            o["alpha"] = s.alpha;
            break;
        case WeightSchedule::Kind::Btls:
            o["kind"] = "btls";
            o["delta"] = s.delta;
            o["beta"] = s.beta;
            o["zeta"] = s.zeta;
            o["max_trials"] = s.max_trials;
            break;
    }
    return o;
}

// ---- overrides -------------------------------------------------------------

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("", "override '" + assignment + "' is not of the form dotted.path=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &doc;
    std::size_t start = 0;
    std::string walked;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError(path, "empty path segment in override");
        // A catalog name given as a bare string becomes an object so that
        // individual problem fields can be overridden.
        if (node->is_string() && walked == "problem") *node = json{{"base", node->get<std::string>()}};
        if (node->is_null()) *node = json::object();
        if (!node->is_object()) throw ConfigError(walked, "cannot override a field inside a non-object");
        walked = join(walked, key);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

RunConfig parse_document(const json& doc) {
    Node root(doc, "");
    if (!root.has("problem")) throw ConfigError("problem", "required");

    RunConfig c;
    std::optional<CatalogEntry> entry;
    const json& pj = root.raw("problem");
    if (pj.is_string()) {
        c.base = pj.get<std::string>();
        try {
            entry = catalog_entry(c.base);
        } catch (const Error& e) {
            throw ConfigError("problem", e.what());
        }
        c.problem = entry->definition;
    } else if (pj.is_object()) {
        Node pn(pj, "problem");
        c.base = pn.string("base", "");
        if (!c.base.empty()) {
            try {
                entry = catalog_entry(c.base);
            } catch (const Error& e) {
                throw ConfigError("problem.base", e.what());
            }
            c.problem = entry->definition;
        } else {
            c.problem = ProblemDefinition{};
            c.problem.name = "inline";
            if (!pn.has("rho0")) throw ConfigError("problem.rho0", "required for an inline problem");
        }
        parse_problem_fields(pn, c.problem);
        pn.finish();
    } else {
        throw ConfigError("problem", "expected a catalog name or an object");
    }
    ProblemDefinition& d = c.problem;

    if (entry) {
        c.schedule = entry->schedule;
        c.epsilon = entry->epsilon;
        c.k_max = entry->k_max;
        c.levels = entry->levels;
        c.init = entry->init;
        c.gain_form = entry->gain_form;
    } else {
        c.schedule = WeightSchedule::constant(0.5);
    }

    if (root.has("grid")) {
        Node g = root.child("grid");
        if (g.has("n_x")) {
            const json& nx = g.raw("n_x");
            if (!nx.is_array() || static_cast<int>(nx.size()) != d.dim) {
                throw ConfigError("grid.n_x", "expected an array of " + std::to_string(d.dim) + " integers");
            }
            for (int k = 0; k < d.dim; ++k) {
                if (!nx[k].is_number_integer()) throw ConfigError("grid.n_x", "expected integers");
                d.n_x[k] = nx[k].get<int>();
            }
        }
        d.n_t = g.integer("n_t", d.n_t);
        g.finish();
    }
    for (int k = 0; k < d.dim; ++k) require(d.n_x[k] >= 2, "grid.n_x", "be at least 2", d.n_x[k]);
    require(d.n_t >= 1, "grid.n_t", "be at least 1", d.n_t);

    if (root.has("schedule")) c.schedule = parse_schedule(root.child("schedule"), c.schedule);
    c.epsilon = root.number("epsilon", c.epsilon);
    require(c.epsilon > 0.0, "epsilon", "be positive", c.epsilon);
    c.k_max = root.integer("k_max", c.k_max);
    require(c.k_max >= 1, "k_max", "be at least 1", c.k_max);
    const std::string gain = choose(root.string("gain", gain_form_name(c.gain_form)), "gain", {"momentum", "value"});
    c.gain_form = gain == "value" ? GainForm::Value : GainForm::Momentum;
    c.init = choose(root.string("init", c.init), "init", {"phi", "rho"});

    if (root.has("hierarchy")) {
        Node h = root.child("hierarchy");
        c.levels = h.integer("levels", c.levels);
        if (h.has("eta_per_level")) {
            const json& e = h.raw("eta_per_level");
            if (e.is_null()) {
                d.eta_per_level.reset();
            } else {
                d.eta_per_level = h.number("eta_per_level", 0.0);
                require(*d.eta_per_level >= 0.0, "hierarchy.eta_per_level", "be nonnegative", *d.eta_per_level);
            }
        }
        h.finish();
    }
    require(c.levels >= 0 && c.levels <= 12, "hierarchy.levels", "lie in [0,12]", c.levels);
    if (c.levels > 0) {
        try {
            (void)coarsened(d, c.levels);
        } catch (const Error& e) {
            throw ConfigError("hierarchy.levels", e.what());
        }
    }

    if (root.has("newton")) {
        Node n = root.child("newton");
        c.newton.tol_residual = n.number("tol_residual", c.newton.tol_residual);
        require(c.newton.tol_residual > 0.0, "newton.tol_residual", "be positive", c.newton.tol_residual);
        c.newton.max_newton = n.integer("max_newton", c.newton.max_newton);
        require(c.newton.max_newton >= 1, "newton.max_newton", "be at least 1", c.newton.max_newton);
        n.finish();
    }

    if (root.has("output")) {
        Node o = root.child("output");
        c.output.directory = o.string("directory", c.output.directory);
        if (c.output.directory.empty()) throw ConfigError("output.directory", "must not be empty");
        c.output.iterations = o.boolean("iterations", c.output.iterations);
        c.output.fields = o.boolean("fields", c.output.fields);
        c.output.config = o.boolean("config", c.output.config);
        o.finish();
    }
    root.finish();
    return c;
}

}  // namespace

const char* gain_form_name(GainForm form) { return form == GainForm::Value ? "value" : "momentum"; }

RunConfig parse_config(const std::string& text) { return parse_config(text, {}); }

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_document(doc);
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

std::string dump_config(const RunConfig& c) {
    ojson o;
    o["problem"] = dump_problem(c);
    ojson nx = ojson::array();
    for (int k = 0; k < c.problem.dim; ++k) nx.push_back(c.problem.n_x[k]);
    o["grid"]["n_x"] = nx;
    o["grid"]["n_t"] = c.problem.n_t;
    o["schedule"] = dump_schedule(c.schedule);
    if (std::isinf(c.epsilon)) {
        o["epsilon"] = "inf";
    } else {
        o["epsilon"] = c.epsilon;
    }
    o["k_max"] = c.k_max;
    o["gain"] = gain_form_name(c.gain_form);
    o["init"] = c.init;
    o["hierarchy"]["levels"] = c.levels;
    if (c.problem.eta_per_level) {
        o["hierarchy"]["eta_per_level"] = *c.problem.eta_per_level;
    } else {
        o["hierarchy"]["eta_per_level"] = nullptr;
    }
    o["newton"]["tol_residual"] = c.newton.tol_residual;
    o["newton"]["max_newton"] = c.newton.max_newton;
    o["output"]["directory"] = c.output.directory;
    o["output"]["iterations"] = c.output.iterations;
    o["output"]["fields"] = c.output.fields;
    o["output"]["config"] = c.output.config;
    return o.dump(2) + "\n";
}

RunConfig default_config(const std::string& problem_name) {
    return parse_config(json{{"problem", problem_name}}.dump());
}

}  // namespace mfg
