#include "mfg/run.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "mfg/catalog.hpp"
#include "mfg/error.hpp"

namespace mfg {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string optional_cell(const std::optional<double>& v) { return v ? (std::isnan(*v) ? "nan" : num(*v)) : ""; }

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

}  // namespace

void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
    out << kIterationsHeader << '\n';
    for (const auto& r : records) {
        out << r.k << ',' << r.level << ',' << (std::isnan(r.delta) ? "" : num(r.delta)) << ',' << num(r.gain) << ','
            << num(r.consec_residue) << ',' << num(r.fp_residue) << ',' << optional_cell(r.ref_error) << ','
            << optional_cell(r.cosine) << ',' << r.btls_trials << ',' << num(r.wall_s) << '\n';
    }
}

void write_fields_csv(std::ostream& out, const ScalarField& rho, const ScalarField& phi) {
    const GridSpec& g = rho.grid();
    if (g.dim() != 1) throw Error(ErrorKind::UnsupportedDimension, "CSV field dumps are 1D only");
    if (!(phi.grid() == g)) throw Error(ErrorKind::GridMismatch, "field dump: rho and phi grids differ");
    out << "x,t,rho,phi\n";
    for (int n = 0; n <= g.n_t(); ++n) {
        const std::string t = num(g.time(n));
        for (std::size_t p = 0; p < g.slice_size(); ++p) {
            out << num(g.coordinate(0, static_cast<int>(p))) << ',' << t << ',' << num(rho.at(p, n)) << ','
                << num(phi.at(p, n)) << '\n';
        }
    }
}

void write_field_binary(const std::string& path, const ScalarField& field) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    const auto& v = field.values();
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    } else {
        for (double x : v) {
            auto bits = std::bit_cast<std::uint64_t>(x);
            char bytes[8];
            for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
            out.write(bytes, 8);
        }
    }
    check_written(out, path);
}

std::string field_metadata_json(const GridSpec& g, const std::vector<std::string>& files) {
    nlohmann::ordered_json o;
    o["dtype"] = "float64";
    o["byte_order"] = "little";
    o["ordering"] = "row-major";
    o["axes"] = {"t", "x1", "x2"};
    o["shape"] = {g.n_t() + 1, g.n_x(0) + 1, g.n_x(1) + 1};
    o["extents"]["t"] = {0.0, g.T()};
    o["extents"]["x1"] = {g.x_min(0), g.x_max(0)};
    o["extents"]["x2"] = {g.x_min(1), g.x_max(1)};
    o["files"] = files;
    return o.dump(2) + "\n";
}

RunSummary run(const RunConfig& config, std::ostream& log) {
    RunSummary s;
    try {
        namespace fs = std::filesystem;
        const fs::path dir(config.output.directory);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());

        if (config.output.config) {
            auto out = open_out(dir / "config.json");
            out << dump_config(config);
            check_written(out, dir / "config.json");
        }

        PlayResult final;
        GridSpec grid;
        if (config.levels == 0) {
            const ProblemSpec problem = instantiate(config.problem, config.problem.grid(0));
            grid = problem.grid;
            PlayOptions opts;
            opts.epsilon = config.epsilon;
            opts.k_max = config.k_max;
            opts.gain_form = config.gain_form;
            opts.newton = config.newton;
            const Initialization init =
                config.init == "rho" ? Initialization::stationary(problem) : Initialization::from_phi(ScalarField());
            final = run_fictitious_play(problem, config.schedule, opts, init);
            s.records = final.records;
        } else {
            HierarchySpec h;
            h.L = config.levels;
            h.epsilon = config.epsilon;
            h.k_max = config.k_max;
            h.gain_form = config.gain_form;
            h.stationary_start = config.init == "rho";
            HierarchyResult res = run_hierarchical(config.problem, h, config.schedule, config.newton);
            for (const auto& lvl : res.levels) {
                log << "level " << lvl.level << ": n_t=" << lvl.grid.n_t() << " n_x=" << lvl.grid.n_x(0)
                    << ", " << lvl.records.size() << " iterations, " << (lvl.converged ? "converged" : "stopped at k_max")
                    << ", " << num(lvl.wall_s) << " s";
                if (lvl.terminal_mismatch) log << ", terminal mismatch " << num(*lvl.terminal_mismatch);
                log << '\n';
                s.records.insert(s.records.end(), lvl.records.begin(), lvl.records.end());
            }
            grid = res.problem.grid;
            final = std::move(res.final);
        }
        s.converged = final.converged;

        if (config.output.iterations) {
            auto out = open_out(dir / "iterations.csv");
            write_iterations_csv(out, s.records);
            check_written(out, dir / "iterations.csv");
        }
        if (config.output.fields) {
            if (grid.dim() == 1) {
                auto out = open_out(dir / "fields.csv");
                write_fields_csv(out, final.state.rho, final.br.phi);
                check_written(out, dir / "fields.csv");
            } else {
                write_field_binary((dir / "rho.bin").string(), final.state.rho);
                write_field_binary((dir / "phi.bin").string(), final.br.phi);
                auto out = open_out(dir / "fields.json");
                out << field_metadata_json(grid, {"rho.bin", "phi.bin"});
                check_written(out, dir / "fields.json");
            }
        }

        const double last_gain = s.records.empty() ? NAN : s.records.back().gain;
        std::ostringstream msg;
        msg << config.problem.name << ": " << s.records.size() << " iterations, last gain " << num(last_gain) << ", "
            << (s.converged ? "converged" : "not converged within k_max");
        s.message = msg.str();
        s.exit_code = s.converged ? kExitConverged : kExitNotConverged;
        log << s.message << '\n';
    } catch (const std::exception& e) {
        s.exit_code = kExitError;
        s.converged = false;
        s.message = std::string("error: ") + e.what();
        log << s.message << '\n';
    }
    return s;
}

std::string list_problems() {
    std::string out;
    for (const auto& name : catalog_names()) {
        const auto e = catalog_entry(name);
        std::string padded = name;
        padded.resize(std::max<std::size_t>(name.size() + 2, 20), ' ');
        out += padded + e.definition.description + "\n";
    }
    return out;
}

}  // namespace mfg
