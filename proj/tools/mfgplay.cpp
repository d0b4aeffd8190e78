#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfg/config.hpp"
#include "mfg/error.hpp"
#include "mfg/run.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mfg::Error(mfg::ErrorKind::Io, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Config text from a file, or a bare document naming a catalog problem.
std::string config_text(const std::string& path, const std::string& problem) {
    if (!path.empty()) return read_file(path);
    if (problem.empty()) throw mfg::ConfigError("", "give a config file or --problem NAME");
    return "{\"problem\": \"" + problem + "\"}";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fictitious play solver for discrete mean-field games"};
    app.require_subcommand(1);

    std::string config_path;
    std::string problem;
    std::vector<std::string> overrides;
    std::string output_dir;
    bool quiet = false;

    auto* run_cmd = app.add_subcommand("run", "Solve the configured problem and write diagnostics");
    run_cmd->add_option("config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    run_cmd->add_option("-p,--problem", problem, "Catalog problem to run with its defaults");
    run_cmd->add_option("-s,--set", overrides, "Override a field, e.g. schedule.delta=0.25")->take_all();
    run_cmd->add_option("-o,--output", output_dir, "Output directory");
    run_cmd->add_flag("-q,--quiet", quiet, "Only report errors");

    auto* validate_cmd = app.add_subcommand("validate", "Check a configuration and print it fully resolved");
    validate_cmd->add_option("config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    validate_cmd->add_option("-p,--problem", problem, "Catalog problem to resolve");
    validate_cmd->add_option("-s,--set", overrides, "Override a field")->take_all();

    app.add_subcommand("list-problems", "Print the built-in problems");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("list-problems")) {
        std::cout << mfg::list_problems();
        return mfg::kExitConverged;
    }

    if (!output_dir.empty()) overrides.push_back("output.directory=\"" + output_dir + "\"");

    mfg::RunConfig config;
    try {
        config = mfg::parse_config(config_text(config_path, problem), overrides);
    } catch (const mfg::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return mfg::kExitError;
    }

    if (validate_cmd->parsed()) {
        std::cout << mfg::dump_config(config);
        return mfg::kExitConverged;
    }

    std::ostringstream sink;
    const mfg::RunSummary s = mfg::run(config, quiet ? static_cast<std::ostream&>(sink) : std::cout);
    if (quiet && s.exit_code == mfg::kExitError) std::cerr << s.message << '\n';
    return s.exit_code;
}
