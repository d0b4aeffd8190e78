#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mfg/hjb.hpp"
#include "mfg/play.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct OutputConfig {
    std::string directory = "out";
    bool iterations = true;
    bool fields = true;
    bool config = true;

    bool operator==(const OutputConfig&) const = default;
};

/// Fully resolved run description. Every default is filled in, so two
/// configs compare equal exactly when they describe the same run.
struct RunConfig {
    /// Catalog entry the problem was derived from; empty for a fully inline
    /// problem.
    std::string base;
    /// Problem with the run's grid already applied.
    ProblemDefinition problem;
    WeightSchedule schedule;
    double epsilon = 1e-6;
    int k_max = 500;
    GainForm gain_form = GainForm::Momentum;
    /// Number of refinements; 0 runs a single grid.
    int levels = 0;
    /// "phi": zero value function; "rho": ρ(x,t) = ρ0(x).
    std::string init = "phi";
    NewtonOptions newton;
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON document. Unknown keys and out-of-range values raise
/// ConfigError carrying the dotted path of the offending field.
RunConfig parse_config(const std::string& text);
/// Applies "dotted.path=value" overrides to the document before parsing.
/// Values that are not valid JSON are taken as strings.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides);
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Resolved configuration as JSON; parse_config of the result gives back an
/// equal RunConfig.
std::string dump_config(const RunConfig& config);

/// Catalog defaults for a named problem.
RunConfig default_config(const std::string& problem_name);

const char* gain_form_name(GainForm form);

}  // namespace mfg
