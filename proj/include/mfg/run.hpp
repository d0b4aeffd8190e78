#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mfg/config.hpp"
#include "mfg/play.hpp"

namespace mfg {

enum ExitCode { kExitConverged = 0, kExitError = 1, kExitNotConverged = 2 };

inline constexpr const char* kIterationsHeader =
    "k,level,delta,gain,consec_residue,fp_residue,ref_error,cosine,btls_trials,wall_s";

void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& records);

/// Long-format x,t,rho,phi rows, time-major. 1D only.
void write_fields_csv(std::ostream& out, const ScalarField& rho, const ScalarField& phi);

/// Row-major little-endian float64 dump of a whole space-time field, slowest
/// axis t, then x1, then x2.
void write_field_binary(const std::string& path, const ScalarField& field);
/// Sidecar describing the binary dumps next to it.
std::string field_metadata_json(const GridSpec& grid, const std::vector<std::string>& files);

struct RunSummary {
    int exit_code = kExitError;
    bool converged = false;
    std::vector<IterationRecord> records;
    std::string message;
};

/// Runs the configured solve and writes the requested outputs. Solver and
/// I/O errors are caught and reported through the exit code; log receives
/// one line per level and a final summary.
RunSummary run(const RunConfig& config, std::ostream& log);

/// One line per catalog problem: name, then a short description.
std::string list_problems();

}  // namespace mfg
