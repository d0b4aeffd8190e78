#pragma once

#include <string>
#include <vector>

#include "mfg/play.hpp"
#include "mfg/problem.hpp"

namespace mfg {

/// A built-in problem with the solver settings it is normally run with. The
/// definition's grid is the finest grid; hierarchical runs coarsen from it.
struct CatalogEntry {
    ProblemDefinition definition;
    WeightSchedule schedule;
    double epsilon = 1e-6;
    int k_max = 500;
    int levels = 0;
    GainForm gain_form = GainForm::Momentum;
    /// "phi": zero value function; "rho": ρ(x,t) = ρ0(x).
    std::string init = "phi";
};

const std::vector<std::string>& catalog_names();
CatalogEntry catalog_entry(const std::string& name);
ProblemDefinition builtin_definition(const std::string& name);
/// The named problem instantiated on its default grid.
ProblemSpec builtin_catalog(const std::string& name);

/// Copy of def whose grid is the finest one divided by 2^levels in every
/// direction; throws when a count does not divide or drops below 2.
ProblemDefinition coarsened(const ProblemDefinition& def, int levels);

}  // namespace mfg
