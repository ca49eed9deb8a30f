#pragma once

#include <string>

#include "bifrac/phasespace.hpp"

namespace bifrac {

// Shortest %.17g rendering; round-trips doubles exactly and is
// byte-deterministic, which the CLI output contracts rely on.
std::string fmt17(double v);

// {"dim": N, "rows": [[[re, im], ...], ...]}
std::string operator_to_json(const Mat& U);
Mat operator_from_json(const std::string& text);

// CSV header alpha,beta,re,im; one row per grid point, alpha index major.
std::string grid_to_csv(const PhaseSpaceGrid& g);

// {"axes": {...}, "kind": ..., "angles": ..., "fock_dim": ..., "trusted": ..., "values": [[re,im], ...]}
std::string grid_to_json(const PhaseSpaceGrid& g);

}  // namespace bifrac
