#pragma once

#include "fts/empirical_measure.hpp"

namespace fts {

/// Exact Prokhorov distance between two finitely supported probability
/// measures:
///   inf { chi > 0 : a coupling exists transporting >= 1 - chi of the mass
///                   over pairs at distance <= chi }.
/// Computed by scanning candidate chi over the sorted pairwise distances,
/// solving a max-flow feasibility problem per candidate (Strassen coupling
/// feasibility) and taking the minimal consistent fixed point. Agrees with
/// the set-based definition for finite measures.
double prokhorov_discrete(const EmpiricalMeasure& p1, const EmpiricalMeasure& p2,
                          GroundNorm norm = GroundNorm::max);

}  // namespace fts
