#pragma once

#include <vector>

#include "imc/model.hpp"

namespace imc {

/// State classification for a chain/target pair. B, U, Z partition the state
/// space and are computed on the A-inert modification: B holds the states
/// with zero lower probability of ever reaching A, U the states outside B
/// that may reach B, Z the rest (including A). The upper expected hitting
/// time is +inf exactly on B + U. C holds the states of A^c with zero upper
/// probability of ever reaching A; the upper hitting probability is zero
/// exactly there. lower_finite_region holds the states from which some
/// compatible matrix reaches A with probability one; the lower expected
/// hitting time is finite exactly there.
struct ClassificationReport {
    std::vector<int> B;
    std::vector<int> U;
    std::vector<int> Z;
    std::vector<int> C;
    std::vector<int> lower_finite_region;
};

/// Replaces the rows of target states by the point mass on themselves;
/// hitting times and probabilities are invariant under this modification.
ImpreciseChain a_inert_modification(const ImpreciseChain& chain, const TargetSet& A);

ClassificationReport classify_states(const ImpreciseChain& chain, const TargetSet& A);

/// The almost-sure reachability region: the largest set S containing A such
/// that from every state of S some compatible row stays inside S while
/// keeping A reachable. Computed by the standard two-nested fixed point over
/// row-existence predicates.
std::vector<int> almost_sure_reach_region(const ImpreciseChain& chain, const TargetSet& A);

}  // namespace imc
