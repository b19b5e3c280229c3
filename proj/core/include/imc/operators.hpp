#pragma once

#include <cstddef>
#include <vector>

#include "imc/model.hpp"

namespace imc {

/// Default cap on enumerated vertices per row.
inline constexpr std::size_t kVertexCap = 10000;

// ---------------------------------------------------------------------------
// Row-level primitives. Each state's credal set is optimized independently;
// linear objectives attain their extrema at vertices (VertexList) or at the
// sorted greedy allocation (IntervalBounds), so no LP is involved.
// ---------------------------------------------------------------------------

struct RowOptimum {
    ProbabilityRow row;  // an attaining row of the credal set
    ExtValue value;      // <row, f> under extended arithmetic
};

/// Optimizes <q, f> over the row's credal set. The returned value is the
/// ext_dot of the returned row, so applying the row reproduces the bound
/// bit-for-bit. Tie-break: VertexList takes the lowest vertex index among
/// optimizers; IntervalBounds sorts by f (infinite coordinates last for the
/// lower bound, first for the upper) with ties broken by ascending state
/// index, then allocates greedily.
RowOptimum row_optimize(const RowCredalSet& row, const ExtVector& f, Bound bound);

/// Vertices of the row's credal set, deduplicated within 1e-12.
/// IntervalBounds rows enumerate the vertices of the box/simplex slice:
/// every vertex has at most one coordinate strictly between its bounds.
/// Throws VertexExplosionError past the cap.
std::vector<ProbabilityRow> row_vertices(const RowCredalSet& row,
                                         std::size_t cap = kVertexCap);

/// States that can receive strictly positive mass from some row in the set.
std::vector<int> row_support(const RowCredalSet& row);

/// Whether some row q in the credal set has supp(q) inside `allowed` and
/// puts strictly positive mass on `positive`. Masks are indexed by state.
bool row_exists_supported(const RowCredalSet& row, const std::vector<char>& allowed,
                          const std::vector<char>& positive);

/// Membership of a concrete row in the credal set within tol: direct bound
/// checks for IntervalBounds, a non-negative least-squares feasibility test
/// for the convex hull of a VertexList.
bool row_contains(const RowCredalSet& row, const ProbabilityRow& candidate,
                  double tol = kMembershipTol);

// ---------------------------------------------------------------------------
// Chain-level operators.
// ---------------------------------------------------------------------------

/// [T f](x) = <T(x,.), f> under extended arithmetic.
ExtVector apply_matrix(const TransitionMatrix& T, const ExtVector& f);

/// The lower transition operator: per state, the infimum of <row, f>.
ExtVector lower_transition_apply(const ImpreciseChain& chain, const ExtVector& f);

/// The upper transition operator: per state, the supremum of <row, f>.
ExtVector upper_transition_apply(const ImpreciseChain& chain, const ExtVector& f);

ExtVector transition_apply(const ImpreciseChain& chain, const ExtVector& f, Bound bound);

/// n-fold application of the chosen bound operator; n = 0 is the identity.
ExtVector power_transition(const ImpreciseChain& chain, const ExtVector& f, int n,
                           Bound bound);

/// A matrix in the chain's product credal set attaining the bound operator
/// on f, built row by row (separately specified rows).
TransitionMatrix select_extremal_matrix(const ImpreciseChain& chain, const ExtVector& f,
                                        Bound bound);

/// States reachable in one step from x with positive upper probability.
std::vector<int> possible_support(const ImpreciseChain& chain, int x);

/// Whether every row of the matrix is a member of the corresponding credal set.
bool matrix_in_chain(const ImpreciseChain& chain, const TransitionMatrix& T,
                     double tol = kMembershipTol);

}  // namespace imc
