#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "imc/model.hpp"
#include "imc/precise.hpp"

namespace imc {

struct IterateOptions {
    /// Max-norm stopping tolerance on finite states; 0 picks the quantity
    /// default (1e-10 for hitting times, 1e-12 per-step for probabilities).
    double tol = 0.0;
    long max_iter = 1000000;
    /// Snapshots up to this iteration keep their full value vector; later
    /// ones keep only scalars. The final iterate is always stored.
    std::size_t trace_value_cap = 4096;
};

struct TraceSnapshot {
    long iteration = 0;
    /// The plain recursion iterate h^(n) / p^(n) (empty past the cap).
    /// Equals the optimal expectation of the n-step truncated functional.
    ExtVector values;
    /// Max increase over finite-classified states since the last iterate.
    double max_delta = 0.0;
    /// Fixed-point defect of this iterate on finite-classified states.
    double residual = 0.0;
};

enum class Termination { converged, max_iter, exact_classified };

const char* to_string(Termination t);

struct IterationTrace {
    std::vector<TraceSnapshot> snapshots;
    Termination termination = Termination::converged;
};

/// A matrix of the lambda-perturbed family together with the upper hitting
/// probabilities it attains. achieved is a certified lower witness for the
/// upper hitting probability: p_lambda <= p_upper always.
struct LambdaWitness {
    double lambda = 0.0;
    TransitionMatrix matrix;
    std::vector<double> achieved;
};

using WitnessVariant = std::variant<TransitionMatrix, LambdaWitness>;

struct HittingResult {
    Quantity quantity = Quantity::time;
    Bound bound = Bound::lower;
    ExtVector values;
    IterationTrace trace;
    double residual = 0.0;
    std::optional<WitnessVariant> witness;
};

/// States whose expected hitting time is +inf under the requested bound,
/// detected exactly by classification (never by growth thresholds).
/// Upper: B + U of the A-inert classification. Lower: the complement of the
/// almost-sure reachability region.
std::vector<int> infinite_states_hitting_time(const ImpreciseChain& chain, const TargetSet& A,
                                              Bound bound);

/// Monotone recursion h^(0) = I_{A^c}, h^(n+1) = I_{A^c} + I_{A^c} . T h^(n).
/// Infinite states are pinned up front and enter the right-hand side through
/// extended arithmetic; iteration stops when the finite states move less
/// than tol. The recorded trace holds the unpinned iterates, which stay
/// finite and bounded by n+1. Throws NotConvergedError at max_iter.
HittingResult iterate_hitting_time(const ImpreciseChain& chain, const TargetSet& A, Bound bound,
                                   const IterateOptions& opts = {});

/// Monotone recursion p^(0) = I_A, p^(n+1) = I_A + I_{A^c} . T p^(n).
/// Iterates are non-decreasing in [0, 1]. Note: at lambda = 0 no geometric
/// rate is guaranteed for the upper bound; stopping is delta-based.
HittingResult iterate_hitting_prob(const ImpreciseChain& chain, const TargetSet& A, Bound bound,
                                   const IterateOptions& opts = {});

/// The n-th plain recursion iterate, i.e. the tight bound on the expectation
/// of the n-step truncated hitting functional.
ExtVector truncated_values(const ImpreciseChain& chain, const TargetSet& A, Quantity quantity,
                           Bound bound, int n);

/// Defect of g under the quantity's fixed-point system with the chosen
/// bound operator.
ResidualReport fixed_point_residual(const ImpreciseChain& chain, const TargetSet& A,
                                    const ExtVector& g, Quantity quantity, Bound bound);

/// Classification pins the infinite/zero states, then policy iteration
/// alternates extremal-matrix selection with exact linear solves until the
/// selection repeats. Values are exact up to the linear solver; the witness
/// is the final matrix (built by the structural row recipes where required).
/// The upper hitting probability keeps the delta-based iterate when no
/// attaining matrix exists and carries a lambda-witness instead.
HittingResult solve_exact(const ImpreciseChain& chain, const TargetSet& A, Quantity quantity,
                          Bound bound, const IterateOptions& opts = {});

namespace detail {
/// solve_exact without witness extraction; used for the lambda-family
/// sub-solves, which would otherwise recurse into witness extraction.
HittingResult solve_exact_values(const ImpreciseChain& chain, const TargetSet& A,
                                 Quantity quantity, Bound bound, const IterateOptions& opts);
}  // namespace detail

}  // namespace imc
