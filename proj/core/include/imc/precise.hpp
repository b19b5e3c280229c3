#pragma once

#include <vector>

#include "imc/model.hpp"

namespace imc {

struct PreciseOptions {
    /// A state counts as "hits with probability one" when p >= 1 - prob_one_tol.
    double prob_one_tol = 1e-9;
    /// Residual threshold past which the linear solve is declared singular.
    double solve_residual_tol = 1e-9;
};

/// Exact hitting quantities for one transition matrix, via the minimal
/// non-negative solution of the defining linear system. Minimality is
/// enforced constructively: hitting probabilities are pinned to zero on
/// states that cannot reach the target, hitting times to +inf on states
/// whose hitting probability is below one.
struct PreciseSolution {
    ExtVector values;
    std::vector<int> target_states;      // A
    std::vector<int> pinned_states;      // pinned to 0 (prob) or +inf (time)
    std::vector<int> interior_states;    // solved by the linear system
    double residual = 0.0;               // max-norm defect on finite states
};

/// States with no directed path to A under supp(T); reverse BFS from A.
std::vector<int> cannot_reach_set(const TransitionMatrix& T, const TargetSet& A);

PreciseSolution precise_hitting_prob(const TransitionMatrix& T, const TargetSet& A,
                                     const PreciseOptions& opts = {});

PreciseSolution precise_hitting_time(const TransitionMatrix& T, const TargetSet& A,
                                     const PreciseOptions& opts = {});

/// Solves (I - S) x = rhs where S is T restricted to the interior states.
/// Partial-pivot dense elimination; throws SingularSystemError when the
/// solve defect exceeds residual_tol.
std::vector<double> solve_hitting_block(const TransitionMatrix& T,
                                        const std::vector<int>& interior,
                                        const std::vector<double>& rhs,
                                        double residual_tol = 1e-9);

struct ResidualReport {
    double max_residual = 0.0;   // over states where candidate and rhs are finite
    bool infinite_consistent = true;  // rhs infinite exactly where candidate is
};

/// Defect of a candidate under the defining equation of the quantity:
/// h = I_{A^c} + I_{A^c} . T h  (time)   /   p = I_A + I_{A^c} . T p  (prob).
ResidualReport check_minimal_solution(const TransitionMatrix& T, const TargetSet& A,
                                      const ExtVector& candidate, Quantity quantity);

}  // namespace imc
