#pragma once

#include <vector>

#include "imc/iteration.hpp"
#include "imc/model.hpp"

namespace imc {

/// A base matrix for the lambda-perturbed family: every state outside A
/// that can reach A at all does so with positive probability within its
/// minimal horizon n_x (breadth-first layer over the possible-support
/// graph). Rows of A and C states take the deterministic default row.
TransitionMatrix build_lambda_base(const ImpreciseChain& chain, const TargetSet& A);

/// The chain of the row sets {lambda * base_row + (1 - lambda) * row}.
/// Every row of the result lies inside the original credal set. Requires
/// lambda in (0, 1).
ImpreciseChain lambda_chain(const ImpreciseChain& chain, const TransitionMatrix& base,
                            double lambda);

/// Geometric schedule 2^-1, ..., 2^-n.
std::vector<double> default_lambda_schedule(int n = 20);

struct WitnessExtraction {
    WitnessVariant witness;
    /// For the upper hitting probability: one entry per schedule step, with
    /// achieved values non-decreasing as lambda falls.
    std::vector<LambdaWitness> schedule_trace;
};

/// A bound-attaining matrix for the three attained quantities (verified by
/// the precise solver, including the infinite pattern), or the certified
/// lambda-witness for the upper hitting probability. Runs the exact solve
/// internally.
WitnessExtraction extract_witness(const ImpreciseChain& chain, const TargetSet& A,
                                  Quantity quantity, Bound bound,
                                  const std::vector<double>& lambda_schedule =
                                      default_lambda_schedule());

/// Same, against already-computed exact bound values.
WitnessExtraction extract_witness_for(const ImpreciseChain& chain, const TargetSet& A,
                                      Quantity quantity, Bound bound,
                                      const ExtVector& exact_values,
                                      const std::vector<double>& lambda_schedule =
                                          default_lambda_schedule());

/// The row-by-row matrix whose precise hitting times reproduce the upper
/// bound: rows on Z attain the upper operator on the fixed point, rows on B
/// attain the one-step upper mass into B, rows on U attain the minimal-
/// horizon upper reach of B.
TransitionMatrix upper_time_witness_matrix(const ImpreciseChain& chain, const TargetSet& A,
                                           const ExtVector& exact_values);

}  // namespace imc
