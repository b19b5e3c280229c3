#include "imc/witness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "imc/classify.hpp"
#include "imc/errors.hpp"
#include "imc/operators.hpp"

namespace imc {

namespace {

constexpr double kWitnessTol = 1e-8;

/// First vertex for a VertexList row, greedy-lower allocation of the zero
/// objective for IntervalBounds. Any row works where the construction does
/// not care; this one is deterministic.
ProbabilityRow default_row(const RowCredalSet& row, int k) {
    ExtVector zeros(static_cast<std::size_t>(k), ExtValue(0.0));
    if (const auto* vl = std::get_if<VertexListRow>(&row)) return vl->vertices.front();
    return row_optimize(row, zeros, Bound::lower).row;
}

/// Breadth-first layers: layer[x] = length of the shortest possible-support
/// path from x into `targets` (0 on targets themselves, -1 if unreachable).
std::vector<int> bfs_layers(const ImpreciseChain& chain, const std::vector<char>& targets) {
    const int k = chain.size();
    std::vector<std::vector<int>> predecessors(static_cast<std::size_t>(k));
    for (int x = 0; x < k; ++x)
        for (int y : possible_support(chain, x)) predecessors[y].push_back(x);

    std::vector<int> layer(static_cast<std::size_t>(k), -1);
    std::deque<int> queue;
    for (int x = 0; x < k; ++x) {
        if (targets[x]) {
            layer[x] = 0;
            queue.push_back(x);
        }
    }
    while (!queue.empty()) {
        const int y = queue.front();
        queue.pop_front();
        for (int x : predecessors[y]) {
            if (layer[x] < 0) {
                layer[x] = layer[y] + 1;
                queue.push_back(x);
            }
        }
    }
    return layer;
}

void verify_against_precise(const ExtVector& achieved, const ExtVector& expected,
                            const std::string& what) {
    for (std::size_t x = 0; x < expected.size(); ++x) {
        if (achieved[x].is_infinite() != expected[x].is_infinite())
            throw WitnessVerificationError(what + ": infinite pattern mismatch at state " +
                                           std::to_string(x));
        if (achieved[x].is_finite() &&
            std::abs(achieved[x].finite() - expected[x].finite()) > kWitnessTol)
            throw WitnessVerificationError(what + ": value mismatch at state " +
                                           std::to_string(x));
    }
}

}  // namespace

TransitionMatrix build_lambda_base(const ImpreciseChain& chain, const TargetSet& A) {
    const int k = chain.size();
    std::vector<char> a_mask(static_cast<std::size_t>(k), 0);
    for (int a : A.members()) a_mask[a] = 1;
    // n_x = minimal horizon with positive upper reach of A; -1 marks A and C.
    std::vector<int> layer = bfs_layers(chain, a_mask);

    // Upper reach indicators by horizon, for the argmax objectives.
    int max_layer = 0;
    for (int x = 0; x < k; ++x)
        if (!A.contains(x) && layer[x] > max_layer) max_layer = layer[x];
    std::vector<ExtVector> reach_pow;  // reach_pow[j] = upper(T)^j I_A
    ExtVector indicator(static_cast<std::size_t>(k), ExtValue(0.0));
    for (int a : A.members()) indicator[a] = ExtValue(1.0);
    reach_pow.push_back(indicator);
    for (int j = 1; j < max_layer; ++j)
        reach_pow.push_back(upper_transition_apply(chain, reach_pow.back()));

    TransitionMatrix T;
    T.rows.resize(static_cast<std::size_t>(k));
    for (int x = 0; x < k; ++x) {
        if (A.contains(x) || layer[x] < 0) {
            T.rows[x] = default_row(chain.rows[x], k);
        } else {
            // A row attaining the n_x-step upper reach: argmax against the
            // (n_x - 1)-step reach indicator.
            T.rows[x] = row_optimize(chain.rows[x], reach_pow[layer[x] - 1], Bound::upper).row;
        }
    }
    return T;
}

ImpreciseChain lambda_chain(const ImpreciseChain& chain, const TransitionMatrix& base,
                            double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw LambdaOutOfRangeError("lambda must lie in (0,1), got " + std::to_string(lambda));
    if (base.size() != chain.size())
        throw DimensionMismatchError("lambda_chain: base matrix dimension mismatch");

    const int k = chain.size();
    ImpreciseChain out = chain;
    for (int x = 0; x < k; ++x) {
        const std::vector<double>& b = base.rows[x].mass;
        if (const auto* vl = std::get_if<VertexListRow>(&chain.rows[x])) {
            VertexListRow mixed;
            mixed.vertices.reserve(vl->vertices.size());
            for (const auto& v : vl->vertices) {
                ProbabilityRow r;
                r.mass.resize(static_cast<std::size_t>(k));
                for (int y = 0; y < k; ++y)
                    r.mass[y] = lambda * b[y] + (1.0 - lambda) * v.mass[y];
                mixed.vertices.push_back(std::move(r));
            }
            out.rows[x] = std::move(mixed);
        } else {
            const auto& iv = std::get<IntervalBoundsRow>(chain.rows[x]);
            IntervalBoundsRow mixed;
            mixed.lower.resize(static_cast<std::size_t>(k));
            mixed.upper.resize(static_cast<std::size_t>(k));
            for (int y = 0; y < k; ++y) {
                mixed.lower[y] = lambda * b[y] + (1.0 - lambda) * iv.lower[y];
                mixed.upper[y] = lambda * b[y] + (1.0 - lambda) * iv.upper[y];
            }
            out.rows[x] = std::move(mixed);
        }
    }
    auto validated = validate_chain(out.states, std::vector<int>{}, out.rows);
    if (!validated.ok())
        throw Error("lambda_chain produced an invalid chain: " + describe(validated.violations));
    return out;
}

std::vector<double> default_lambda_schedule(int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    double lambda = 0.5;
    for (int i = 0; i < n; ++i, lambda *= 0.5) out.push_back(lambda);
    return out;
}

TransitionMatrix upper_time_witness_matrix(const ImpreciseChain& chain, const TargetSet& A,
                                           const ExtVector& exact_values) {
    const int k = chain.size();
    ClassificationReport report = classify_states(chain, A);
    const ImpreciseChain inert = a_inert_modification(chain, A);

    std::vector<char> b_mask(static_cast<std::size_t>(k), 0);
    for (int b : report.B) b_mask[b] = 1;
    ExtVector b_indicator(static_cast<std::size_t>(k), ExtValue(0.0));
    for (int b : report.B) b_indicator[b] = ExtValue(1.0);

    // Zero-extension of the fixed point from Z; Z-rows carry no mass
    // elsewhere, so the argmax there reproduces the bound operator.
    ExtVector q_up(static_cast<std::size_t>(k), ExtValue(0.0));
    for (int x = 0; x < k; ++x)
        if (exact_values[x].is_finite()) q_up[x] = exact_values[x];

    // Reach layers toward B inside the A-inert support graph.
    std::vector<int> layer = bfs_layers(inert, b_mask);
    int max_layer = 0;
    for (int u : report.U) max_layer = std::max(max_layer, layer[u]);
    std::vector<ExtVector> reach_pow;  // reach_pow[j] = upper(T)^j I_B on the inert chain
    reach_pow.push_back(b_indicator);
    for (int j = 1; j < max_layer; ++j)
        reach_pow.push_back(upper_transition_apply(inert, reach_pow.back()));

    TransitionMatrix W;
    W.rows.resize(static_cast<std::size_t>(k));
    for (int x = 0; x < k; ++x) {
        if (A.contains(x)) {
            W.rows[x] = default_row(chain.rows[x], k);
        } else if (b_mask[x]) {
            W.rows[x] = row_optimize(chain.rows[x], b_indicator, Bound::upper).row;
        } else if (layer[x] > 0) {  // U states
            W.rows[x] = row_optimize(chain.rows[x], reach_pow[layer[x] - 1], Bound::upper).row;
        } else {  // Z states outside A
            W.rows[x] = row_optimize(chain.rows[x], q_up, Bound::upper).row;
        }
    }
    return W;
}

WitnessExtraction extract_witness_for(const ImpreciseChain& chain, const TargetSet& A,
                                      Quantity quantity, Bound bound,
                                      const ExtVector& exact_values,
                                      const std::vector<double>& lambda_schedule) {
    WitnessExtraction out;

    if (quantity == Quantity::prob && bound == Bound::upper) {
        if (lambda_schedule.empty())
            throw LambdaOutOfRangeError("lambda schedule must be non-empty");
        const TransitionMatrix base = build_lambda_base(chain, A);
        for (double lambda : lambda_schedule) {
            ImpreciseChain perturbed = lambda_chain(chain, base, lambda);
            HittingResult sol =
                detail::solve_exact_values(perturbed, A, Quantity::prob, Bound::upper, {});
            TransitionMatrix S = select_extremal_matrix(perturbed, sol.values, Bound::upper);
            PreciseSolution achieved = precise_hitting_prob(S, A);
            verify_against_precise(achieved.values, sol.values, "lambda witness");
            if (!matrix_in_chain(chain, S))
                throw WitnessVerificationError(
                    "lambda witness row left the original credal set");
            LambdaWitness w;
            w.lambda = lambda;
            w.matrix = std::move(S);
            w.achieved.reserve(static_cast<std::size_t>(chain.size()));
            for (const ExtValue& v : sol.values) w.achieved.push_back(v.finite());
            out.schedule_trace.push_back(std::move(w));
        }
        out.witness = out.schedule_trace.back();
        return out;
    }

    TransitionMatrix M;
    if (quantity == Quantity::time && bound == Bound::upper) {
        M = upper_time_witness_matrix(chain, A, exact_values);
    } else {
        M = select_extremal_matrix(chain, exact_values, bound);
    }
    if (!matrix_in_chain(chain, M))
        throw WitnessVerificationError("witness row left the credal set");
    PreciseSolution achieved = quantity == Quantity::time ? precise_hitting_time(M, A)
                                                          : precise_hitting_prob(M, A);
    verify_against_precise(achieved.values, exact_values,
                           std::string(to_string(bound)) + " " + to_string(quantity) +
                               " witness");
    out.witness = std::move(M);
    return out;
}

WitnessExtraction extract_witness(const ImpreciseChain& chain, const TargetSet& A,
                                  Quantity quantity, Bound bound,
                                  const std::vector<double>& lambda_schedule) {
    HittingResult res = detail::solve_exact_values(chain, A, quantity, bound, {});
    return extract_witness_for(chain, A, quantity, bound, res.values, lambda_schedule);
}

}  // namespace imc
