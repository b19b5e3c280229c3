#include "imc/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imc/classify.hpp"
#include "imc/errors.hpp"
#include "imc/operators.hpp"
#include "imc/witness.hpp"

namespace imc {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iter: return "max_iter";
        case Termination::exact_classified: return "exact_classified";
    }
    return "unknown";
}

namespace {

double default_tol(Quantity quantity) {
    return quantity == Quantity::time ? 1e-10 : 1e-12;
}

ExtVector initial_iterate(const TargetSet& A, int k, Quantity quantity) {
    ExtVector v(static_cast<std::size_t>(k), ExtValue(0.0));
    for (int x = 0; x < k; ++x) {
        const bool in_a = A.contains(x);
        if (quantity == Quantity::time)
            v[x] = ExtValue(in_a ? 0.0 : 1.0);
        else
            v[x] = ExtValue(in_a ? 1.0 : 0.0);
    }
    return v;
}

ExtVector recursion_step(const ImpreciseChain& chain, const TargetSet& A, Quantity quantity,
                         Bound bound, const ExtVector& v) {
    ExtVector w = transition_apply(chain, v, bound);
    ExtVector out(v.size());
    for (int x = 0; x < chain.size(); ++x) {
        if (A.contains(x))
            out[x] = ExtValue(quantity == Quantity::time ? 0.0 : 1.0);
        else
            out[x] = quantity == Quantity::time ? ExtValue(1.0) + w[x] : w[x];
    }
    return out;
}

double masked_max_diff(const ExtVector& a, const ExtVector& b, const std::vector<char>& mask) {
    double m = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (!mask[x]) continue;
        if (a[x].is_infinite() || b[x].is_infinite()) continue;
        m = std::max(m, std::abs(a[x].finite() - b[x].finite()));
    }
    return m;
}

HittingResult iterate_core(const ImpreciseChain& chain, const TargetSet& A, Quantity quantity,
                           Bound bound, const IterateOptions& opts) {
    const int k = chain.size();
    const double tol = opts.tol > 0.0 ? opts.tol : default_tol(quantity);

    HittingResult res;
    res.quantity = quantity;
    res.bound = bound;

    std::vector<int> inf_states;
    if (quantity == Quantity::time && !A.empty())
        inf_states = infinite_states_hitting_time(chain, A, bound);
    std::vector<char> finite_mask(static_cast<std::size_t>(k), 1);
    for (int x : inf_states) finite_mask[x] = 0;

    ExtVector pure = initial_iterate(A, k, quantity);

    // Degenerate targets and fully classified chains need no iteration.
    int open_states = 0;
    for (int x = 0; x < k; ++x)
        if (!A.contains(x) && finite_mask[x]) ++open_states;
    const bool degenerate = A.empty() || static_cast<int>(A.members().size()) == k;
    if (degenerate || open_states == 0) {
        if (quantity == Quantity::time) {
            // Every state outside A is classified infinite here.
            res.values.assign(static_cast<std::size_t>(k), ExtValue(0.0));
            for (int x = 0; x < k; ++x)
                if (!A.contains(x)) res.values[x] = ExtValue::infinity();
        } else {
            res.values = initial_iterate(A, k, quantity);
        }
        res.trace.snapshots.push_back({0, pure, 0.0, 0.0});
        res.trace.termination = Termination::exact_classified;
        res.residual = fixed_point_residual(chain, A, res.values, quantity, bound).max_residual;
        return res;
    }

    const bool two_streams = !inf_states.empty();
    ExtVector pinned = pure;
    for (int x : inf_states) pinned[x] = ExtValue::infinity();

    auto record = [&](long n, const ExtVector& values, double delta) {
        TraceSnapshot snap;
        snap.iteration = n;
        snap.max_delta = delta;
        if (static_cast<std::size_t>(n) <= opts.trace_value_cap) snap.values = values;
        res.trace.snapshots.push_back(std::move(snap));
    };

    record(0, pure, 0.0);
    bool converged = false;
    for (long n = 1; n <= opts.max_iter; ++n) {
        ExtVector pure_next = recursion_step(chain, A, quantity, bound, pure);
        const double pure_delta = masked_max_diff(pure_next, pure, finite_mask);
        res.trace.snapshots.back().residual = pure_delta;  // defect of iterate n-1
        record(n, pure_next, pure_delta);

        double pinned_delta = pure_delta;
        if (two_streams) {
            ExtVector pinned_next = recursion_step(chain, A, quantity, bound, pinned);
            pinned_delta = masked_max_diff(pinned_next, pinned, finite_mask);
            pinned = std::move(pinned_next);
        } else {
            pinned = pure_next;
        }
        pure = std::move(pure_next);

        if (pure_delta < tol && pinned_delta < tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NotConvergedError("hit max_iter=" + std::to_string(opts.max_iter) +
                                " before finite states met tol=" + std::to_string(tol));

    // Defect of the final recorded iterate.
    ExtVector one_more = recursion_step(chain, A, quantity, bound, pure);
    res.trace.snapshots.back().residual = masked_max_diff(one_more, pure, finite_mask);
    if (res.trace.snapshots.back().values.empty()) res.trace.snapshots.back().values = pure;

    res.trace.termination = Termination::converged;
    res.values = pinned;
    res.residual = fixed_point_residual(chain, A, res.values, quantity, bound).max_residual;
    return res;
}

}  // namespace

std::vector<int> infinite_states_hitting_time(const ImpreciseChain& chain, const TargetSet& A,
                                              Bound bound) {
    if (A.empty()) {
        std::vector<int> all(static_cast<std::size_t>(chain.size()));
        for (int x = 0; x < chain.size(); ++x) all[x] = x;
        return all;
    }
    if (bound == Bound::upper) {
        ClassificationReport report = classify_states(chain, A);
        std::vector<int> out = report.B;
        out.insert(out.end(), report.U.begin(), report.U.end());
        std::sort(out.begin(), out.end());
        return out;
    }
    std::vector<char> region(static_cast<std::size_t>(chain.size()), 0);
    for (int x : almost_sure_reach_region(chain, A)) region[x] = 1;
    std::vector<int> out;
    for (int x = 0; x < chain.size(); ++x)
        if (!region[x]) out.push_back(x);
    return out;
}

HittingResult iterate_hitting_time(const ImpreciseChain& chain, const TargetSet& A, Bound bound,
                                   const IterateOptions& opts) {
    return iterate_core(chain, A, Quantity::time, bound, opts);
}

HittingResult iterate_hitting_prob(const ImpreciseChain& chain, const TargetSet& A, Bound bound,
                                   const IterateOptions& opts) {
    return iterate_core(chain, A, Quantity::prob, bound, opts);
}

ExtVector truncated_values(const ImpreciseChain& chain, const TargetSet& A, Quantity quantity,
                           Bound bound, int n) {
    if (n < 0) throw Error("truncated_values: n must be non-negative");
    ExtVector v = initial_iterate(A, chain.size(), quantity);
    for (int i = 0; i < n; ++i) v = recursion_step(chain, A, quantity, bound, v);
    return v;
}

ResidualReport fixed_point_residual(const ImpreciseChain& chain, const TargetSet& A,
                                    const ExtVector& g, Quantity quantity, Bound bound) {
    if (static_cast<int>(g.size()) != chain.size())
        throw DimensionMismatchError("fixed_point_residual: dimension mismatch");
    for (const ExtValue& v : g)
        if (v.is_finite() && v.finite() < 0.0)
            throw Error("fixed_point_residual: g must be non-negative");
    ExtVector rhs = recursion_step(chain, A, quantity, bound, g);
    ResidualReport report;
    for (int x = 0; x < chain.size(); ++x) {
        if (g[x].is_infinite() != rhs[x].is_infinite())
            report.infinite_consistent = false;
        else if (g[x].is_finite())
            report.max_residual =
                std::max(report.max_residual, std::abs(g[x].finite() - rhs[x].finite()));
    }
    return report;
}

namespace {

constexpr int kMaxPolicySteps = 64;
constexpr double kPolicyValueTol = 1e-12;
constexpr double kExactResidualTol = 1e-10;

bool restricted_rows_equal(const TransitionMatrix& a, const TransitionMatrix& b,
                           const std::vector<int>& states) {
    for (int x : states)
        if (a.rows[x].mass != b.rows[x].mass) return false;
    return true;
}

/// Policy iteration for hitting times on the finite region: alternate
/// extremal selection against the current values with the exact block solve
/// (I - M_RR) h_R = 1. Rows selected on the region never place mass on
/// infinite states (their inner product would be infinite), so the block
/// system accounts for all mass outside A.
ExtVector policy_iterate_time(const ImpreciseChain& chain, const TargetSet& A, Bound bound,
                              const std::vector<char>& finite_mask, const ExtVector& start) {
    std::vector<int> region;
    for (int x = 0; x < chain.size(); ++x)
        if (finite_mask[x] && !A.contains(x)) region.push_back(x);

    ExtVector v = start;
    std::optional<TransitionMatrix> previous;
    for (int step = 0; step < kMaxPolicySteps; ++step) {
        TransitionMatrix M = select_extremal_matrix(chain, v, bound);
        std::vector<double> ones(region.size(), 1.0);
        std::vector<double> h = solve_hitting_block(M, region, ones);

        ExtVector next = v;
        for (std::size_t i = 0; i < region.size(); ++i)
            next[region[i]] = ExtValue(std::max(h[i], 0.0));

        const bool repeat = previous && restricted_rows_equal(*previous, M, region);
        const double move = masked_max_diff(next, v, finite_mask);
        v = std::move(next);
        if (repeat || move < kPolicyValueTol) return v;
        previous = std::move(M);
    }
    throw PolicyCycleError("hitting-time policy iteration did not settle");
}

/// Policy iteration for hitting probabilities with exact per-policy
/// evaluation by the precise solver (the minimal solution, which pins the
/// policy's own unreachable states). Acceptance requires a small defect
/// under the chain's fixed-point system. For the upper bound the supremum
/// need not be attained; failure to find an attaining matrix keeps the
/// iterate values.
std::optional<ExtVector> policy_iterate_prob(const ImpreciseChain& chain, const TargetSet& A,
                                             Bound bound, const ExtVector& start) {
    std::vector<char> all(static_cast<std::size_t>(chain.size()), 1);
    ExtVector v = start;
    std::optional<ExtVector> accepted;
    for (int step = 0; step < kMaxPolicySteps; ++step) {
        TransitionMatrix M = select_extremal_matrix(chain, v, bound);
        PreciseSolution sol = precise_hitting_prob(M, A);
        ResidualReport rr = fixed_point_residual(chain, A, sol.values, Quantity::prob, bound);
        const double move = masked_max_diff(sol.values, v, all);
        if (rr.max_residual <= kExactResidualTol) {
            // For the upper bound, reject policies that fall below the
            // monotone iterate; they cannot attain the supremum.
            bool dominates = true;
            if (bound == Bound::upper) {
                for (int x = 0; x < chain.size(); ++x)
                    if (sol.values[x].finite() < start[x].finite() - 1e-8) dominates = false;
            }
            if (dominates) accepted = sol.values;
        }
        if (move < kPolicyValueTol) break;
        v = sol.values;
    }
    return accepted;
}

}  // namespace

namespace detail {

HittingResult solve_exact_values(const ImpreciseChain& chain, const TargetSet& A,
                                 Quantity quantity, Bound bound, const IterateOptions& opts) {
    HittingResult res = quantity == Quantity::time ? iterate_hitting_time(chain, A, bound, opts)
                                                   : iterate_hitting_prob(chain, A, bound, opts);
    const int k = chain.size();
    const bool degenerate = A.empty() || static_cast<int>(A.members().size()) == k;
    if (degenerate) return res;

    if (quantity == Quantity::time) {
        std::vector<char> finite_mask(static_cast<std::size_t>(k), 1);
        for (int x = 0; x < k; ++x)
            if (res.values[x].is_infinite()) finite_mask[x] = 0;
        res.values = policy_iterate_time(chain, A, bound, finite_mask, res.values);
    } else {
        std::optional<ExtVector> polished = policy_iterate_prob(chain, A, bound, res.values);
        if (polished) {
            res.values = *polished;
        } else if (bound == Bound::lower) {
            // Attainment is guaranteed for the lower bound, so the polish
            // must succeed on valid inputs.
            throw PolicyCycleError("lower hitting-probability policy iteration did not settle");
        }
    }

    ResidualReport rr = fixed_point_residual(chain, A, res.values, quantity, bound);
    if (!rr.infinite_consistent)
        throw PolicyCycleError("exact solve produced an inconsistent infinite pattern");
    res.residual = rr.max_residual;
    if (res.residual > kExactResidualTol && !(quantity == Quantity::prob && bound == Bound::upper))
        throw PolicyCycleError("exact solve residual " + std::to_string(res.residual) +
                               " above threshold");
    return res;
}

}  // namespace detail

HittingResult solve_exact(const ImpreciseChain& chain, const TargetSet& A, Quantity quantity,
                          Bound bound, const IterateOptions& opts) {
    HittingResult res = detail::solve_exact_values(chain, A, quantity, bound, opts);
    WitnessExtraction extraction = extract_witness_for(chain, A, quantity, bound, res.values);
    res.witness = std::move(extraction.witness);
    return res;
}

}  // namespace imc
