#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imc/model.hpp"
#include "imc/precise.hpp"

namespace imc {

/// Default cap on the number of enumerated vertex chains.
inline constexpr std::size_t kChainEnumCap = 100000;

/// Lexicographic enumeration of all per-row vertex combinations; every
/// yielded matrix belongs to the chain's product credal set.
class VertexChainEnumerator {
public:
    explicit VertexChainEnumerator(const ImpreciseChain& chain,
                                   std::size_t cap = kChainEnumCap);

    std::size_t count() const { return count_; }
    /// Writes the next matrix and advances; returns false when exhausted.
    bool next(TransitionMatrix& out);
    void reset();

private:
    std::vector<std::vector<ProbabilityRow>> vertices_;
    std::vector<std::size_t> cursor_;
    std::size_t count_ = 0;
    bool done_ = false;
};

std::vector<TransitionMatrix> enumerate_vertex_chains(const ImpreciseChain& chain,
                                                      std::size_t cap = kChainEnumCap);

struct EnvelopeAgreement {
    bool time_lower = false;       // brute min time == lower time, inf pattern exact
    bool time_upper = false;       // brute max time == upper time, inf pattern exact
    bool prob_lower = false;       // brute min prob == lower prob
    bool prob_upper_one_sided = false;  // brute max prob <= upper prob + tol
    double worst_gap = 0.0;

    bool all() const { return time_lower && time_upper && prob_lower && prob_upper_one_sided; }
};

/// Brute-force envelopes over every vertex chain, with the library values
/// they are compared against. Witness slots hold the lexicographically
/// first chain attaining the whole extremal vector, when one does.
struct EnvelopeReport {
    std::size_t chains = 0;
    ExtVector time_min, time_max;
    std::vector<double> prob_min, prob_max;
    std::optional<TransitionMatrix> time_min_witness, time_max_witness;
    std::optional<TransitionMatrix> prob_min_witness, prob_max_witness;
    ExtVector lib_time_lower, lib_time_upper;
    std::vector<double> lib_prob_lower, lib_prob_upper;
    EnvelopeAgreement agreement;
};

/// Runs the precise solver on every vertex chain and reduces elementwise in
/// enumeration order. Checks min-time == lower time, max-time == upper time,
/// min-prob == lower prob (all within tol, infinite patterns exact) and
/// max-prob <= upper prob + tol (one-sided: the supremum need not be
/// attained by any homogeneous chain).
EnvelopeReport brute_force_envelope(const ImpreciseChain& chain, const TargetSet& A,
                                    std::size_t cap = kChainEnumCap, double tol = 1e-8);

/// Independent check of the truncated values: explicit backward induction
/// over the depth-n history tree, choosing an optimizing vertex row at
/// every history node (the epistemic-irrelevance optimum). Must equal the
/// n-th iterate of the Markov recursion.
std::vector<double> backward_induction_truncated(const ImpreciseChain& chain, const TargetSet& A,
                                                 int n, Bound bound, Quantity quantity,
                                                 std::size_t budget = std::size_t{1} << 24);

struct MonteCarloStateStats {
    double time_mean = 0.0, time_stderr = 0.0;
    double prob_mean = 0.0, prob_stderr = 0.0;
};

struct MonteCarloReport {
    int horizon = 0;
    long samples = 0;
    std::uint64_t seed = 0;
    std::vector<MonteCarloStateStats> per_state;
    std::vector<double> time_lower, time_upper, prob_lower, prob_upper;  // recursion values
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Samples paths of a randomly drawn history-dependent compatible process
/// (at each step, a fresh random convex mixture of vertex rows) and checks
/// that the empirical truncated means fall inside the recursion envelope
/// padded by three standard errors. Deterministic for a fixed seed; each
/// sample has its own substream, so reduction order is by sample index.
MonteCarloReport monte_carlo_envelope_check(const ImpreciseChain& chain, const TargetSet& A,
                                            int horizon, long samples, std::uint64_t seed);

/// Seeded random chain: per state, 1..max_vertices vertex rows drawn
/// uniformly on the simplex via exponential normalization.
ImpreciseChain random_vertex_chain(std::uint64_t seed, int num_states, int max_vertices = 3);

}  // namespace imc
