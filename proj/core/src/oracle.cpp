#include "imc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "imc/errors.hpp"
#include "imc/iteration.hpp"
#include "imc/operators.hpp"
#include "imc/parallel.hpp"

namespace imc {

namespace {

bool ext_close(ExtValue a, ExtValue b, double tol) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return std::abs(a.finite() - b.finite()) <= tol;
}

bool ext_vec_close(const ExtVector& a, const ExtVector& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!ext_close(a[i], b[i], tol)) return false;
    return true;
}

double finite_gap(const ExtVector& a, const ExtVector& b) {
    double g = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_infinite() != b[i].is_infinite()) return std::numeric_limits<double>::max();
        if (a[i].is_finite()) g = std::max(g, std::abs(a[i].finite() - b[i].finite()));
    }
    return g;
}

// Portable uniform in [0,1) and exponential draws from a mt19937_64 stream.
double draw_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
double draw_exponential(std::mt19937_64& rng) {
    return -std::log1p(-draw_uniform(rng));
}

}  // namespace

VertexChainEnumerator::VertexChainEnumerator(const ImpreciseChain& chain, std::size_t cap) {
    vertices_.reserve(static_cast<std::size_t>(chain.size()));
    count_ = 1;
    for (const auto& row : chain.rows) {
        vertices_.push_back(row_vertices(row, cap));
        const std::size_t nv = vertices_.back().size();
        if (count_ > cap / nv)
            throw VertexExplosionError("vertex chain count exceeds cap " + std::to_string(cap));
        count_ *= nv;
    }
    cursor_.assign(vertices_.size(), 0);
}

bool VertexChainEnumerator::next(TransitionMatrix& out) {
    if (done_) return false;
    out.rows.resize(vertices_.size());
    for (std::size_t x = 0; x < vertices_.size(); ++x) out.rows[x] = vertices_[x][cursor_[x]];
    // lexicographic advance, last row fastest
    for (std::size_t x = vertices_.size(); x-- > 0;) {
        if (++cursor_[x] < vertices_[x].size()) return true;
        cursor_[x] = 0;
    }
    done_ = true;
    return true;
}

void VertexChainEnumerator::reset() {
    std::fill(cursor_.begin(), cursor_.end(), 0);
    done_ = false;
}

std::vector<TransitionMatrix> enumerate_vertex_chains(const ImpreciseChain& chain,
                                                      std::size_t cap) {
    VertexChainEnumerator en(chain, cap);
    std::vector<TransitionMatrix> out;
    out.reserve(en.count());
    TransitionMatrix T;
    while (en.next(T)) out.push_back(T);
    return out;
}

EnvelopeReport brute_force_envelope(const ImpreciseChain& chain, const TargetSet& A,
                                    std::size_t cap, double tol) {
    const int k = chain.size();
    EnvelopeReport report;

    std::vector<TransitionMatrix> chains = enumerate_vertex_chains(chain, cap);
    report.chains = chains.size();

    std::vector<ExtVector> times(chains.size());
    std::vector<ExtVector> probs(chains.size());
    detail::parallel_for(static_cast<int>(chains.size()), [&](int i) {
        times[i] = precise_hitting_time(chains[i], A).values;
        probs[i] = precise_hitting_prob(chains[i], A).values;
    }, 4);

    report.time_min = times[0];
    report.time_max = times[0];
    report.prob_min.assign(static_cast<std::size_t>(k), 0.0);
    report.prob_max.assign(static_cast<std::size_t>(k), 0.0);
    for (int x = 0; x < k; ++x)
        report.prob_min[x] = report.prob_max[x] = probs[0][x].finite();
    for (std::size_t i = 1; i < chains.size(); ++i) {
        for (int x = 0; x < k; ++x) {
            report.time_min[x] = ext_min(report.time_min[x], times[i][x]);
            report.time_max[x] = ext_max(report.time_max[x], times[i][x]);
            report.prob_min[x] = std::min(report.prob_min[x], probs[i][x].finite());
            report.prob_max[x] = std::max(report.prob_max[x], probs[i][x].finite());
        }
    }

    auto first_attaining = [&](const std::vector<ExtVector>& values, const ExtVector& extremal)
        -> std::optional<TransitionMatrix> {
        for (std::size_t i = 0; i < chains.size(); ++i)
            if (ext_vec_close(values[i], extremal, 1e-9)) return chains[i];
        return std::nullopt;
    };
    report.time_min_witness = first_attaining(times, report.time_min);
    report.time_max_witness = first_attaining(times, report.time_max);
    report.prob_min_witness = first_attaining(probs, to_ext(report.prob_min));
    report.prob_max_witness = first_attaining(probs, to_ext(report.prob_max));

    report.lib_time_lower =
        detail::solve_exact_values(chain, A, Quantity::time, Bound::lower, {}).values;
    report.lib_time_upper =
        detail::solve_exact_values(chain, A, Quantity::time, Bound::upper, {}).values;
    ExtVector pl = detail::solve_exact_values(chain, A, Quantity::prob, Bound::lower, {}).values;
    ExtVector pu = detail::solve_exact_values(chain, A, Quantity::prob, Bound::upper, {}).values;
    for (const ExtValue& v : pl) report.lib_prob_lower.push_back(v.finite());
    for (const ExtValue& v : pu) report.lib_prob_upper.push_back(v.finite());

    auto& ag = report.agreement;
    ag.time_lower = ext_vec_close(report.time_min, report.lib_time_lower, tol);
    ag.time_upper = ext_vec_close(report.time_max, report.lib_time_upper, tol);
    ag.prob_lower = ext_vec_close(to_ext(report.prob_min), to_ext(report.lib_prob_lower), tol);
    ag.prob_upper_one_sided = true;
    for (int x = 0; x < k; ++x) {
        if (report.prob_max[x] > report.lib_prob_upper[x] + tol) ag.prob_upper_one_sided = false;
        ag.worst_gap = std::max(
            ag.worst_gap, std::max(0.0, report.prob_max[x] - report.lib_prob_upper[x]));
    }
    double g = finite_gap(report.time_min, report.lib_time_lower);
    if (ag.time_lower) ag.worst_gap = std::max(ag.worst_gap, g);
    g = finite_gap(report.time_max, report.lib_time_upper);
    if (ag.time_upper) ag.worst_gap = std::max(ag.worst_gap, g);
    for (int x = 0; x < k; ++x)
        ag.worst_gap =
            std::max(ag.worst_gap, std::abs(report.prob_min[x] - report.lib_prob_lower[x]));
    return report;
}

std::vector<double> backward_induction_truncated(const ImpreciseChain& chain, const TargetSet& A,
                                                 int n, Bound bound, Quantity quantity,
                                                 std::size_t budget) {
    const int k = chain.size();
    if (n < 0) throw Error("backward_induction_truncated: n must be non-negative");
    if (n > 20) throw TreeTooLargeError("history tree depth capped at 20");
    double nodes = 1.0;
    for (int i = 0; i <= n; ++i) {
        nodes *= k;
        if (nodes > static_cast<double>(budget))
            throw TreeTooLargeError("history tree of k^(n+1) nodes exceeds budget");
    }

    std::vector<std::vector<ProbabilityRow>> verts;
    verts.reserve(static_cast<std::size_t>(k));
    for (const auto& row : chain.rows) verts.push_back(row_vertices(row));

    // Explicit recursion over histories: the optimizing vertex row is chosen
    // at every history node, not merely per state. The history vector is
    // threaded through to keep the implementation honestly history-indexed.
    std::vector<int> history;
    auto rec = [&](auto&& self, int steps_left) -> double {
        const int x = history.back();
        if (quantity == Quantity::time) {
            if (A.contains(x)) return 0.0;
            if (steps_left == 0) return 1.0;
        } else {
            if (A.contains(x)) return 1.0;
            if (steps_left == 0) return 0.0;
        }
        std::vector<double> child(static_cast<std::size_t>(k));
        for (int y = 0; y < k; ++y) {
            history.push_back(y);
            child[y] = self(self, steps_left - 1);
            history.pop_back();
        }
        double best = 0.0;
        bool first = true;
        for (const auto& v : verts[x]) {
            double dot = 0.0;
            for (int y = 0; y < k; ++y) dot += v.mass[y] * child[y];
            if (first || (bound == Bound::lower ? dot < best : dot > best)) {
                best = dot;
                first = false;
            }
        }
        return quantity == Quantity::time ? 1.0 + best : best;
    };

    std::vector<double> out(static_cast<std::size_t>(k));
    for (int x = 0; x < k; ++x) {
        history.assign(1, x);
        out[x] = rec(rec, n);
    }
    return out;
}

MonteCarloReport monte_carlo_envelope_check(const ImpreciseChain& chain, const TargetSet& A,
                                            int horizon, long samples, std::uint64_t seed) {
    if (horizon < 1) throw Error("monte_carlo_envelope_check: horizon must be >= 1");
    if (samples < 1) throw Error("monte_carlo_envelope_check: samples must be >= 1");
    const int k = chain.size();

    MonteCarloReport report;
    report.horizon = horizon;
    report.samples = samples;
    report.seed = seed;

    std::vector<std::vector<ProbabilityRow>> verts;
    verts.reserve(static_cast<std::size_t>(k));
    for (const auto& row : chain.rows) verts.push_back(row_vertices(row));

    auto envelope = [&](Quantity q, Bound b) {
        ExtVector v = truncated_values(chain, A, q, b, horizon);
        std::vector<double> out(static_cast<std::size_t>(k));
        for (int x = 0; x < k; ++x) out[x] = v[x].finite();
        return out;
    };
    report.time_lower = envelope(Quantity::time, Bound::lower);
    report.time_upper = envelope(Quantity::time, Bound::upper);
    report.prob_lower = envelope(Quantity::prob, Bound::lower);
    report.prob_upper = envelope(Quantity::prob, Bound::upper);

    report.per_state.resize(static_cast<std::size_t>(k));
    detail::parallel_for(k, [&](int start) {
        double time_sum = 0.0, time_sq = 0.0, prob_sum = 0.0, prob_sq = 0.0;
        std::vector<double> weights;
        for (long s = 0; s < samples; ++s) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(s),
                              static_cast<std::uint32_t>(s >> 32)};
            std::mt19937_64 rng(seq);
            int state = start;
            int hit = A.contains(state) ? 0 : -1;
            for (int t = 1; t <= horizon && hit < 0; ++t) {
                const auto& rows = verts[state];
                weights.assign(rows.size(), 0.0);
                double total = 0.0;
                for (double& w : weights) {
                    w = draw_exponential(rng);
                    total += w;
                }
                // next-state distribution of the random mixture row
                const double u = draw_uniform(rng);
                double acc = 0.0;
                int next = k - 1;
                for (int y = 0; y < k; ++y) {
                    double mass = 0.0;
                    for (std::size_t i = 0; i < rows.size(); ++i)
                        mass += (weights[i] / total) * rows[i].mass[y];
                    acc += mass;
                    if (u < acc) {
                        next = y;
                        break;
                    }
                }
                state = next;
                if (A.contains(state)) hit = t;
            }
            const double h = hit >= 0 ? static_cast<double>(hit)
                                      : static_cast<double>(horizon + 1);
            const double g = hit >= 0 ? 1.0 : 0.0;
            time_sum += h;
            time_sq += h * h;
            prob_sum += g;
            prob_sq += g * g;
        }
        const double n = static_cast<double>(samples);
        MonteCarloStateStats st;
        st.time_mean = time_sum / n;
        st.prob_mean = prob_sum / n;
        const double time_var = std::max(0.0, time_sq / n - st.time_mean * st.time_mean);
        const double prob_var = std::max(0.0, prob_sq / n - st.prob_mean * st.prob_mean);
        st.time_stderr = std::sqrt(time_var / n);
        st.prob_stderr = std::sqrt(prob_var / n);
        report.per_state[start] = st;
    }, 1);

    for (int x = 0; x < k; ++x) {
        const auto& st = report.per_state[x];
        auto flag = [&](const char* what, double mean, double lo, double hi, double se) {
            if (mean < lo - 3.0 * se || mean > hi + 3.0 * se)
                report.violations.push_back(std::string(what) + " at state " +
                                            chain.states.labels[x] + ": mean " +
                                            std::to_string(mean) + " outside [" +
                                            std::to_string(lo) + ", " + std::to_string(hi) +
                                            "] +- 3se");
        };
        flag("truncated hitting time", st.time_mean, report.time_lower[x], report.time_upper[x],
             st.time_stderr);
        flag("truncated hitting probability", st.prob_mean, report.prob_lower[x],
             report.prob_upper[x], st.prob_stderr);
    }
    return report;
}

ImpreciseChain random_vertex_chain(std::uint64_t seed, int num_states, int max_vertices) {
    if (num_states < 1) throw Error("random_vertex_chain: need at least one state");
    if (max_vertices < 1) throw Error("random_vertex_chain: need at least one vertex per row");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(num_states)};
    std::mt19937_64 rng(seq);

    ImpreciseChain chain;
    for (int x = 0; x < num_states; ++x)
        chain.states.labels.push_back("s" + std::to_string(x));
    chain.rows.reserve(static_cast<std::size_t>(num_states));
    for (int x = 0; x < num_states; ++x) {
        const int nv = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_vertices));
        VertexListRow row;
        for (int i = 0; i < nv; ++i) {
            ProbabilityRow v;
            v.mass.resize(static_cast<std::size_t>(num_states));
            double total = 0.0;
            for (double& m : v.mass) {
                m = draw_exponential(rng);
                total += m;
            }
            for (double& m : v.mass) m /= total;
            row.vertices.push_back(std::move(v));
        }
        chain.rows.push_back(std::move(row));
    }
    return chain;
}

}  // namespace imc
