#include "imc/operators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "imc/errors.hpp"
#include "imc/parallel.hpp"

namespace imc {

namespace {

// Structural strict-positivity guard for quantities derived by summation.
constexpr double kStructEps = 1e-12;
// Work budget for interval vertex enumeration (DFS node visits).
constexpr std::size_t kVertexWorkBudget = std::size_t{1} << 22;

double sum(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

// Sorted greedy allocation: assign every coordinate its lower bound, then
// push the remaining mass onto coordinates in objective order up to their
// upper bounds. Exact for box-constrained simplex linear programs.
ProbabilityRow interval_greedy(const IntervalBoundsRow& iv, const ExtVector& f, Bound bound) {
    const int k = static_cast<int>(iv.lower.size());
    if (static_cast<int>(f.size()) != k)
        throw DimensionMismatchError("interval row has " + std::to_string(k) +
                                     " states, f has " + std::to_string(f.size()));
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    // Lower bound: cheapest coordinates first, infinite coordinates last.
    // Upper bound: the mirror image. Stable sort keeps ties in state order.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const bool ia = f[a].is_infinite(), ib = f[b].is_infinite();
        if (bound == Bound::lower) {
            if (ia != ib) return ib;
            if (ia) return false;
            return f[a].finite() < f[b].finite();
        }
        if (ia != ib) return ia;
        if (ia) return false;
        return f[a].finite() > f[b].finite();
    });

    ProbabilityRow q{iv.lower};
    double rest = 1.0 - sum(iv.lower);
    if (rest < 0.0) rest = 0.0;
    for (int y : order) {
        if (rest <= 0.0) break;
        const double add = std::min(iv.upper[y] - iv.lower[y], rest);
        if (add > 0.0) {
            q.mass[y] += add;
            rest -= add;
        }
    }
    return q;
}

RowOptimum vertex_optimize(const VertexListRow& vl, const ExtVector& f, Bound bound) {
    std::size_t best = 0;
    ExtValue best_value = ext_dot(vl.vertices[0].mass, f);
    for (std::size_t i = 1; i < vl.vertices.size(); ++i) {
        ExtValue v = ext_dot(vl.vertices[i].mass, f);
        const bool better = bound == Bound::lower ? v < best_value : v > best_value;
        if (better) {
            best = i;
            best_value = v;
        }
    }
    return {vl.vertices[best], best_value};
}

bool rows_close(const ProbabilityRow& a, const ProbabilityRow& b, double tol) {
    for (int y = 0; y < a.size(); ++y)
        if (std::abs(a.mass[y] - b.mass[y]) > tol) return false;
    return true;
}

void dedup_rows(std::vector<ProbabilityRow>& rows, double tol) {
    std::sort(rows.begin(), rows.end(), [](const ProbabilityRow& a, const ProbabilityRow& b) {
        return a.mass < b.mass;
    });
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [tol](const ProbabilityRow& a, const ProbabilityRow& b) {
                               return rows_close(a, b, tol);
                           }),
               rows.end());
}

// Vertices of {l <= q <= u, sum q = 1}: fix every coordinate but one at a
// bound and let the free coordinate absorb the slack. DFS with partial-sum
// pruning; throws when the output or the visit budget explodes.
void interval_vertices(const IntervalBoundsRow& iv, std::size_t cap,
                       std::vector<ProbabilityRow>& out) {
    const int k = static_cast<int>(iv.lower.size());
    // suffix sums over coordinates i..k-1, used for pruning
    std::vector<double> suffix_lo(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<double> suffix_hi(static_cast<std::size_t>(k) + 1, 0.0);
    for (int i = k - 1; i >= 0; --i) {
        suffix_lo[i] = suffix_lo[i + 1] + iv.lower[i];
        suffix_hi[i] = suffix_hi[i + 1] + iv.upper[i];
    }

    std::vector<double> q(static_cast<std::size_t>(k), 0.0);
    std::size_t visits = 0;

    auto emit = [&](int free_idx) {
        double rest = 1.0;
        for (int i = 0; i < k; ++i)
            if (i != free_idx) rest -= q[i];
        if (rest < iv.lower[free_idx] - kStructEps || rest > iv.upper[free_idx] + kStructEps)
            return;
        q[free_idx] = std::clamp(rest, iv.lower[free_idx], iv.upper[free_idx]);
        out.push_back(ProbabilityRow{q});
        if (out.size() > cap + cap / 2 + 8)
            throw VertexExplosionError("interval row vertex enumeration exceeded cap");
    };

    for (int free_idx = 0; free_idx < k; ++free_idx) {
        std::fill(q.begin(), q.end(), 0.0);
        const double free_lo = iv.lower[free_idx], free_hi = iv.upper[free_idx];
        // Pin each non-free coordinate to one of its bounds; lo_rest/hi_rest
        // track the reachable range of the remaining coordinates.
        auto dfs = [&](auto&& self, int i, double acc) -> void {
            if (++visits > kVertexWorkBudget)
                throw VertexExplosionError(
                    "interval row vertex enumeration exceeded work budget");
            if (i == k) {
                emit(free_idx);
                return;
            }
            if (i == free_idx) {
                self(self, i + 1, acc);
                return;
            }
            const double lo_rest = suffix_lo[i + 1] - (free_idx > i ? free_lo : 0.0);
            const double hi_rest = suffix_hi[i + 1] - (free_idx > i ? free_hi : 0.0);
            for (double pin : {iv.lower[i], iv.upper[i]}) {
                const double next = acc + pin;
                if (next + lo_rest + free_lo <= 1.0 + kStructEps &&
                    next + hi_rest + free_hi >= 1.0 - kStructEps) {
                    q[i] = pin;
                    self(self, i + 1, next);
                }
                if (iv.upper[i] == iv.lower[i]) break;  // degenerate coordinate, one branch
            }
        };
        dfs(dfs, 0, 0.0);
    }
}

// Lawson-Hanson non-negative least squares: min ||A x - b|| s.t. x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const int m = static_cast<int>(A.cols());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    std::vector<char> passive(static_cast<std::size_t>(m), 0);
    const double tol = 1e-12 * (1.0 + b.lpNorm<Eigen::Infinity>());

    auto solve_passive = [&](const std::vector<char>& mask) {
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            if (mask[i]) idx.push_back(i);
        Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(static_cast<Eigen::Index>(c)) = A.col(idx[c]);
        Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
        for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = zp[static_cast<Eigen::Index>(c)];
        return z;
    };

    for (int outer = 0; outer < 4 * m + 16; ++outer) {
        Eigen::VectorXd w = A.transpose() * (b - A * x);
        int j = -1;
        double wmax = tol;
        for (int i = 0; i < m; ++i) {
            if (!passive[i] && w[i] > wmax) {
                wmax = w[i];
                j = i;
            }
        }
        if (j < 0) break;
        passive[j] = 1;
        for (int inner = 0; inner < 4 * m + 16; ++inner) {
            Eigen::VectorXd z = solve_passive(passive);
            bool all_positive = true;
            for (int i = 0; i < m; ++i)
                if (passive[i] && z[i] <= 0.0) all_positive = false;
            if (all_positive) {
                x = z;
                break;
            }
            double alpha = 1.0;
            for (int i = 0; i < m; ++i) {
                if (passive[i] && z[i] <= 0.0 && x[i] - z[i] > 0.0)
                    alpha = std::min(alpha, x[i] / (x[i] - z[i]));
            }
            x += alpha * (z - x);
            for (int i = 0; i < m; ++i) {
                if (passive[i] && x[i] <= tol) {
                    x[i] = 0.0;
                    passive[i] = 0;
                }
            }
        }
    }
    return x;
}

}  // namespace

RowOptimum row_optimize(const RowCredalSet& row, const ExtVector& f, Bound bound) {
    if (const auto* vl = std::get_if<VertexListRow>(&row)) {
        if (static_cast<int>(f.size()) != vl->vertices.front().size())
            throw DimensionMismatchError("row_optimize: f dimension mismatch");
        return vertex_optimize(*vl, f, bound);
    }
    const auto& iv = std::get<IntervalBoundsRow>(row);
    ProbabilityRow q = interval_greedy(iv, f, bound);
    ExtValue value = ext_dot(q.mass, f);
    return {std::move(q), value};
}

std::vector<ProbabilityRow> row_vertices(const RowCredalSet& row, std::size_t cap) {
    std::vector<ProbabilityRow> out;
    if (const auto* vl = std::get_if<VertexListRow>(&row)) {
        out = vl->vertices;
    } else {
        interval_vertices(std::get<IntervalBoundsRow>(row), cap, out);
    }
    dedup_rows(out, 1e-12);
    if (out.size() > cap)
        throw VertexExplosionError("row has " + std::to_string(out.size()) +
                                   " vertices, cap is " + std::to_string(cap));
    return out;
}

std::vector<int> row_support(const RowCredalSet& row) {
    std::vector<int> out;
    if (const auto* vl = std::get_if<VertexListRow>(&row)) {
        const int k = vl->vertices.front().size();
        std::vector<char> seen(static_cast<std::size_t>(k), 0);
        for (const auto& v : vl->vertices)
            for (int y = 0; y < k; ++y)
                if (v.mass[y] > 0.0) seen[y] = 1;
        for (int y = 0; y < k; ++y)
            if (seen[y]) out.push_back(y);
        return out;
    }
    const auto& iv = std::get<IntervalBoundsRow>(row);
    const int k = static_cast<int>(iv.lower.size());
    const double sum_lower = sum(iv.lower);
    for (int y = 0; y < k; ++y) {
        if (iv.upper[y] > 0.0 && sum_lower - iv.lower[y] < 1.0 - kStructEps) out.push_back(y);
    }
    return out;
}

bool row_exists_supported(const RowCredalSet& row, const std::vector<char>& allowed,
                          const std::vector<char>& positive) {
    if (const auto* vl = std::get_if<VertexListRow>(&row)) {
        for (const auto& v : vl->vertices) {
            bool inside = true, hits = false;
            for (int y = 0; y < v.size(); ++y) {
                if (v.mass[y] > 0.0) {
                    if (!allowed[y]) {
                        inside = false;
                        break;
                    }
                    if (positive[y]) hits = true;
                }
            }
            if (inside && hits) return true;
        }
        return false;
    }
    const auto& iv = std::get<IntervalBoundsRow>(row);
    const int k = static_cast<int>(iv.lower.size());
    double lower_outside = 0.0, lower_inside = 0.0, upper_inside = 0.0;
    for (int y = 0; y < k; ++y) {
        if (allowed[y]) {
            lower_inside += iv.lower[y];
            upper_inside += iv.upper[y];
        } else {
            lower_outside += iv.lower[y];
        }
    }
    if (lower_outside > kStructEps) return false;
    if (upper_inside < 1.0 - kIntervalFeasTol) return false;
    for (int y = 0; y < k; ++y) {
        if (!allowed[y] || !positive[y] || iv.upper[y] <= 0.0) continue;
        if (lower_inside - iv.lower[y] < 1.0 - kStructEps) return true;
    }
    return false;
}

bool row_contains(const RowCredalSet& row, const ProbabilityRow& candidate, double tol) {
    const int k = candidate.size();
    double csum = sum(candidate.mass);
    if (std::abs(csum - 1.0) > tol) return false;
    if (const auto* iv = std::get_if<IntervalBoundsRow>(&row)) {
        if (static_cast<int>(iv->lower.size()) != k) return false;
        for (int y = 0; y < k; ++y) {
            if (candidate.mass[y] < iv->lower[y] - tol) return false;
            if (candidate.mass[y] > iv->upper[y] + tol) return false;
        }
        return true;
    }
    const auto& vl = std::get<VertexListRow>(row);
    if (vl.vertices.front().size() != k) return false;
    const int m = static_cast<int>(vl.vertices.size());
    if (m == 1) return rows_close(vl.vertices[0], candidate, tol);

    // Convex-combination feasibility: stack the simplex constraint as an
    // extra unit row and test the non-negative least-squares residual.
    Eigen::MatrixXd A(k + 1, m);
    Eigen::VectorXd b(k + 1);
    for (int i = 0; i < m; ++i) {
        for (int y = 0; y < k; ++y) A(y, i) = vl.vertices[static_cast<std::size_t>(i)].mass[y];
        A(k, i) = 1.0;
    }
    for (int y = 0; y < k; ++y) b(y) = candidate.mass[y];
    b(k) = 1.0;
    Eigen::VectorXd lambda = nnls(A, b);
    return (A * lambda - b).lpNorm<Eigen::Infinity>() <= tol;
}

ExtVector apply_matrix(const TransitionMatrix& T, const ExtVector& f) {
    if (static_cast<std::size_t>(T.size()) != f.size())
        throw DimensionMismatchError("apply_matrix: dimension mismatch");
    ExtVector out(f.size());
    for (int x = 0; x < T.size(); ++x) out[x] = ext_dot(T.rows[x].mass, f);
    return out;
}

ExtVector transition_apply(const ImpreciseChain& chain, const ExtVector& f, Bound bound) {
    const int k = chain.size();
    if (static_cast<int>(f.size()) != k)
        throw DimensionMismatchError("transition_apply: f has " + std::to_string(f.size()) +
                                     " entries for " + std::to_string(k) + " states");
    ExtVector out(f.size());
    detail::parallel_for(k, [&](int x) { out[x] = row_optimize(chain.rows[x], f, bound).value; });
    return out;
}

ExtVector lower_transition_apply(const ImpreciseChain& chain, const ExtVector& f) {
    return transition_apply(chain, f, Bound::lower);
}

ExtVector upper_transition_apply(const ImpreciseChain& chain, const ExtVector& f) {
    return transition_apply(chain, f, Bound::upper);
}

ExtVector power_transition(const ImpreciseChain& chain, const ExtVector& f, int n, Bound bound) {
    if (n < 0) throw Error("power_transition: n must be non-negative");
    ExtVector g = f;
    for (int i = 0; i < n; ++i) g = transition_apply(chain, g, bound);
    return g;
}

TransitionMatrix select_extremal_matrix(const ImpreciseChain& chain, const ExtVector& f,
                                        Bound bound) {
    const int k = chain.size();
    if (static_cast<int>(f.size()) != k)
        throw DimensionMismatchError("select_extremal_matrix: f dimension mismatch");
    TransitionMatrix T;
    T.rows.resize(static_cast<std::size_t>(k));
    detail::parallel_for(k, [&](int x) { T.rows[x] = row_optimize(chain.rows[x], f, bound).row; });
    return T;
}

std::vector<int> possible_support(const ImpreciseChain& chain, int x) {
    if (x < 0 || x >= chain.size()) throw Error("possible_support: state index out of range");
    return row_support(chain.rows[x]);
}

bool matrix_in_chain(const ImpreciseChain& chain, const TransitionMatrix& T, double tol) {
    if (T.size() != chain.size()) return false;
    for (int x = 0; x < chain.size(); ++x)
        if (!row_contains(chain.rows[x], T.rows[x], tol)) return false;
    return true;
}

}  // namespace imc
