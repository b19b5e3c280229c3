#include "imc/precise.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>

#include "imc/errors.hpp"
#include "imc/operators.hpp"

namespace imc {

std::vector<double> solve_hitting_block(const TransitionMatrix& T,
                                        const std::vector<int>& interior,
                                        const std::vector<double>& b, double residual_tol) {
    const int m = static_cast<int>(interior.size());
    if (m == 0) return {};
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
            M(i, j) = (i == j ? 1.0 : 0.0) - T.at(interior[i], interior[j]);
        rhs(i) = b[i];
    }
    Eigen::VectorXd x = M.partialPivLu().solve(rhs);
    const double defect = (M * x - rhs).lpNorm<Eigen::Infinity>();
    if (!x.allFinite() || defect > residual_tol)
        throw SingularSystemError("hitting-system solve defect " + std::to_string(defect));
    return {x.data(), x.data() + m};
}

namespace {

double equation_residual(const TransitionMatrix& T, const TargetSet& A, const ExtVector& v,
                         Quantity quantity) {
    ExtVector rhs = apply_matrix(T, v);
    double res = 0.0;
    for (int x = 0; x < T.size(); ++x) {
        ExtValue expect;
        if (quantity == Quantity::time)
            expect = A.contains(x) ? ExtValue(0.0) : ExtValue(1.0) + rhs[x];
        else
            expect = A.contains(x) ? ExtValue(1.0) : rhs[x];
        if (v[x].is_finite() && expect.is_finite())
            res = std::max(res, std::abs(v[x].finite() - expect.finite()));
    }
    return res;
}

}  // namespace

std::vector<int> cannot_reach_set(const TransitionMatrix& T, const TargetSet& A) {
    const int k = T.size();
    std::vector<char> reaches(static_cast<std::size_t>(k), 0);
    std::deque<int> queue;
    for (int a : A.members()) {
        reaches[a] = 1;
        queue.push_back(a);
    }
    while (!queue.empty()) {
        const int y = queue.front();
        queue.pop_front();
        for (int x = 0; x < k; ++x) {
            if (!reaches[x] && T.at(x, y) > 0.0) {
                reaches[x] = 1;
                queue.push_back(x);
            }
        }
    }
    std::vector<int> out;
    for (int x = 0; x < k; ++x)
        if (!reaches[x]) out.push_back(x);
    return out;
}

PreciseSolution precise_hitting_prob(const TransitionMatrix& T, const TargetSet& A,
                                     const PreciseOptions& opts) {
    const int k = T.size();
    PreciseSolution sol;
    sol.values.assign(static_cast<std::size_t>(k), ExtValue(0.0));
    sol.target_states = A.members();
    sol.pinned_states = cannot_reach_set(T, A);

    std::vector<char> pinned(static_cast<std::size_t>(k), 0);
    for (int x : sol.pinned_states) pinned[x] = 1;
    for (int x = 0; x < k; ++x) {
        if (A.contains(x))
            sol.values[x] = ExtValue(1.0);
        else if (!pinned[x])
            sol.interior_states.push_back(x);
    }

    std::vector<double> b;
    b.reserve(sol.interior_states.size());
    for (int x : sol.interior_states) {
        double into_target = 0.0;
        for (int a : A.members()) into_target += T.at(x, a);
        b.push_back(into_target);
    }
    std::vector<double> solved =
        solve_hitting_block(T, sol.interior_states, b, opts.solve_residual_tol);
    for (std::size_t i = 0; i < solved.size(); ++i)
        sol.values[sol.interior_states[i]] = ExtValue(std::clamp(solved[i], 0.0, 1.0));

    sol.residual = equation_residual(T, A, sol.values, Quantity::prob);
    return sol;
}

PreciseSolution precise_hitting_time(const TransitionMatrix& T, const TargetSet& A,
                                     const PreciseOptions& opts) {
    const int k = T.size();
    PreciseSolution reach = precise_hitting_prob(T, A, opts);

    PreciseSolution sol;
    sol.values.assign(static_cast<std::size_t>(k), ExtValue(0.0));
    sol.target_states = A.members();
    for (int x = 0; x < k; ++x) {
        if (A.contains(x)) continue;
        // p < 1 is exactly where the minimal solution is infinite
        if (reach.values[x].finite() < 1.0 - opts.prob_one_tol) {
            sol.values[x] = ExtValue::infinity();
            sol.pinned_states.push_back(x);
        } else {
            sol.interior_states.push_back(x);
        }
    }

    std::vector<double> ones(sol.interior_states.size(), 1.0);
    std::vector<double> solved =
        solve_hitting_block(T, sol.interior_states, ones, opts.solve_residual_tol);
    for (std::size_t i = 0; i < solved.size(); ++i)
        sol.values[sol.interior_states[i]] = ExtValue(std::max(solved[i], 0.0));

    sol.residual = equation_residual(T, A, sol.values, Quantity::time);
    return sol;
}

ResidualReport check_minimal_solution(const TransitionMatrix& T, const TargetSet& A,
                                      const ExtVector& candidate, Quantity quantity) {
    if (static_cast<int>(candidate.size()) != T.size())
        throw DimensionMismatchError("check_minimal_solution: candidate dimension mismatch");
    ExtVector applied = apply_matrix(T, candidate);
    ResidualReport report;
    for (int x = 0; x < T.size(); ++x) {
        ExtValue rhs;
        if (quantity == Quantity::time)
            rhs = A.contains(x) ? ExtValue(0.0) : ExtValue(1.0) + applied[x];
        else
            rhs = A.contains(x) ? ExtValue(1.0) : applied[x];
        if (candidate[x].is_infinite() != rhs.is_infinite()) {
            report.infinite_consistent = false;
        } else if (candidate[x].is_finite()) {
            report.max_residual =
                std::max(report.max_residual, std::abs(candidate[x].finite() - rhs.finite()));
        }
    }
    return report;
}

}  // namespace imc
