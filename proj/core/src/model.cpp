#include "imc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "imc/errors.hpp"

namespace imc {

TargetSet::TargetSet(std::vector<int> members, int num_states) {
    mask_.assign(static_cast<std::size_t>(num_states), 0);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (int x : members) {
        if (x < 0 || x >= num_states)
            throw Error("TargetSet: state index out of range");
        mask_[x] = 1;
    }
    members_ = std::move(members);
}

const char* to_string(Violation::Code code) {
    switch (code) {
        case Violation::Code::RowSumError: return "RowSumError";
        case Violation::Code::EntryRange: return "EntryRange";
        case Violation::Code::IntervalInfeasible: return "IntervalInfeasible";
        case Violation::Code::BoundOrderError: return "BoundOrderError";
        case Violation::Code::UnknownStateInTarget: return "UnknownStateInTarget";
        case Violation::Code::DimensionMismatch: return "DimensionMismatch";
        case Violation::Code::EmptyVertexList: return "EmptyVertexList";
        case Violation::Code::DuplicateState: return "DuplicateState";
        case Violation::Code::EmptyStateSpace: return "EmptyStateSpace";
    }
    return "UnknownViolation";
}

std::string describe(const std::vector<Violation>& violations) {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << to_string(violations[i].code) << " at " << violations[i].where << ": "
           << violations[i].detail;
    }
    return os.str();
}

namespace {

void check_vertex_row(const ProbabilityRow& row, int k, const std::string& where,
                      std::vector<Violation>& out) {
    if (row.size() != k) {
        out.push_back({Violation::Code::DimensionMismatch, where,
                       "vertex has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(k)});
        return;
    }
    double sum = 0.0;
    for (int y = 0; y < k; ++y) {
        double m = row.mass[y];
        if (!std::isfinite(m) || m < -kIntervalFeasTol || m > 1.0 + kIntervalFeasTol) {
            out.push_back({Violation::Code::EntryRange, where,
                           "entry " + std::to_string(y) + " = " + std::to_string(m) +
                               " outside [0,1]"});
            return;
        }
        sum += m;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
        out.push_back({Violation::Code::RowSumError, where,
                       "mass sums to " + std::to_string(sum)});
    }
}

void check_interval_row(const IntervalBoundsRow& row, int k, const std::string& where,
                        std::vector<Violation>& out) {
    if (static_cast<int>(row.lower.size()) != k || static_cast<int>(row.upper.size()) != k) {
        out.push_back({Violation::Code::DimensionMismatch, where,
                       "interval bounds have " + std::to_string(row.lower.size()) + "/" +
                           std::to_string(row.upper.size()) + " entries, expected " +
                           std::to_string(k)});
        return;
    }
    bool entries_ok = true;
    for (int y = 0; y < k; ++y) {
        double l = row.lower[y], u = row.upper[y];
        if (!std::isfinite(l) || !std::isfinite(u) || l < -kIntervalFeasTol ||
            u > 1.0 + kIntervalFeasTol) {
            out.push_back({Violation::Code::EntryRange, where,
                           "bounds for state " + std::to_string(y) + " outside [0,1]"});
            entries_ok = false;
            continue;
        }
        if (l > u) {
            out.push_back({Violation::Code::BoundOrderError, where,
                           "lower " + std::to_string(l) + " > upper " + std::to_string(u) +
                               " at state " + std::to_string(y)});
            entries_ok = false;
        }
    }
    if (!entries_ok) return;
    double sum_lower = std::accumulate(row.lower.begin(), row.lower.end(), 0.0);
    double sum_upper = std::accumulate(row.upper.begin(), row.upper.end(), 0.0);
    if (sum_lower > 1.0 + kIntervalFeasTol) {
        out.push_back({Violation::Code::IntervalInfeasible, where,
                       "sum of lower bounds " + std::to_string(sum_lower) + " exceeds 1"});
    }
    if (sum_upper < 1.0 - kIntervalFeasTol) {
        out.push_back({Violation::Code::IntervalInfeasible, where,
                       "sum of upper bounds " + std::to_string(sum_upper) + " is below 1"});
    }
}

ValidationResult validate_impl(const StateSpace& states, const std::vector<int>& target_indices,
                               const std::vector<Violation>& target_violations,
                               const std::vector<RowCredalSet>& rows) {
    ValidationResult result;
    result.violations = target_violations;
    const int k = states.size();

    if (k == 0)
        result.violations.push_back({Violation::Code::EmptyStateSpace, "states",
                                     "state space must contain at least one state"});
    std::set<std::string> seen;
    for (const auto& label : states.labels) {
        if (!seen.insert(label).second)
            result.violations.push_back(
                {Violation::Code::DuplicateState, "states", "duplicate label '" + label + "'"});
    }

    if (static_cast<int>(rows.size()) != k) {
        result.violations.push_back({Violation::Code::DimensionMismatch, "rows",
                                     std::to_string(rows.size()) + " rows for " +
                                         std::to_string(k) + " states"});
        return result;
    }

    for (int x = 0; x < k; ++x) {
        const std::string& where = states.labels[x];
        if (const auto* vl = std::get_if<VertexListRow>(&rows[x])) {
            if (vl->vertices.empty()) {
                result.violations.push_back({Violation::Code::EmptyVertexList, where,
                                             "vertex list must be non-empty"});
                continue;
            }
            for (const auto& v : vl->vertices) check_vertex_row(v, k, where, result.violations);
        } else {
            check_interval_row(std::get<IntervalBoundsRow>(rows[x]), k, where,
                               result.violations);
        }
    }

    if (result.violations.empty()) {
        result.chain = ImpreciseChain{states, rows};
        result.target = TargetSet(target_indices, k);
    }
    return result;
}

}  // namespace

ValidationResult validate_chain(const StateSpace& states,
                                const std::vector<std::string>& target_labels,
                                const std::vector<RowCredalSet>& rows) {
    std::vector<int> indices;
    std::vector<Violation> violations;
    for (const auto& label : target_labels) {
        if (auto idx = states.index_of(label)) {
            indices.push_back(*idx);
        } else {
            violations.push_back({Violation::Code::UnknownStateInTarget, "target",
                                  "unknown state '" + label + "'"});
        }
    }
    return validate_impl(states, indices, violations, rows);
}

ValidationResult validate_chain(const StateSpace& states,
                                const std::vector<int>& target_indices,
                                const std::vector<RowCredalSet>& rows) {
    std::vector<int> indices;
    std::vector<Violation> violations;
    for (int idx : target_indices) {
        if (idx < 0 || idx >= states.size()) {
            violations.push_back({Violation::Code::UnknownStateInTarget, "target",
                                  "index " + std::to_string(idx) + " out of range"});
        } else {
            indices.push_back(idx);
        }
    }
    return validate_impl(states, indices, violations, rows);
}

std::pair<ImpreciseChain, TargetSet> make_chain(const StateSpace& states,
                                                const std::vector<std::string>& target_labels,
                                                const std::vector<RowCredalSet>& rows) {
    auto result = validate_chain(states, target_labels, rows);
    if (!result.ok()) throw ValidationError(describe(result.violations));
    return {std::move(*result.chain), std::move(*result.target)};
}

}  // namespace imc
