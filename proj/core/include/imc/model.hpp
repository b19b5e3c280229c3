#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "imc/extended.hpp"

namespace imc {

enum class Bound { lower, upper };
enum class Quantity { time, prob };

inline const char* to_string(Bound b) { return b == Bound::lower ? "lower" : "upper"; }
inline const char* to_string(Quantity q) { return q == Quantity::time ? "time" : "prob"; }

/// Row-sum tolerance for probability rows. Violations are rejected, never
/// renormalized.
inline constexpr double kRowSumTol = 1e-9;
/// Feasibility slack for interval rows: sum lower <= 1 + tol, sum upper >= 1 - tol.
inline constexpr double kIntervalFeasTol = 1e-12;
/// Tolerance for credal-set membership tests.
inline constexpr double kMembershipTol = 1e-9;

/// Ordered distinct state names; indices 0..k-1 are the canonical identity.
struct StateSpace {
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(labels.size()); }
    std::optional<int> index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<int>(i);
        return std::nullopt;
    }
};

/// A set of state indices, kept sorted and deduplicated. May be empty.
class TargetSet {
public:
    TargetSet() = default;
    explicit TargetSet(std::vector<int> members, int num_states);

    bool contains(int x) const { return mask_.size() > static_cast<std::size_t>(x) && mask_[x]; }
    const std::vector<int>& members() const { return members_; }
    bool empty() const { return members_.empty(); }
    int num_states() const { return static_cast<int>(mask_.size()); }

private:
    std::vector<int> members_;
    std::vector<char> mask_;
};

/// One probability mass function over the state space.
struct ProbabilityRow {
    std::vector<double> mass;

    int size() const { return static_cast<int>(mass.size()); }
};

/// Credal row given by finitely many vertices; denotes their convex hull.
struct VertexListRow {
    std::vector<ProbabilityRow> vertices;
};

/// Credal row {q : lower <= q <= upper, sum q = 1}.
struct IntervalBoundsRow {
    std::vector<double> lower;
    std::vector<double> upper;
};

using RowCredalSet = std::variant<VertexListRow, IntervalBoundsRow>;

/// Finite state space plus one validated credal row per state. Separately
/// specified rows: the global set of transition matrices is the product of
/// the per-state row sets.
struct ImpreciseChain {
    StateSpace states;
    std::vector<RowCredalSet> rows;

    int size() const { return states.size(); }
};

struct TransitionMatrix {
    std::vector<ProbabilityRow> rows;

    int size() const { return static_cast<int>(rows.size()); }
    double at(int x, int y) const { return rows[x].mass[y]; }
};

struct Violation {
    enum class Code {
        RowSumError,
        EntryRange,
        IntervalInfeasible,
        BoundOrderError,
        UnknownStateInTarget,
        DimensionMismatch,
        EmptyVertexList,
        DuplicateState,
        EmptyStateSpace,
    };
    Code code;
    std::string where;   // row label or "target"/"states"
    std::string detail;
};

const char* to_string(Violation::Code code);

struct ValidationResult {
    std::optional<ImpreciseChain> chain;
    std::optional<TargetSet> target;
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

/// Validates states, target labels and row specs into a chain + target set.
/// Collects all violations instead of stopping at the first one; performs
/// no silent repair.
ValidationResult validate_chain(const StateSpace& states,
                                const std::vector<std::string>& target_labels,
                                const std::vector<RowCredalSet>& rows);

/// Same, with the target already given as indices.
ValidationResult validate_chain(const StateSpace& states,
                                const std::vector<int>& target_indices,
                                const std::vector<RowCredalSet>& rows);

/// Throwing convenience wrapper: returns the validated pair or raises
/// ValidationError with all violations in the message.
std::pair<ImpreciseChain, TargetSet> make_chain(const StateSpace& states,
                                                const std::vector<std::string>& target_labels,
                                                const std::vector<RowCredalSet>& rows);

std::string describe(const std::vector<Violation>& violations);

}  // namespace imc
