#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "imc/model.hpp"

namespace imc::test {

inline std::filesystem::path data_dir() { return IMC_TEST_DATA_DIR; }

inline ProbabilityRow row(std::vector<double> mass) { return ProbabilityRow{std::move(mass)}; }

inline std::pair<ImpreciseChain, TargetSet> fix_geo() {
    StateSpace states{{"g", "s"}};
    std::vector<RowCredalSet> rows{
        VertexListRow{{row({1.0, 0.0})}},
        IntervalBoundsRow{{0.25, 0.25}, {0.75, 0.75}},
    };
    return make_chain(states, std::vector<std::string>{"g"}, rows);
}

inline std::pair<ImpreciseChain, TargetSet> fix_trap() {
    StateSpace states{{"g", "m", "t"}};
    std::vector<RowCredalSet> rows{
        VertexListRow{{row({1.0, 0.0, 0.0})}},
        VertexListRow{{row({1.0, 0.0, 0.0}), row({0.0, 0.0, 1.0})}},
        VertexListRow{{row({0.0, 0.0, 1.0})}},
    };
    return make_chain(states, std::vector<std::string>{"g"}, rows);
}

inline std::pair<ImpreciseChain, TargetSet> fix_half() {
    StateSpace states{{"g", "u", "t"}};
    std::vector<RowCredalSet> rows{
        VertexListRow{{row({1.0, 0.0, 0.0})}},
        VertexListRow{{row({0.5, 0.0, 0.5})}},
        VertexListRow{{row({0.0, 0.0, 1.0})}},
    };
    return make_chain(states, std::vector<std::string>{"g"}, rows);
}

inline std::pair<ImpreciseChain, TargetSet> fix_ruin(std::vector<std::string> target = {"0"}) {
    StateSpace states{{"0", "1", "2", "3"}};
    std::vector<RowCredalSet> rows{
        VertexListRow{{row({1.0, 0.0, 0.0, 0.0})}},
        VertexListRow{{row({0.5, 0.0, 0.5, 0.0})}},
        VertexListRow{{row({0.0, 0.5, 0.0, 0.5})}},
        VertexListRow{{row({0.0, 0.0, 0.0, 1.0})}},
    };
    return make_chain(states, target, rows);
}

/// The single matrix of a precise (singleton-credal) chain.
inline TransitionMatrix only_matrix(const ImpreciseChain& chain) {
    TransitionMatrix T;
    for (const auto& r : chain.rows) T.rows.push_back(std::get<VertexListRow>(r).vertices.front());
    return T;
}

}  // namespace imc::test
