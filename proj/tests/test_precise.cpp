#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "imc/iteration.hpp"
#include "imc/precise.hpp"

using namespace imc;
using imc::test::only_matrix;

TEST_CASE("cannot-reach set by reverse reachability") {
    auto [ruin, a0] = imc::test::fix_ruin();
    TransitionMatrix T = only_matrix(ruin);
    CHECK(cannot_reach_set(T, a0) == std::vector<int>{3});

    TargetSet ends({0, 3}, 4);
    CHECK(cannot_reach_set(T, ends).empty());
    // target states are never in the set
    for (int a : ends.members())
        for (int x : cannot_reach_set(T, ends)) CHECK(x != a);
}

TEST_CASE("gambler's ruin hitting probabilities") {
    auto [ruin, a0] = imc::test::fix_ruin();
    PreciseSolution sol = precise_hitting_prob(only_matrix(ruin), a0);
    CHECK(sol.values[0] == ExtValue(1.0));
    CHECK(sol.values[1].finite() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(sol.values[2].finite() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(sol.values[3] == ExtValue(0.0));
    CHECK(sol.residual <= 1e-10);
}

TEST_CASE("one-step split with an absorbing trap") {
    auto [half, a] = imc::test::fix_half();
    PreciseSolution sol = precise_hitting_prob(only_matrix(half), a);
    CHECK(sol.values[1].finite() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol.values[2] == ExtValue(0.0));
}

TEST_CASE("hitting times: finite block and infinite region") {
    auto [ruin, a0] = imc::test::fix_ruin();
    TransitionMatrix T = only_matrix(ruin);

    TargetSet ends({0, 3}, 4);
    PreciseSolution both = precise_hitting_time(T, ends);
    CHECK(both.values[0] == ExtValue(0.0));
    CHECK(both.values[1].finite() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(both.values[2].finite() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(both.values[3] == ExtValue(0.0));
    CHECK(both.residual <= 1e-10);

    PreciseSolution one = precise_hitting_time(T, a0);
    CHECK(one.values[1].is_infinite());  // reaches 0 only with probability 2/3
    CHECK(one.values[2].is_infinite());
    CHECK(one.values[0] == ExtValue(0.0));
}

TEST_CASE("residual report flags perturbations and inconsistent infinities") {
    auto [ruin, a0] = imc::test::fix_ruin();
    TransitionMatrix T = only_matrix(ruin);
    TargetSet ends({0, 3}, 4);

    PreciseSolution sol = precise_hitting_time(T, ends);
    ResidualReport clean = check_minimal_solution(T, ends, sol.values, Quantity::time);
    CHECK(clean.max_residual <= 1e-10);
    CHECK(clean.infinite_consistent);

    ExtVector bumped = sol.values;
    for (int x = 0; x < 4; ++x)
        if (!ends.contains(x)) bumped[x] = ExtValue(bumped[x].finite() + 1.0);
    ResidualReport bad = check_minimal_solution(T, ends, bumped, Quantity::time);
    CHECK(bad.max_residual == doctest::Approx(0.5).epsilon(1e-12));

    ExtVector wrong_inf = sol.values;
    wrong_inf[1] = ExtValue::infinity();
    CHECK_FALSE(check_minimal_solution(T, ends, wrong_inf, Quantity::time).infinite_consistent);
}

TEST_CASE("minimality: shaving a finite state breaks the equation") {
    auto [ruin, a0] = imc::test::fix_ruin();
    TransitionMatrix T = only_matrix(ruin);
    TargetSet ends({0, 3}, 4);
    PreciseSolution sol = precise_hitting_time(T, ends);

    const double eps = 0.125;
    for (int x : sol.interior_states) {
        ExtVector shaved = sol.values;
        shaved[x] = ExtValue(shaved[x].finite() - eps);
        ResidualReport r = check_minimal_solution(T, ends, shaved, Quantity::time);
        CHECK(r.max_residual >= eps * (1.0 - T.at(x, x)) - 1e-12);
    }
}

TEST_CASE("degenerate empty target") {
    auto [half, a] = imc::test::fix_half();
    TransitionMatrix T = only_matrix(half);
    TargetSet empty({}, 3);
    PreciseSolution p = precise_hitting_prob(T, empty);
    PreciseSolution h = precise_hitting_time(T, empty);
    for (int x = 0; x < 3; ++x) {
        CHECK(p.values[x] == ExtValue(0.0));
        CHECK(h.values[x].is_infinite());
    }
}

TEST_CASE("probability bounds and the finite-time iff prob-one rule on random matrices") {
    std::mt19937_64 rng(7117);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 4);
        TransitionMatrix T;
        for (int x = 0; x < k; ++x) {
            ProbabilityRow r;
            r.mass.resize(static_cast<std::size_t>(k));
            double total = 0.0;
            for (double& m : r.mass) {
                // sparse-ish rows so traps appear
                m = (rng() % 3 == 0) ? 0.0 : static_cast<double>(rng() % 1000 + 1);
                total += m;
            }
            if (total == 0.0) {
                r.mass[x] = 1.0;
                total = 1.0;
            }
            for (double& m : r.mass) m /= total;
            T.rows.push_back(std::move(r));
        }
        TargetSet A({static_cast<int>(rng() % static_cast<std::uint64_t>(k))}, k);

        PreciseSolution p = precise_hitting_prob(T, A);
        PreciseSolution h = precise_hitting_time(T, A);
        for (int x = 0; x < k; ++x) {
            CHECK(p.values[x].finite() >= 0.0);
            CHECK(p.values[x].finite() <= 1.0);
            if (h.values[x].is_finite()) CHECK(h.values[x].finite() >= 0.0);
            if (!A.contains(x)) {
                const bool prob_one = p.values[x].finite() >= 1.0 - 1e-9;
                CHECK(h.values[x].is_finite() == prob_one);
            }
        }

        // the pinned construction agrees with the truncated recursion run on
        // the singleton credal set
        ImpreciseChain singleton;
        for (int x = 0; x < k; ++x) singleton.states.labels.push_back("s" + std::to_string(x));
        for (int x = 0; x < k; ++x) singleton.rows.push_back(VertexListRow{{T.rows[x]}});
        ExtVector iterated = truncated_values(singleton, A, Quantity::prob, Bound::lower, 2000);
        for (int x = 0; x < k; ++x)
            CHECK(iterated[x].finite() == doctest::Approx(p.values[x].finite()).epsilon(1e-6));
    }
}
