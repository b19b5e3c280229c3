#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "imc/classify.hpp"
#include "imc/operators.hpp"
#include "imc/oracle.hpp"
#include "imc/witness.hpp"

using namespace imc;

TEST_CASE("lambda base matrices reach the target at minimal horizons") {
    auto [trap, a_trap] = imc::test::fix_trap();
    TransitionMatrix base = build_lambda_base(trap, a_trap);
    CHECK(base.rows[1].mass == std::vector<double>{1.0, 0.0, 0.0});

    auto [geo, a_geo] = imc::test::fix_geo();
    base = build_lambda_base(geo, a_geo);
    CHECK(base.rows[1].mass == std::vector<double>{0.75, 0.25});

    auto [ruin, a_ruin] = imc::test::fix_ruin();
    base = build_lambda_base(ruin, a_ruin);
    TransitionMatrix own = imc::test::only_matrix(ruin);
    for (int x = 0; x < 4; ++x) CHECK(base.rows[x].mass == own.rows[x].mass);
}

TEST_CASE("lambda chains mix rows toward the base") {
    auto [geo, a] = imc::test::fix_geo();
    TransitionMatrix base = build_lambda_base(geo, a);
    REQUIRE(base.rows[1].mass == std::vector<double>{0.75, 0.25});

    ImpreciseChain half = lambda_chain(geo, base, 0.5);
    const auto& iv = std::get<IntervalBoundsRow>(half.rows[1]);
    CHECK(iv.lower == std::vector<double>{0.5, 0.25});
    CHECK(iv.upper == std::vector<double>{0.75, 0.5});

    CHECK_THROWS_AS(lambda_chain(geo, base, 0.0), LambdaOutOfRangeError);
    CHECK_THROWS_AS(lambda_chain(geo, base, 1.0), LambdaOutOfRangeError);
    CHECK_THROWS_AS(lambda_chain(geo, base, -0.25), LambdaOutOfRangeError);
}

TEST_CASE("every vertex of a lambda row lies in the original credal set") {
    for (auto fixture : {imc::test::fix_geo(), imc::test::fix_trap()}) {
        const auto& [chain, a] = fixture;
        TransitionMatrix base = build_lambda_base(chain, a);
        for (double lambda : {0.5, 0.125, 1e-6}) {
            ImpreciseChain mixed = lambda_chain(chain, base, lambda);
            for (int x = 0; x < chain.size(); ++x)
                for (const auto& v : row_vertices(mixed.rows[x]))
                    CHECK(row_contains(chain.rows[x], v));
        }
    }
}

TEST_CASE("lambda rows converge to the originals as lambda falls") {
    auto [geo, a] = imc::test::fix_geo();
    TransitionMatrix base = build_lambda_base(geo, a);
    const double lambda = 1e-6;
    ImpreciseChain mixed = lambda_chain(geo, base, lambda);
    const auto& original = std::get<IntervalBoundsRow>(geo.rows[1]);
    const auto& perturbed = std::get<IntervalBoundsRow>(mixed.rows[1]);
    for (int y = 0; y < 2; ++y) {
        CHECK(std::abs(perturbed.lower[y] - original.lower[y]) <= 2.0 * lambda);
        CHECK(std::abs(perturbed.upper[y] - original.upper[y]) <= 2.0 * lambda);
    }
}

TEST_CASE("nesting: smaller lambda gives a larger family and larger probabilities") {
    auto [geo, a] = imc::test::fix_geo();
    TransitionMatrix base = build_lambda_base(geo, a);
    const double small = 0.125, big = 0.5;
    ImpreciseChain chain_small = lambda_chain(geo, base, small);
    ImpreciseChain chain_big = lambda_chain(geo, base, big);
    for (int x = 0; x < geo.size(); ++x)
        for (const auto& v : row_vertices(chain_big.rows[x]))
            CHECK(row_contains(chain_small.rows[x], v));

    auto [trap, a_trap] = imc::test::fix_trap();
    base = build_lambda_base(trap, a_trap);
    ExtVector p_small =
        detail::solve_exact_values(lambda_chain(trap, base, small), a_trap, Quantity::prob,
                                   Bound::upper, {})
            .values;
    ExtVector p_big = detail::solve_exact_values(lambda_chain(trap, base, big), a_trap,
                                                 Quantity::prob, Bound::upper, {})
                          .values;
    for (int x = 0; x < trap.size(); ++x)
        CHECK(p_small[x].finite() >= p_big[x].finite() - 1e-12);
}

TEST_CASE("upper-time witness uses the structural row recipes") {
    auto [geo, a_geo] = imc::test::fix_geo();
    WitnessExtraction w = extract_witness(geo, a_geo, Quantity::time, Bound::upper);
    const auto& M = std::get<TransitionMatrix>(w.witness);
    CHECK(M.rows[1].mass == std::vector<double>{0.25, 0.75});
    PreciseSolution sol = precise_hitting_time(M, a_geo);
    CHECK(sol.values[1].finite() == doctest::Approx(4.0).epsilon(1e-10));

    auto [trap, a_trap] = imc::test::fix_trap();
    w = extract_witness(trap, a_trap, Quantity::time, Bound::upper);
    const auto& W = std::get<TransitionMatrix>(w.witness);
    CHECK(W.rows[1].mass == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(precise_hitting_time(W, a_trap).values[1].is_infinite());
}

TEST_CASE("upper-probability witnesses carry a lambda certificate") {
    auto [trap, a_trap] = imc::test::fix_trap();
    WitnessExtraction w =
        extract_witness(trap, a_trap, Quantity::prob, Bound::upper, default_lambda_schedule(6));
    REQUIRE(w.schedule_trace.size() == 6);
    const auto& lw = std::get<LambdaWitness>(w.witness);
    CHECK(lw.lambda == doctest::Approx(std::pow(2.0, -6)));
    for (const auto& step : w.schedule_trace) {
        CHECK(step.achieved[1] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(matrix_in_chain(trap, step.matrix));
    }

    // achieved values never decrease along the schedule
    for (std::size_t i = 1; i < w.schedule_trace.size(); ++i)
        for (int x = 0; x < trap.size(); ++x)
            CHECK(w.schedule_trace[i].achieved[x] >=
                  w.schedule_trace[i - 1].achieved[x] - 1e-12);
}

TEST_CASE("the gap to the lambda-zero value closes on the fixtures") {
    for (auto fixture : {imc::test::fix_geo(), imc::test::fix_trap(), imc::test::fix_half(),
                         imc::test::fix_ruin()}) {
        const auto& [chain, a] = fixture;
        ExtVector at_zero =
            detail::solve_exact_values(chain, a, Quantity::prob, Bound::upper, {}).values;
        WitnessExtraction w = extract_witness(chain, a, Quantity::prob, Bound::upper);
        const auto& lw = std::get<LambdaWitness>(w.witness);
        CHECK(lw.lambda == doctest::Approx(std::pow(2.0, -20)));
        for (int x = 0; x < chain.size(); ++x) {
            CHECK(lw.achieved[x] <= at_zero[x].finite() + 1e-9);
            CHECK(std::abs(lw.achieved[x] - at_zero[x].finite()) < 1e-4);
        }
    }
}

TEST_CASE("A-inert invariance of all four bound quantities") {
    for (auto fixture : {imc::test::fix_geo(), imc::test::fix_trap(), imc::test::fix_half(),
                         imc::test::fix_ruin()}) {
        const auto& [chain, a] = fixture;
        ImpreciseChain inert = a_inert_modification(chain, a);
        for (Quantity q : {Quantity::time, Quantity::prob}) {
            for (Bound b : {Bound::lower, Bound::upper}) {
                ExtVector v0 = detail::solve_exact_values(chain, a, q, b, {}).values;
                ExtVector v1 = detail::solve_exact_values(inert, a, q, b, {}).values;
                for (int x = 0; x < chain.size(); ++x) {
                    CHECK(v0[x].is_infinite() == v1[x].is_infinite());
                    if (v0[x].is_finite())
                        CHECK(v0[x].finite() == doctest::Approx(v1[x].finite()).epsilon(1e-10));
                }
            }
        }
    }
}
