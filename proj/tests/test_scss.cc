#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hh"

#include <subsense/ac_ns.hh>
#include <subsense/generators.hh>
#include <subsense/oracle.hh>
#include <subsense/scss_engine.hh>

#include <algorithm>
#include <set>

using namespace subsense;
using namespace subsense::testing;

namespace
{
    auto steps(std::initializer_list<std::pair<VarId, int>> list) -> std::vector<ReplayStep>
    {
        std::vector<ReplayStep> out;
        for (auto [i, v] : list)
            out.push_back({i, v, Rule::scss, std::nullopt});
        return out;
    }

    // 3 then 0 from x1; 0,1,2 from x3; 0,1,2 from x2; 1,2,3 from x4; 2 from x1
    auto full_order() -> std::vector<ReplayStep>
    {
        return steps({{0, 3}, {0, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 0}, {1, 1}, {1, 2}, {3, 1}, {3, 2}, {3, 3}, {0, 2}});
    }
}

TEST_CASE("check_scss lists conditioned eliminations")
{
    auto c = check_scss(generators::figure1c());
    CHECK(std::find(c.begin(), c.end(), std::tuple<VarId, int, VarId>{0, 3, 1}) != c.end());
    CHECK_FALSE(check_scss(generators::figure1a()).empty());
    CHECK(check_scss(equality_triangle()).empty());
    // two variables: any value with a supported alternative qualifies
    CHECK(check_scss(equality_pair({0, 1, 2}, {0, 1, 2})).size() == 6);
}

TEST_CASE("check_scss matches the oracle on the corpus")
{
    for (const auto & entry : corpus(300)) {
        const auto & inst = entry.instance;
        std::set<std::tuple<VarId, int, VarId>> expected;
        for (VarId i = 0; i < inst.num_variables(); ++i)
            for (int b : inst.current_values(i))
                for (VarId j : inst.neighbours(i))
                    if (oracle::is_scss(inst, i, b, j))
                        expected.emplace(i, b, j);
        auto got = check_scss(inst);
        REQUIRE(std::set<std::tuple<VarId, int, VarId>>(got.begin(), got.end()) == expected);
    }
}

TEST_CASE("SCSS reduces the four-variable instance to a solution")
{
    auto c = generators::figure1c();
    auto r = scss_to_convergence(c);
    REQUIRE(all_singletons(r.instance));
    oracle::Solution s;
    for (VarId i = 0; i < 4; ++i)
        s.push_back(values(r.instance, i)[0]);
    CHECK(oracle::is_solution(c, s));
    CHECK_FALSE(certify_trace(c, r.trace).has_value());
}

TEST_CASE("SCSS reduces the smaller instances to singletons")
{
    CHECK(all_singletons(scss_to_convergence(generators::figure1a()).instance));
    CHECK(all_singletons(scss_to_convergence(generators::figure1b()).instance));
}

TEST_CASE("SCSS removes unsupported values without an AC pass")
{
    auto r = scss_to_convergence(equality_pair({0}, {0, 1}));
    CHECK(values(r.instance, 1) == std::vector<int>{0});
}

TEST_CASE("replaying a certified order")
{
    auto c = generators::figure1c();
    auto [final_inst, trace] = replay_sequence(c, full_order());
    CHECK(trace.steps.size() == 12);
    CHECK(values(final_inst, 0) == std::vector<int>{1});
    CHECK(values(final_inst, 1) == std::vector<int>{3});
    CHECK(values(final_inst, 2) == std::vector<int>{3});
    CHECK(values(final_inst, 3) == std::vector<int>{0});
    CHECK(oracle::is_solution(c, {1, 3, 3, 0}));
    // the input is untouched
    CHECK(c == generators::figure1c());
}

TEST_CASE("the eleven-step order starting with 3 certifies")
{
    auto order = steps({{0, 3}, {2, 0}, {2, 1}, {2, 2}, {1, 0}, {1, 1}, {1, 2}, {3, 1}, {3, 2}, {3, 3}, {0, 2}});
    auto [final_inst, trace] = replay_sequence(generators::figure1c(), order);
    CHECK(trace.steps.size() == 11);
    CHECK(values(final_inst, 0) == std::vector<int>{0, 1});
}

TEST_CASE("starting the order with 0 breaks at the fourth step")
{
    auto order = steps({{0, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 0}, {1, 1}, {1, 2}, {3, 1}, {3, 2}, {3, 3}, {0, 2}});
    try {
        (void) replay_sequence(generators::figure1c(), order);
        FAIL("expected a replay error");
    }
    catch (const ReplayError & e) {
        CHECK(e.step() == 4);
        CHECK(e.rule() == Rule::scss);
    }
}

TEST_CASE("an NS claim on the boolean instance is rejected")
{
    std::vector<ReplayStep> claim{{0, 0, Rule::ns, std::nullopt}};
    CHECK_THROWS_AS((void) replay_sequence(generators::figure1a(), claim), ReplayError);
}

TEST_CASE("an empty replay is the identity")
{
    auto c = generators::figure1c();
    auto [final_inst, trace] = replay_sequence(c, {});
    CHECK(final_inst == c);
    CHECK(trace.steps.empty());
}

TEST_CASE("unconstrained variables keep their largest value")
{
    auto r = scss_to_convergence(isolated(3, {0, 1, 2}));
    for (VarId i = 0; i < 3; ++i)
        CHECK(values(r.instance, i) == std::vector<int>{2});
    CHECK_FALSE(certify_trace(isolated(3, {0, 1, 2}), r.trace).has_value());
}

TEST_CASE("SCSS fixpoint is certified and complete")
{
    for (const auto & entry : corpus(400)) {
        auto r = scss_to_convergence(entry.instance, {true, false});
        REQUIRE_FALSE(certify_trace(entry.instance, r.trace).has_value());
        if (r.report.unsatisfiable)
            continue;
        REQUIRE(oracle::all_eliminable(r.instance, Rule::scss).empty());
    }
}
