#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hh"

#include <subsense/ac_ns.hh>
#include <subsense/generators.hh>
#include <subsense/oracle.hh>
#include <subsense/pipeline.hh>

using namespace subsense;
using namespace subsense::testing;

TEST_CASE("boolean instance constraints")
{
    auto a = generators::figure1a();
    CHECK(a.num_variables() == 4);
    CHECK(a.num_edges() == 4);
    for (int p : {0, 1})
        for (int q : {0, 1}) {
            CHECK(a.allows(0, p, 1, q) == (p == q));
            CHECK(a.allows(2, p, 3, q) == (p == q));
            CHECK(a.allows(1, p, 2, q) == (p == 1 || q == 1));
            CHECK(a.allows(0, p, 3, q) == (p == 1 || q == 1));
        }
    CHECK(oracle::solve(a, 100).size() == 3);
}

TEST_CASE("the four-variable instance is globally consistent")
{
    auto c = generators::figure1c();
    auto sols = oracle::solve(c, 1000);
    for (VarId i = 0; i < 4; ++i)
        for (int v : c.current_values(i)) {
            bool seen = false;
            for (const auto & s : sols)
                seen = seen || s[i] == v;
            CHECK(seen);
        }
}

TEST_CASE("two-variable disjunction")
{
    auto t = generators::two_var_cns_vs_ns(4);
    CHECK(t.allows(0, 2, 1, 0));
    CHECK_FALSE(t.allows(0, 2, 1, 1));
    auto small = generators::two_var_cns_vs_ns(2);
    CHECK(values(small, 0) == std::vector<int>{1});
    CHECK(values(small, 1) == std::vector<int>{0, 1});
    CHECK_THROWS_AS((void) generators::two_var_cns_vs_ns(1), InstanceError);
}

TEST_CASE("set cover instances")
{
    auto three = generators::set_cover_instance({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
    CHECK(three.num_variables() == 4);
    CHECK(values(three, 0) == std::vector<int>{1, 2, 3});
    CHECK(oracle::longest_elimination_sequence(three, Rule::cns, {false, 0}) == 1);

    auto four = generators::set_cover_instance({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}, {1, 2, 3}});
    CHECK(oracle::longest_elimination_sequence(four, Rule::cns, {false, 0}) == 3);

    for (VarId i = 1; i < 4; ++i)
        for (int v : four.current_values(i))
            CHECK_FALSE(oracle::is_cns(four, i, v).has_value());

    CHECK_THROWS_AS((void) generators::set_cover_instance({1, 2, 3}, {{1, 2}}), InstanceError);
    CHECK_THROWS_AS((void) generators::set_cover_instance({1, 2}, {{1, 2, 5}}), InstanceError);
}

TEST_CASE("chains")
{
    auto chain = generators::geq_chain(5);
    CHECK(chain.num_variables() == 5);
    CHECK(chain.num_edges() == 4);
    CHECK(chain.allows(0, 3, 1, 2));
    CHECK_FALSE(chain.allows(0, 1, 1, 2));

    auto anchored = generators::anchored_geq_chain(5);
    CHECK(anchored.num_variables() == 9);
    CHECK_FALSE(has_ac_removal(anchored));
    // every chain value still occurs in a solution
    auto sols = oracle::solve(anchored, 100000);
    for (VarId i = 0; i < 5; ++i)
        for (int v : {1, 2, 3}) {
            bool seen = false;
            for (const auto & s : sols)
                seen = seen || s[i] == v;
            CHECK(seen);
        }
    CHECK_THROWS_AS((void) generators::anchored_geq_chain(1), InstanceError);
}

TEST_CASE("random instances are deterministic")
{
    auto a = generators::random_instance(8, 4, 0.5, 0.6, 7);
    auto b = generators::random_instance(8, 4, 0.5, 0.6, 7);
    CHECK(a == b);
    CHECK_FALSE(a == generators::random_instance(8, 4, 0.5, 0.6, 8));
}

TEST_CASE("random instance extremes")
{
    auto loose = generators::random_instance(5, 3, 1.0, 1.0, 1);
    CHECK(loose.num_edges() == 0);
    for (auto rule : {Rule::ns, Rule::ss, Rule::cns, Rule::scss})
        CHECK(all_singletons(run_rule(loose, rule).instance));

    auto tight = generators::random_instance(4, 3, 1.0, 0.0, 1);
    auto r = establish_ac(tight);
    CHECK(r.report.unsatisfiable);
    CHECK(r.instance.has_empty_domain());
}
