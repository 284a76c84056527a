#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hh"

#include <subsense/ac_ns.hh>
#include <subsense/generators.hh>
#include <subsense/oracle.hh>

using namespace subsense;
using namespace subsense::testing;

TEST_CASE("globally consistent instances are left alone by AC")
{
    for (const auto & inst : {generators::figure1a(), generators::figure1b(), generators::figure1c()}) {
        auto r = establish_ac(inst);
        CHECK(r.trace.steps.empty());
        CHECK(r.instance == inst);
        CHECK_FALSE(has_ac_removal(inst));
    }
}

TEST_CASE("AC removes an unsupported value")
{
    auto r = establish_ac(equality_pair({0}, {0, 1}));
    REQUIRE(r.trace.steps.size() == 1);
    CHECK(r.trace.steps[0].variable == 1);
    CHECK(r.trace.steps[0].value == 1);
    CHECK(std::get<AcWitness>(r.trace.steps[0].witness).unsupported_at == 0);
    CHECK_FALSE(r.report.unsatisfiable);
}

TEST_CASE("AC flags a wipe-out")
{
    // x1 = x2 = x3 with x1 in {0}, x3 in {1}
    Instance::Builder b;
    b.add_variable("x1", {0});
    b.add_variable("x2", {0, 1});
    b.add_variable("x3", {1});
    auto eq = [](int p, int q) { return p == q; };
    b.add_constraint(0, 1, eq);
    b.add_constraint(1, 2, eq);
    auto r = establish_ac(b.build());
    CHECK(r.report.unsatisfiable);
    CHECK(r.instance.has_empty_domain());
}

TEST_CASE("AC closure matches the oracle on the corpus")
{
    for (const auto & entry : corpus(300)) {
        auto r = establish_ac(entry.instance);
        REQUIRE_FALSE(certify_trace(entry.instance, r.trace).has_value());
        if (! r.report.unsatisfiable)
            REQUIRE_FALSE(has_ac_removal(r.instance));
        REQUIRE(oracle::satisfiable(r.instance) == oracle::satisfiable(entry.instance));
    }
}

TEST_CASE("NS cannot touch the boolean instance")
{
    auto r = ns_to_convergence(generators::figure1a());
    CHECK(r.trace.steps.empty());
}

TEST_CASE("NS on the two-variable disjunction")
{
    auto r = ns_to_convergence(generators::two_var_cns_vs_ns(4));
    CHECK(r.report.total() == 5);
    CHECK(values(r.instance, 1) == std::vector<int>{0});
    CHECK(r.instance.domain(0).size() == 1);
    // the first three steps clear x2 down to 0
    for (int s = 0; s < 3; ++s)
        CHECK(r.trace.steps[s].variable == 1);
}

TEST_CASE("NS makes unconstrained domains singletons")
{
    auto r = ns_to_convergence(isolated(3, {0, 1, 2, 3}));
    CHECK(all_singletons(r.instance));
    CHECK(r.report.count(Rule::ns) == 9);
}

TEST_CASE("NS fixpoint leaves nothing NS-eliminable")
{
    for (const auto & entry : corpus(300)) {
        auto ac = establish_ac(entry.instance);
        if (ac.report.unsatisfiable)
            continue;
        auto r = ns_to_convergence(ac.instance, {true, false});
        REQUIRE_FALSE(certify_trace(ac.instance, r.trace).has_value());
        REQUIRE(oracle::all_eliminable(r.instance, Rule::ns).empty());
    }
}
