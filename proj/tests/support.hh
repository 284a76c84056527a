#pragma once

// Shared fixtures for the test binaries: the random corpus, small hand-built
// instances, and replay of engine traces through the definition oracle.

#include <subsense/core.hh>
#include <subsense/generators.hh>
#include <subsense/oracle.hh>
#include <subsense/trace.hh>

#include <optional>
#include <string>
#include <vector>

namespace subsense::testing
{
    struct CorpusEntry
    {
        int n, d;
        double density, tightness;
        std::uint64_t seed;
        Instance instance;
    };

    // n <= 6, d <= 4 over a density/tightness grid; deterministic.
    inline auto corpus(int count, std::uint64_t base_seed = 1) -> std::vector<CorpusEntry>
    {
        static const double densities[] = {0.3, 0.6, 1.0};
        static const double tightnesses[] = {0.3, 0.5, 0.7, 0.9};
        std::vector<CorpusEntry> out;
        for (int k = 0; k < count; ++k) {
            int n = 1 + k % 6;
            int d = 2 + (k / 6) % 3;
            double density = densities[(k / 18) % 3];
            double tightness = tightnesses[(k / 54) % 4];
            auto seed = base_seed + static_cast<std::uint64_t>(k);
            out.push_back({n, d, density, tightness, seed, generators::random_instance(n, d, density, tightness, seed)});
        }
        return out;
    }

    inline auto conditioning_of(const Witness & w) -> std::optional<VarId>
    {
        if (auto * ac = std::get_if<AcWitness>(&w))
            return ac->unsupported_at;
        if (auto * c = std::get_if<CnsWitness>(&w))
            return c->conditioning;
        if (auto * s = std::get_if<ScssWitness>(&w))
            return s->conditioning;
        return std::nullopt;
    }

    /// Replays a trace from `start`, certifying every step by its logged rule
    /// (and conditioning) on the state just before it. Returns a description
    /// of the first failure, or nothing.
    inline auto certify_trace(const Instance & start, const Trace & trace) -> std::optional<std::string>
    {
        Instance current = start;
        for (const auto & step : trace.steps) {
            if (! current.contains(step.variable, step.value))
                return "step " + std::to_string(step.step) + ": value already gone";
            if (! oracle::eliminable(current, step.variable, step.value, step.rule(), conditioning_of(step.witness)))
                return "step " + std::to_string(step.step) + ": " + rule_name(step.rule()) + " removal of " + std::to_string(step.value)
                    + " from variable " + std::to_string(step.variable) + " not certified";
            current = current.remove_value(step.variable, step.value);
        }
        return std::nullopt;
    }

    inline auto all_singletons(const Instance & inst) -> bool
    {
        for (VarId i = 0; i < inst.num_variables(); ++i)
            if (inst.domain(i).size() != 1)
                return false;
        return true;
    }

    inline auto values(const Instance & inst, VarId i) -> std::vector<int> { return inst.current_values(i); }

    // Two variables with x1 = x2 over the given domains.
    inline auto equality_pair(std::vector<int> d1, std::vector<int> d2) -> Instance
    {
        Instance::Builder b{"equality"};
        b.add_variable("x1", std::move(d1));
        b.add_variable("x2", std::move(d2));
        b.add_constraint(0, 1, [](int p, int q) { return p == q; });
        return b.build();
    }

    // x1 = x2 = x3 over {0, 1}: nothing is substitutable under any rule.
    inline auto equality_triangle() -> Instance
    {
        Instance::Builder b{"equality_triangle"};
        for (int i = 0; i < 3; ++i)
            b.add_variable("x" + std::to_string(i + 1), {0, 1});
        auto eq = [](int p, int q) { return p == q; };
        b.add_constraint(0, 1, eq);
        b.add_constraint(1, 2, eq);
        b.add_constraint(0, 2, eq);
        return b.build();
    }

    // Variables without any constraint.
    inline auto isolated(int n, std::vector<int> domain) -> Instance
    {
        Instance::Builder b{"isolated"};
        for (int i = 0; i < n; ++i)
            b.add_variable("x" + std::to_string(i + 1), domain);
        return b.build();
    }
}
