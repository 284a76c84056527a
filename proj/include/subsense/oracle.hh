#pragma once

// Ground truth by direct evaluation of the substitution definitions and by
// exhaustive search. Nothing here shares code with the counter engines.

#include <subsense/core.hh>
#include <subsense/trace.hh>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace subsense::oracle
{
    class SearchCapExceeded : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    using Solution = std::vector<int>;

    inline constexpr std::uint64_t default_node_cap = 100'000'000;

    /// Up to `limit` solutions in lexicographic order of value positions.
    [[nodiscard]] auto solve(const Instance & inst, std::size_t limit, std::uint64_t node_cap = default_node_cap)
        -> std::vector<Solution>;
    [[nodiscard]] auto satisfiable(const Instance & inst, std::uint64_t node_cap = default_node_cap) -> bool;
    [[nodiscard]] auto is_solution(const Instance & inst, const Solution & s) -> bool;

    // b ->(ij) a over the current domain of j. Values, not positions.
    [[nodiscard]] auto arrow(const Instance & inst, VarId i, VarId j, int b, int a) -> bool;

    // b ~>(ik) a. When it holds, returns (d, smallest e) for every d in D(x_k) compatible with b.
    [[nodiscard]] auto snake_arrow(const Instance & inst, VarId i, VarId k, int b, int a)
        -> std::optional<std::vector<std::pair<int, int>>>;

    [[nodiscard]] auto has_support(const Instance & inst, VarId i, int b, VarId j) -> bool;

    [[nodiscard]] auto is_ac_removable(const Instance & inst, VarId i, int b) -> std::optional<AcWitness>;
    [[nodiscard]] auto is_ns(const Instance & inst, VarId i, int b) -> std::optional<NsWitness>;
    [[nodiscard]] auto is_ss(const Instance & inst, VarId i, int b) -> std::optional<SsWitness>;

    // Without a forced conditioning variable, j ranges over the edge neighbours
    // of i in ascending order; an isolated i (n >= 2) falls back to the
    // smallest other variable, where the definition reduces to NS / SS.
    [[nodiscard]] auto is_cns(const Instance & inst, VarId i, int b, std::optional<VarId> conditioning = std::nullopt)
        -> std::optional<CnsWitness>;
    [[nodiscard]] auto is_scss(const Instance & inst, VarId i, int b, std::optional<VarId> conditioning = std::nullopt)
        -> std::optional<ScssWitness>;

    /// Generic dispatch used by replay and the property suites.
    [[nodiscard]] auto eliminable(const Instance & inst, VarId i, int b, Rule rule,
        std::optional<VarId> conditioning = std::nullopt) -> std::optional<Witness>;

    /// Every (variable, value) currently removable by `rule`.
    [[nodiscard]] auto all_eliminable(const Instance & inst, Rule rule) -> std::vector<std::pair<VarId, int>>;

    [[nodiscard]] auto preserves_satisfiability(const Instance & inst, VarId i, int b,
        std::uint64_t node_cap = default_node_cap) -> bool;

    struct LongestOptions
    {
        // When set, NS eliminations must be exhausted before any other rule applies.
        bool ns_priority = false;
        // When set, only eliminations from this variable are considered.
        std::optional<VarId> only_variable;
        std::uint64_t state_cap = 1'000'000;
    };

    /// Maximum number of eliminations by `rule` over every order of application.
    [[nodiscard]] auto longest_elimination_sequence(const Instance & inst, Rule rule, const LongestOptions & options = {})
        -> int;
}
