#pragma once

#include <subsense/core.hh>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace subsense
{
    /// A neighbour value d at `variable` replaced by e, as in the snake relation.
    struct SnakeSwap
    {
        VarId variable = 0;
        int from = 0;
        int to = 0;
        auto operator==(const SnakeSwap &) const -> bool = default;
    };

    struct AcWitness
    {
        VarId unsupported_at = 0;
        auto operator==(const AcWitness &) const -> bool = default;
    };

    struct NsWitness
    {
        int substitute = 0;
        auto operator==(const NsWitness &) const -> bool = default;
    };

    struct SsWitness
    {
        int substitute = 0;
        std::vector<SnakeSwap> swaps; // only for neighbour values incompatible with the substitute
        auto operator==(const SsWitness &) const -> bool = default;
    };

    struct CnsCover
    {
        int conditioning_value = 0;
        int substitute = 0;
        auto operator==(const CnsCover &) const -> bool = default;
    };

    struct CnsWitness
    {
        VarId conditioning = 0;
        std::vector<CnsCover> covers;
        auto operator==(const CnsWitness &) const -> bool = default;
    };

    struct ScssCover
    {
        int conditioning_value = 0;
        int substitute = 0;
        int conditioning_swap = 0;
        std::vector<SnakeSwap> swaps;
        auto operator==(const ScssCover &) const -> bool = default;
    };

    struct ScssWitness
    {
        VarId conditioning = 0;
        std::vector<ScssCover> covers;
        auto operator==(const ScssWitness &) const -> bool = default;
    };

    using Witness = std::variant<AcWitness, NsWitness, SsWitness, CnsWitness, ScssWitness>;

    [[nodiscard]] auto witness_rule(const Witness & w) -> Rule;

    struct EliminationRecord
    {
        int step = 0;
        VarId variable = 0;
        int value = 0;
        Witness witness;

        [[nodiscard]] auto rule() const -> Rule { return witness_rule(witness); }
        auto operator==(const EliminationRecord &) const -> bool = default;
    };

    struct Trace
    {
        std::string instance;
        std::vector<EliminationRecord> steps;

        auto append(VarId variable, int value, Witness witness) -> void;
        [[nodiscard]] auto count(Rule r) const -> int;
    };

    struct ReductionReport
    {
        std::array<int, 5> eliminations{};
        std::uint64_t updates = 0;
        std::uint64_t micros = 0;
        std::vector<int> initial_sizes;
        std::vector<int> final_sizes;
        bool unsatisfiable = false;
        // AC removals triggered by an AC removal inside the SS engine.
        int cascaded_ac = 0;

        [[nodiscard]] auto count(Rule r) const -> int { return eliminations[static_cast<int>(r)]; }
        [[nodiscard]] auto total() const -> int;
        auto record(Rule r) -> void { ++eliminations[static_cast<int>(r)]; }
        auto absorb(const ReductionReport & later) -> void;
    };

    /// Output of every engine: the reduced snapshot, its trace and counters.
    struct Reduction
    {
        Instance instance;
        Trace trace;
        ReductionReport report;
    };
}
