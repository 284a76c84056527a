#pragma once

#include <subsense/core.hh>
#include <subsense/trace.hh>

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace subsense
{
    /// Raised by the debug recomputation when an incremental counter disagrees
    /// with its from-scratch definition.
    class CounterMismatch : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    /// True when SUBSENSE_DEBUG_RECOMPUTE=1 is set in the environment.
    [[nodiscard]] auto debug_recompute_from_env() -> bool;

    struct EngineOptions
    {
        // Recompute every counter family after every elimination and throw
        // CounterMismatch on the first disagreement.
        bool debug_recompute = debug_recompute_from_env();
        // CNS engine only: drain the CNS list before the NS list.
        bool cns_first = false;
    };

    /// One direction of a non-trivial constraint, with its own copy of the
    /// relation oriented as (source value, target value).
    struct Arc
    {
        VarId target = 0;
        int reverse = 0; // slot of the source inside the target's arc list
        int cols = 0;
        std::vector<std::uint8_t> bits;

        [[nodiscard]] auto allows(ValueIdx mine, ValueIdx theirs) const -> bool { return bits[mine * cols + theirs] != 0; }
    };

    /// Adjacency view over the fixed edge set E, indexed by slots.
    class Network
    {
    public:
        explicit Network(const Instance & inst);

        [[nodiscard]] auto num_variables() const -> int { return static_cast<int>(arcs_.size()); }
        [[nodiscard]] auto size(VarId i) const -> int { return sizes_[i]; }
        [[nodiscard]] auto arcs(VarId i) const -> const std::vector<Arc> & { return arcs_[i]; }
        [[nodiscard]] auto arc(VarId i, int slot) const -> const Arc & { return arcs_[i][slot]; }
        [[nodiscard]] auto degree(VarId i) const -> int { return static_cast<int>(arcs_[i].size()); }
        // -1 when {i, j} is not an edge
        [[nodiscard]] auto slot_of(VarId i, VarId j) const -> int;

    private:
        std::vector<std::vector<Arc>> arcs_;
        std::vector<int> sizes_;
    };

    /// NbBlocks(k,d,e,l) and BlockVars(k,d,e), keyed by the slot of l in k's
    /// arc list. A BlockVars set is stored as its size plus the sum of its
    /// slots, which names the member whenever the set is a singleton.
    class BlockTable
    {
    public:
        enum class Change
        {
            none,
            emptied,
            singleton
        };

        BlockTable(const Network & net, const std::vector<DomainSet> & domains, std::uint64_t & updates);

        [[nodiscard]] auto blocks(VarId k, int slot, ValueIdx d, ValueIdx e) const -> int
        {
            return nb_blocks_[k][(slot * sizes_[k] + d) * sizes_[k] + e];
        }
        [[nodiscard]] auto var_count(VarId k, ValueIdx d, ValueIdx e) const -> int { return count_[k][d * sizes_[k] + e]; }
        // BlockVars(k,d,e) is a subset of {slot}
        [[nodiscard]] auto within(VarId k, ValueIdx d, ValueIdx e, int slot) const -> bool
        {
            auto at = d * sizes_[k] + e;
            return count_[k][at] == 0 || (count_[k][at] == 1 && sum_[k][at] == slot);
        }
        [[nodiscard]] auto empty(VarId k, ValueIdx d, ValueIdx e) const -> bool { return count_[k][d * sizes_[k] + e] == 0; }
        [[nodiscard]] auto singleton(VarId k, ValueIdx d, ValueIdx e) const -> int { return sum_[k][d * sizes_[k] + e]; }

        /// One block f at the variable behind `slot` has left its domain.
        auto remove_block(VarId k, int slot, ValueIdx d, ValueIdx e) -> Change;

        /// Throws CounterMismatch if any entry over current domains disagrees
        /// with the set-builder definition.
        auto check(const Network & net, const std::vector<DomainSet> & domains) const -> void;

    private:
        std::vector<int> sizes_;
        std::vector<std::vector<int>> nb_blocks_;
        std::vector<std::vector<int>> count_;
        std::vector<std::vector<int>> sum_;
        std::uint64_t * updates_;
    };

    /// Bookkeeping shared by every engine run: working domains, trace, report.
    class EngineRun
    {
    public:
        explicit EngineRun(const Instance & inst);

        [[nodiscard]] auto domains() -> std::vector<DomainSet> & { return domains_; }
        [[nodiscard]] auto domains() const -> const std::vector<DomainSet> & { return domains_; }
        [[nodiscard]] auto report() -> ReductionReport & { return report_; }
        [[nodiscard]] auto updates() -> std::uint64_t & { return report_.updates; }

        auto eliminate(VarId i, ValueIdx v, Witness w) -> void;
        [[nodiscard]] auto finish() -> Reduction;
        [[nodiscard]] auto source() const -> const Instance & { return source_; }
        [[nodiscard]] auto snapshot() const -> Instance { return source_.with_domains(domains_); }

    private:
        const Instance & source_;
        std::vector<DomainSet> domains_;
        Trace trace_;
        ReductionReport report_;
        std::chrono::steady_clock::time_point start_;
    };

    [[nodiscard]] auto mismatch(const std::string & family, std::initializer_list<int> index, long long expected, long long actual)
        -> CounterMismatch;
}
