#pragma once

#include <subsense/core.hh>
#include <subsense/network.hh>
#include <subsense/trace.hh>

#include <deque>
#include <optional>
#include <utility>
#include <vector>

namespace subsense
{
    /// Snake substitution until convergence.
    ///
    /// Terminology, for b in D(x_i) being replaced by a:
    ///  - a block is a value f at x_l with (d,f) in R_kl and (e,f) not in R_kl,
    ///    i.e. evidence against replacing d by e at x_k;
    ///  - a sub of d in D(x_k) for a is a value e compatible with a whose only
    ///    possible block variable is x_i;
    ///  - a stop is a d compatible with b, incompatible with a, with no sub.
    /// b is snake substitutable by a exactly when no edge neighbour holds a stop.
    ///
    /// The constructor initialises every counter from its definition; run()
    /// propagates eliminations through them. Values are positions in the
    /// original domains; variables are ids.
    class SsEngine
    {
    public:
        explicit SsEngine(const Instance & inst, EngineOptions options = {});

        [[nodiscard]] auto nb_blocks(VarId k, ValueIdx d, ValueIdx e, VarId l) const -> int;
        [[nodiscard]] auto block_vars(VarId k, ValueIdx d, ValueIdx e) const -> std::vector<VarId>;
        [[nodiscard]] auto nb_subs(VarId i, ValueIdx a, VarId k, ValueIdx d) const -> int;
        [[nodiscard]] auto nb_stops(VarId i, ValueIdx a, ValueIdx b, VarId k) const -> int;
        [[nodiscard]] auto nb_stop_vars(VarId i, ValueIdx a, ValueIdx b) const -> int;
        [[nodiscard]] auto nb_snake(VarId i, ValueIdx b) const -> int;
        [[nodiscard]] auto inconsistent(VarId i, ValueIdx b) const -> bool;

        /// Pending (variable, value) entries: head class first, then tail.
        [[nodiscard]] auto worklist() const -> std::vector<std::pair<VarId, ValueIdx>>;

        // Counter maintenance for NbStops(i,a,b,k) and its cascade into
        // NbStopVars, NbSnake and the worklist tail.
        auto dec_stops(VarId i, ValueIdx a, ValueIdx b, VarId k) -> void;
        auto inc_stops(VarId i, ValueIdx a, ValueIdx b, VarId k) -> void;

        /// Throws CounterMismatch unless every counter family matches its definition.
        auto check_counters() const -> void;

        [[nodiscard]] auto current() const -> Instance { return run_.snapshot(); }
        [[nodiscard]] auto updates() const -> std::uint64_t;

        /// Processes the worklist until it is empty.
        [[nodiscard]] auto run() -> Reduction;

    private:
        auto slot(VarId i, VarId k) const -> int;
        auto subs_at(VarId i, int s, ValueIdx a, ValueIdx d) -> int &;
        auto stops_at(VarId i, int s, ValueIdx a, ValueIdx b) -> int &;

        auto gain_sub(VarId k, int s, ValueIdx d, ValueIdx e) -> void;
        auto inc_subs(VarId i, int s, ValueIdx a, ValueIdx d) -> void;
        auto dec_subs(VarId i, int s, ValueIdx a, ValueIdx d) -> void;
        auto dec_stops_slot(VarId i, int s, ValueIdx a, ValueIdx b) -> void;
        auto inc_stops_slot(VarId i, int s, ValueIdx a, ValueIdx b) -> void;

        auto witness_for(VarId r, ValueIdx u) const -> Witness;
        auto propagate(VarId r, ValueIdx u, bool removed_by_ac) -> void;

        const Instance & source_;
        EngineOptions options_;
        Network net_;
        EngineRun run_;
        BlockTable blocks_;
        std::vector<std::vector<std::vector<int>>> subs_;  // [i][slot][a * |D_k| + d], only (a,d) not in R_ik
        std::vector<std::vector<std::vector<int>>> stops_; // [i][slot][a * |D_i| + b]
        std::vector<std::vector<int>> stop_vars_;          // [i][a * |D_i| + b]
        std::vector<std::vector<int>> snake_;              // [i][b]
        std::vector<std::vector<char>> inconsistent_;      // [i][b]
        std::deque<std::pair<VarId, ValueIdx>> head_;
        std::deque<std::pair<VarId, ValueIdx>> tail_;
    };

    /// Runs SsEngine on `inst` (which should already be arc consistent).
    [[nodiscard]] auto ss_to_convergence(const Instance & inst, const EngineOptions & options = {}) -> Reduction;
}
