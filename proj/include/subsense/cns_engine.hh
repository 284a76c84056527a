#pragma once

#include <subsense/core.hh>
#include <subsense/network.hh>
#include <subsense/trace.hh>

#include <deque>
#include <tuple>
#include <vector>

namespace subsense
{
    /// Conditioned neighbourhood substitution until convergence.
    ///
    /// NbCovers(i,b,j,c) counts the a != b in D(x_i) with (a,c) in R_ij whose
    /// block variables for (b,a) lie within {x_j}. Uncovered(i,b,j) holds the
    /// c compatible with b that have no cover; b is CNS-eliminable conditioned
    /// on x_j once it is empty. NS eliminations are found through BlockVars
    /// and, by default, processed before CNS ones.
    class CnsEngine
    {
    public:
        explicit CnsEngine(const Instance & inst, EngineOptions options = {});

        [[nodiscard]] auto nb_covers(VarId i, ValueIdx b, VarId j, ValueIdx c) const -> int;
        [[nodiscard]] auto uncovered(VarId i, ValueIdx b, VarId j) const -> std::vector<ValueIdx>;

        /// Pending NS entries (i, b, a) and CNS entries (i, b, j).
        [[nodiscard]] auto ns_list() const -> std::vector<std::tuple<VarId, ValueIdx, ValueIdx>>;
        [[nodiscard]] auto cns_list() const -> std::vector<std::tuple<VarId, ValueIdx, VarId>>;

        auto check_counters() const -> void;

        [[nodiscard]] auto current() const -> Instance { return run_.snapshot(); }

        [[nodiscard]] auto run() -> Reduction;

    private:
        auto slot(VarId i, VarId j) const -> int;
        auto gain_cover(VarId i, int s, ValueIdx b, ValueIdx a) -> void;
        auto mark_covered(VarId i, int s, ValueIdx b, ValueIdx c) -> void;
        auto propagate(VarId p, ValueIdx u) -> void;
        auto pop_ns() -> bool;
        auto pop_cns() -> bool;

        const Instance & source_;
        EngineOptions options_;
        Network net_;
        EngineRun run_;
        BlockTable blocks_;
        std::vector<std::vector<std::vector<int>>> covers_;     // [i][slot][b * |D_j| + c]
        std::vector<std::vector<std::vector<char>>> open_;      // [i][slot][b * |D_j| + c]: c in Uncovered(i,b,j)
        std::vector<std::vector<std::vector<int>>> open_count_; // [i][slot][b]
        std::deque<std::tuple<VarId, ValueIdx, ValueIdx>> ns_;
        std::deque<std::tuple<VarId, ValueIdx, int>> cns_;
    };

    [[nodiscard]] auto cns_to_convergence(const Instance & inst, const EngineOptions & options = {}) -> Reduction;
}
