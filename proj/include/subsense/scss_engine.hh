#pragma once

#include <subsense/core.hh>
#include <subsense/network.hh>
#include <subsense/trace.hh>

#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace subsense
{
    /// Snake-conditioned snake substitution until convergence.
    ///
    /// On top of the snake counters (NbSubs, NbStops), StopVars(i,a,b) is the
    /// set of edge neighbours holding a stop for replacing b by a, kept as a
    /// size and a slot sum like BlockVars. NbSnakeCovers(i,b,j,c) counts the
    /// a != b whose stop variables lie within {x_j} and which either support
    /// c or have a sub for c. NotSnakeCovered(i,b,j) holds the c compatible
    /// with b without any such a; b is eliminable conditioned on x_j once it
    /// is empty.
    class ScssEngine
    {
    public:
        explicit ScssEngine(const Instance & inst, EngineOptions options = {});

        [[nodiscard]] auto nb_subs(VarId i, ValueIdx a, VarId k, ValueIdx d) const -> int;
        [[nodiscard]] auto nb_stops(VarId i, ValueIdx a, ValueIdx b, VarId k) const -> int;
        [[nodiscard]] auto stop_vars(VarId i, ValueIdx a, ValueIdx b) const -> std::vector<VarId>;
        [[nodiscard]] auto nb_snake_covers(VarId i, ValueIdx b, VarId j, ValueIdx c) const -> int;
        [[nodiscard]] auto not_snake_covered(VarId i, ValueIdx b, VarId j) const -> std::vector<ValueIdx>;

        /// Pending (i, b, j) entries.
        [[nodiscard]] auto elim_list() const -> std::vector<std::tuple<VarId, ValueIdx, VarId>>;

        auto check_counters() const -> void;

        [[nodiscard]] auto current() const -> Instance { return run_.snapshot(); }

        [[nodiscard]] auto run() -> Reduction;

    private:
        auto slot(VarId i, VarId k) const -> int;
        auto sub_or_allowed(VarId i, int s, ValueIdx a, ValueIdx c) const -> bool;
        auto stop_within(VarId i, ValueIdx a, ValueIdx b, int s) const -> bool;

        auto gain_sub(VarId k, int s, ValueIdx d, ValueIdx e) -> void;
        auto inc_subs(VarId i, int s, ValueIdx a, ValueIdx d) -> void;
        auto dec_subs(VarId i, int s, ValueIdx a, ValueIdx d) -> void;
        auto inc_stops(VarId i, int s, ValueIdx a, ValueIdx b) -> void;
        auto dec_stops(VarId i, int s, ValueIdx a, ValueIdx b) -> void;
        auto shift_covers(VarId i, int s, ValueIdx a, ValueIdx b, int delta) -> void;
        auto inc_snake_covers(VarId i, int s, ValueIdx b, ValueIdx c) -> void;
        auto dec_snake_covers(VarId i, int s, ValueIdx b, ValueIdx c) -> void;

        auto witness_for(VarId r, ValueIdx u, int t) const -> ScssWitness;
        auto propagate(VarId r, ValueIdx u) -> void;
        auto eliminate_isolated() -> void;

        const Instance & source_;
        EngineOptions options_;
        Network net_;
        EngineRun run_;
        BlockTable blocks_;
        std::vector<std::vector<std::vector<int>>> subs_;        // [i][slot][a * |D_k| + d]
        std::vector<std::vector<std::vector<int>>> stops_;       // [i][slot][a * |D_i| + b]
        std::vector<std::vector<int>> stop_count_;               // [i][a * |D_i| + b]
        std::vector<std::vector<int>> stop_sum_;                 // [i][a * |D_i| + b]
        std::vector<std::vector<std::vector<int>>> covers_;      // [i][slot][b * |D_j| + c]
        std::vector<std::vector<std::vector<char>>> open_;       // [i][slot][b * |D_j| + c]
        std::vector<std::vector<std::vector<int>>> open_count_;  // [i][slot][b]
        std::deque<std::tuple<VarId, ValueIdx, int>> pending_;
    };

    /// Every edge triple (i, b, j) currently eliminable by the rule, from a
    /// fresh counter initialisation.
    [[nodiscard]] auto check_scss(const Instance & inst) -> std::vector<std::tuple<VarId, int, VarId>>;

    [[nodiscard]] auto scss_to_convergence(const Instance & inst, const EngineOptions & options = {}) -> Reduction;

    /// One claimed elimination: `value` leaves D(x_variable) by `rule`,
    /// optionally conditioned on (or, for AC, unsupported at) `conditioning`.
    struct ReplayStep
    {
        VarId variable = 0;
        int value = 0;
        Rule rule = Rule::scss;
        std::optional<VarId> conditioning;
    };

    class ReplayError : public std::runtime_error
    {
    public:
        ReplayError(int step, Rule rule, const std::string & what) :
            std::runtime_error(what),
            step_(step),
            rule_(rule)
        {
        }

        // 1-based position of the first step that could not be certified
        [[nodiscard]] auto step() const -> int { return step_; }
        [[nodiscard]] auto rule() const -> Rule { return rule_; }

    private:
        int step_;
        Rule rule_;
    };

    /// Applies the steps in order, certifying each with the definition oracle
    /// at its moment. Throws ReplayError on the first step that is not
    /// certified; the input instance is never modified.
    [[nodiscard]] auto replay_sequence(const Instance & inst, const std::vector<ReplayStep> & steps)
        -> std::pair<Instance, Trace>;
}
