#include <subsense/oracle.hh>

#include <map>
#include <string>

using std::nullopt;
using std::optional;
using std::pair;
using std::vector;

namespace subsense::oracle
{
    namespace
    {
        auto position(const Instance & inst, VarId i, int value) -> ValueIdx
        {
            auto v = inst.index_of(i, value);
            if (! v)
                throw InstanceError("value " + std::to_string(value) + " is not in the original domain of " + inst.variable_name(i));
            return *v;
        }

        auto require_current(const Instance & inst, VarId i, int value) -> ValueIdx
        {
            auto v = position(inst, i, value);
            if (! inst.domain(i).contains(v))
                throw InstanceError("value " + std::to_string(value) + " is not in the current domain of " + inst.variable_name(i));
            return v;
        }

        // b ->(ij) a
        auto arrow_idx(const Instance & inst, VarId i, VarId j, ValueIdx b, ValueIdx a) -> bool
        {
            const auto & dj = inst.domain(j);
            for (ValueIdx c = 0; c < dj.capacity(); ++c)
                if (dj.contains(c) && inst.allows_idx(i, b, j, c) && ! inst.allows_idx(i, a, j, c))
                    return false;
            return true;
        }

        // d ->(kl) e for every l outside {skip, k}
        auto dominates_elsewhere(const Instance & inst, VarId k, ValueIdx d, ValueIdx e, VarId skip) -> bool
        {
            for (VarId l = 0; l < inst.num_variables(); ++l)
                if (l != k && l != skip && ! arrow_idx(inst, k, l, d, e))
                    return false;
            return true;
        }

        auto smallest_snake_target(const Instance & inst, VarId i, VarId k, ValueIdx a, ValueIdx d) -> optional<ValueIdx>
        {
            const auto & dk = inst.domain(k);
            for (ValueIdx e = 0; e < dk.capacity(); ++e)
                if (dk.contains(e) && inst.allows_idx(i, a, k, e) && dominates_elsewhere(inst, k, d, e, i))
                    return e;
            return nullopt;
        }

        // b ~>(ik) a; fills (d, e) pairs for each d compatible with b
        auto snake_idx(const Instance & inst, VarId i, VarId k, ValueIdx b, ValueIdx a, vector<pair<ValueIdx, ValueIdx>> * map)
            -> bool
        {
            const auto & dk = inst.domain(k);
            for (ValueIdx d = 0; d < dk.capacity(); ++d) {
                if (! dk.contains(d) || ! inst.allows_idx(i, b, k, d))
                    continue;
                auto e = smallest_snake_target(inst, i, k, a, d);
                if (! e)
                    return false;
                if (map)
                    map->emplace_back(d, *e);
            }
            return true;
        }

        auto swaps_for(const Instance & inst, VarId i, ValueIdx b, ValueIdx a, VarId skip) -> vector<SnakeSwap>
        {
            vector<SnakeSwap> swaps;
            for (VarId k = 0; k < inst.num_variables(); ++k) {
                if (k == i || k == skip)
                    continue;
                vector<pair<ValueIdx, ValueIdx>> map;
                snake_idx(inst, i, k, b, a, &map);
                for (auto [d, e] : map)
                    if (! inst.allows_idx(i, a, k, d))
                        swaps.push_back({k, inst.value_at(k, d), inst.value_at(k, e)});
            }
            return swaps;
        }

        auto conditioning_candidates(const Instance & inst, VarId i, optional<VarId> forced) -> vector<VarId>
        {
            if (forced) {
                if (*forced == i || *forced < 0 || *forced >= inst.num_variables())
                    throw InstanceError("conditioning variable must be another variable of the instance");
                return {*forced};
            }
            auto nb = inst.neighbours(i);
            vector<VarId> result(nb.begin(), nb.end());
            if (result.empty() && inst.num_variables() >= 2)
                result.push_back(i == 0 ? 1 : 0);
            return result;
        }

        auto cns_for(const Instance & inst, VarId i, ValueIdx b, VarId j) -> optional<CnsWitness>
        {
            const auto & di = inst.domain(i);
            const auto & dj = inst.domain(j);
            // a is usable iff b ->(ik) a for every k outside {i, j}
            vector<char> usable(di.capacity(), 0);
            for (ValueIdx a = 0; a < di.capacity(); ++a) {
                if (a == b || ! di.contains(a))
                    continue;
                bool ok = true;
                for (VarId k = 0; k < inst.num_variables() && ok; ++k)
                    if (k != i && k != j)
                        ok = arrow_idx(inst, i, k, b, a);
                usable[a] = ok;
            }
            CnsWitness w{j, {}};
            for (ValueIdx c = 0; c < dj.capacity(); ++c) {
                if (! dj.contains(c) || ! inst.allows_idx(i, b, j, c))
                    continue;
                optional<ValueIdx> cover;
                for (ValueIdx a = 0; a < di.capacity() && ! cover; ++a)
                    if (usable[a] && inst.allows_idx(i, a, j, c))
                        cover = a;
                if (! cover)
                    return nullopt;
                w.covers.push_back({inst.value_at(j, c), inst.value_at(i, *cover)});
            }
            return w;
        }

        auto scss_for(const Instance & inst, VarId i, ValueIdx b, VarId j) -> optional<ScssWitness>
        {
            const auto & di = inst.domain(i);
            const auto & dj = inst.domain(j);
            vector<char> usable(di.capacity(), 0);
            for (ValueIdx a = 0; a < di.capacity(); ++a) {
                if (a == b || ! di.contains(a))
                    continue;
                bool ok = true;
                for (VarId k = 0; k < inst.num_variables() && ok; ++k)
                    if (k != i && k != j)
                        ok = snake_idx(inst, i, k, b, a, nullptr);
                usable[a] = ok;
            }
            ScssWitness w{j, {}};
            for (ValueIdx c = 0; c < dj.capacity(); ++c) {
                if (! dj.contains(c) || ! inst.allows_idx(i, b, j, c))
                    continue;
                optional<pair<ValueIdx, ValueIdx>> found;
                for (ValueIdx a = 0; a < di.capacity() && ! found; ++a) {
                    if (! usable[a])
                        continue;
                    for (ValueIdx g = 0; g < dj.capacity(); ++g)
                        if (dj.contains(g) && inst.allows_idx(i, a, j, g) && dominates_elsewhere(inst, j, c, g, i)) {
                            found = pair{a, g};
                            break;
                        }
                }
                if (! found)
                    return nullopt;
                auto [a, g] = *found;
                w.covers.push_back({inst.value_at(j, c), inst.value_at(i, a), inst.value_at(j, g), swaps_for(inst, i, b, a, j)});
            }
            return w;
        }

        struct Search
        {
            const Instance & inst;
            std::size_t limit;
            std::uint64_t cap;
            std::uint64_t nodes = 0;
            vector<ValueIdx> assignment;
            vector<Solution> found;

            auto run(VarId var) -> void
            {
                if (found.size() >= limit)
                    return;
                if (++nodes > cap)
                    throw SearchCapExceeded("search exceeded " + std::to_string(cap) + " nodes");
                if (var == inst.num_variables()) {
                    Solution s;
                    for (VarId i = 0; i < var; ++i)
                        s.push_back(inst.value_at(i, assignment[i]));
                    found.push_back(std::move(s));
                    return;
                }
                const auto & dom = inst.domain(var);
                for (ValueIdx v = 0; v < dom.capacity(); ++v) {
                    if (! dom.contains(v))
                        continue;
                    bool ok = true;
                    for (VarId prev = 0; prev < var && ok; ++prev)
                        ok = inst.allows_idx(var, v, prev, assignment[prev]);
                    if (! ok)
                        continue;
                    assignment[var] = v;
                    run(var + 1);
                    if (found.size() >= limit)
                        return;
                }
            }
        };
    }

    auto solve(const Instance & inst, std::size_t limit, std::uint64_t node_cap) -> vector<Solution>
    {
        Search search{inst, limit, node_cap, 0, vector<ValueIdx>(inst.num_variables(), 0), {}};
        if (limit == 0 || inst.has_empty_domain())
            return {};
        search.run(0);
        return search.found;
    }

    auto satisfiable(const Instance & inst, std::uint64_t node_cap) -> bool
    {
        return ! solve(inst, 1, node_cap).empty();
    }

    auto is_solution(const Instance & inst, const Solution & s) -> bool
    {
        if (static_cast<int>(s.size()) != inst.num_variables())
            return false;
        for (VarId i = 0; i < inst.num_variables(); ++i)
            if (! inst.contains(i, s[i]))
                return false;
        for (VarId i = 0; i < inst.num_variables(); ++i)
            for (VarId j = i + 1; j < inst.num_variables(); ++j)
                if (! inst.allows(i, s[i], j, s[j]))
                    return false;
        return true;
    }

    auto arrow(const Instance & inst, VarId i, VarId j, int b, int a) -> bool
    {
        if (i == j)
            throw InstanceError("arrow() needs two distinct variables");
        return arrow_idx(inst, i, j, position(inst, i, b), position(inst, i, a));
    }

    auto snake_arrow(const Instance & inst, VarId i, VarId k, int b, int a) -> optional<vector<pair<int, int>>>
    {
        if (i == k)
            throw InstanceError("snake_arrow() needs two distinct variables");
        vector<pair<ValueIdx, ValueIdx>> map;
        if (! snake_idx(inst, i, k, position(inst, i, b), position(inst, i, a), &map))
            return nullopt;
        vector<pair<int, int>> result;
        for (auto [d, e] : map)
            result.emplace_back(inst.value_at(k, d), inst.value_at(k, e));
        return result;
    }

    auto has_support(const Instance & inst, VarId i, int b, VarId j) -> bool
    {
        auto bi = position(inst, i, b);
        const auto & dj = inst.domain(j);
        for (ValueIdx c = 0; c < dj.capacity(); ++c)
            if (dj.contains(c) && inst.allows_idx(i, bi, j, c))
                return true;
        return false;
    }

    auto is_ac_removable(const Instance & inst, VarId i, int b) -> optional<AcWitness>
    {
        require_current(inst, i, b);
        for (VarId j = 0; j < inst.num_variables(); ++j)
            if (j != i && ! has_support(inst, i, b, j))
                return AcWitness{j};
        return nullopt;
    }

    auto is_ns(const Instance & inst, VarId i, int b) -> optional<NsWitness>
    {
        auto bi = require_current(inst, i, b);
        const auto & di = inst.domain(i);
        for (ValueIdx a = 0; a < di.capacity(); ++a) {
            if (a == bi || ! di.contains(a))
                continue;
            bool ok = true;
            for (VarId j = 0; j < inst.num_variables() && ok; ++j)
                if (j != i)
                    ok = arrow_idx(inst, i, j, bi, a);
            if (ok)
                return NsWitness{inst.value_at(i, a)};
        }
        return nullopt;
    }

    auto is_ss(const Instance & inst, VarId i, int b) -> optional<SsWitness>
    {
        auto bi = require_current(inst, i, b);
        const auto & di = inst.domain(i);
        for (ValueIdx a = 0; a < di.capacity(); ++a) {
            if (a == bi || ! di.contains(a))
                continue;
            bool ok = true;
            for (VarId k = 0; k < inst.num_variables() && ok; ++k)
                if (k != i)
                    ok = snake_idx(inst, i, k, bi, a, nullptr);
            if (ok)
                return SsWitness{inst.value_at(i, a), swaps_for(inst, i, bi, a, -1)};
        }
        return nullopt;
    }

    auto is_cns(const Instance & inst, VarId i, int b, optional<VarId> conditioning) -> optional<CnsWitness>
    {
        auto bi = require_current(inst, i, b);
        for (VarId j : conditioning_candidates(inst, i, conditioning))
            if (auto w = cns_for(inst, i, bi, j))
                return w;
        return nullopt;
    }

    auto is_scss(const Instance & inst, VarId i, int b, optional<VarId> conditioning) -> optional<ScssWitness>
    {
        auto bi = require_current(inst, i, b);
        for (VarId j : conditioning_candidates(inst, i, conditioning))
            if (auto w = scss_for(inst, i, bi, j))
                return w;
        return nullopt;
    }

    auto eliminable(const Instance & inst, VarId i, int b, Rule rule, optional<VarId> conditioning) -> optional<Witness>
    {
        switch (rule) {
        case Rule::ac:
            if (conditioning) {
                require_current(inst, i, b);
                if (*conditioning != i && ! has_support(inst, i, b, *conditioning))
                    return Witness{AcWitness{*conditioning}};
                return nullopt;
            }
            if (auto w = is_ac_removable(inst, i, b))
                return Witness{*w};
            return nullopt;
        case Rule::ns:
            if (auto w = is_ns(inst, i, b))
                return Witness{*w};
            return nullopt;
        case Rule::ss:
            if (auto w = is_ss(inst, i, b))
                return Witness{*w};
            return nullopt;
        case Rule::cns:
            if (auto w = is_cns(inst, i, b, conditioning))
                return Witness{*w};
            return nullopt;
        case Rule::scss:
            if (auto w = is_scss(inst, i, b, conditioning))
                return Witness{*w};
            return nullopt;
        }
        return nullopt;
    }

    auto all_eliminable(const Instance & inst, Rule rule) -> vector<pair<VarId, int>>
    {
        vector<pair<VarId, int>> result;
        for (VarId i = 0; i < inst.num_variables(); ++i)
            for (int b : inst.current_values(i))
                if (eliminable(inst, i, b, rule))
                    result.emplace_back(i, b);
        return result;
    }

    auto preserves_satisfiability(const Instance & inst, VarId i, int b, std::uint64_t node_cap) -> bool
    {
        return satisfiable(inst, node_cap) == satisfiable(inst.remove_value(i, b), node_cap);
    }

    namespace
    {
        struct LongestSearch
        {
            Rule rule;
            const LongestOptions & options;
            std::map<vector<DomainSet>, int> memo;

            auto candidates(const Instance & inst, Rule r) const -> vector<pair<VarId, int>>
            {
                vector<pair<VarId, int>> result;
                for (VarId i = 0; i < inst.num_variables(); ++i) {
                    if (options.only_variable && *options.only_variable != i)
                        continue;
                    for (int b : inst.current_values(i))
                        if (eliminable(inst, i, b, r))
                            result.emplace_back(i, b);
                }
                return result;
            }

            auto run(const Instance & inst) -> int
            {
                if (auto it = memo.find(inst.domains()); it != memo.end())
                    return it->second;
                if (memo.size() >= options.state_cap)
                    throw SearchCapExceeded("longest-sequence search exceeded " + std::to_string(options.state_cap) + " states");

                vector<pair<VarId, int>> moves;
                if (options.ns_priority && rule != Rule::ns)
                    moves = candidates(inst, Rule::ns);
                if (moves.empty())
                    moves = candidates(inst, rule);

                int best = 0;
                for (auto [i, b] : moves)
                    best = std::max(best, 1 + run(inst.remove_value(i, b)));
                memo.emplace(inst.domains(), best);
                return best;
            }
        };
    }

    auto longest_elimination_sequence(const Instance & inst, Rule rule, const LongestOptions & options) -> int
    {
        LongestSearch search{rule, options, {}};
        return search.run(inst);
    }
}
