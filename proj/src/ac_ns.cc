#include <subsense/ac_ns.hh>

#include <deque>
#include <tuple>

using std::deque;
using std::tuple;
using std::vector;

namespace subsense
{
    namespace
    {
        auto supported(const Arc & arc, ValueIdx v, const DomainSet & other) -> bool
        {
            for (ValueIdx c = 0; c < other.capacity(); ++c)
                if (other.contains(c) && arc.allows(v, c))
                    return true;
            return false;
        }

        // Non-edges only lose support when the other domain is empty.
        auto empty_elsewhere(const vector<DomainSet> & domains, VarId i) -> std::optional<VarId>
        {
            for (VarId j = 0; j < static_cast<VarId>(domains.size()); ++j)
                if (j != i && domains[j].empty())
                    return j;
            return std::nullopt;
        }
    }

    auto establish_ac(const Instance & inst) -> Reduction
    {
        Network net{inst};
        EngineRun run{inst};
        auto & domains = run.domains();
        auto n = inst.num_variables();

        if (empty_elsewhere(domains, -1)) {
            run.report().unsatisfiable = true;
            return run.finish();
        }

        // arcs (i, slot): revise D(x_i) against the target of slot
        deque<std::pair<VarId, int>> queue;
        vector<vector<char>> queued(n);
        for (VarId i = 0; i < n; ++i) {
            queued[i].assign(net.degree(i), 1);
            for (int s = 0; s < net.degree(i); ++s)
                queue.emplace_back(i, s);
        }

        while (! queue.empty()) {
            auto [i, s] = queue.front();
            queue.pop_front();
            queued[i][s] = 0;
            const auto & arc = net.arc(i, s);
            bool changed = false;
            for (ValueIdx v = 0; v < net.size(i); ++v) {
                if (! domains[i].contains(v))
                    continue;
                ++run.updates();
                if (! supported(arc, v, domains[arc.target])) {
                    run.eliminate(i, v, AcWitness{arc.target});
                    changed = true;
                }
            }
            if (domains[i].empty())
                return run.finish();
            if (changed)
                for (int t = 0; t < net.degree(i); ++t) {
                    const auto & back = net.arc(i, t);
                    if (t != s && ! queued[back.target][back.reverse]) {
                        queued[back.target][back.reverse] = 1;
                        queue.emplace_back(back.target, back.reverse);
                    }
                }
        }
        return run.finish();
    }

    auto has_ac_removal(const Instance & inst) -> bool
    {
        const auto & domains = inst.domains();
        for (VarId i = 0; i < inst.num_variables(); ++i) {
            if (domains[i].empty())
                continue;
            if (empty_elsewhere(domains, i))
                return true;
            for (VarId j : inst.neighbours(i))
                for (ValueIdx v = 0; v < domains[i].capacity(); ++v) {
                    if (! domains[i].contains(v))
                        continue;
                    bool ok = false;
                    for (ValueIdx c = 0; c < domains[j].capacity() && ! ok; ++c)
                        ok = domains[j].contains(c) && inst.allows_idx(i, v, j, c);
                    if (! ok)
                        return true;
                }
        }
        return false;
    }

    auto ns_to_convergence(const Instance & inst, const EngineOptions & options) -> Reduction
    {
        Network net{inst};
        EngineRun run{inst};
        auto & domains = run.domains();
        BlockTable blocks{net, domains, run.updates()};

        // (k, d, e): d is neighbourhood substitutable by e
        deque<tuple<VarId, ValueIdx, ValueIdx>> pending;
        for (VarId k = 0; k < net.num_variables(); ++k)
            for (ValueIdx d = 0; d < net.size(k); ++d)
                for (ValueIdx e = 0; e < net.size(k); ++e)
                    if (d != e && domains[k].contains(d) && domains[k].contains(e) && blocks.empty(k, d, e))
                        pending.emplace_back(k, d, e);

        while (! pending.empty()) {
            auto [r, u, v] = pending.front();
            pending.pop_front();
            if (! domains[r].contains(u) || ! domains[r].contains(v))
                continue;
            run.eliminate(r, u, NsWitness{inst.value_at(r, v)});

            for (const auto & out : net.arcs(r)) {
                VarId k = out.target;
                const auto & in = net.arc(k, out.reverse);
                for (ValueIdx d = 0; d < net.size(k); ++d) {
                    if (! domains[k].contains(d) || ! in.allows(d, u))
                        continue;
                    for (ValueIdx e = 0; e < net.size(k); ++e) {
                        if (! domains[k].contains(e) || in.allows(e, u))
                            continue;
                        if (blocks.remove_block(k, out.reverse, d, e) == BlockTable::Change::emptied)
                            pending.emplace_back(k, d, e);
                    }
                }
            }

            if (options.debug_recompute)
                blocks.check(net, domains);
        }
        return run.finish();
    }
}
