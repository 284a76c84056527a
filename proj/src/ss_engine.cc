#include <subsense/ss_engine.hh>

using std::pair;
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
    }

    SsEngine::SsEngine(const Instance & inst, EngineOptions options) :
        source_(inst),
        options_(options),
        net_(inst),
        run_(inst),
        blocks_(net_, run_.domains(), run_.updates())
    {
        const auto & dom = run_.domains();
        auto n = net_.num_variables();
        auto & upd = run_.updates();
        subs_.resize(n);
        stops_.resize(n);
        stop_vars_.resize(n);
        snake_.resize(n);
        inconsistent_.resize(n);

        for (VarId i = 0; i < n; ++i) {
            auto di = net_.size(i);
            subs_[i].resize(net_.degree(i));
            stops_[i].resize(net_.degree(i));
            stop_vars_[i].assign(static_cast<std::size_t>(di * di), 0);
            snake_[i].assign(di, 0);
            inconsistent_[i].assign(di, 0);
            for (int s = 0; s < net_.degree(i); ++s) {
                const auto & arc = net_.arc(i, s);
                VarId k = arc.target;
                auto dk = net_.size(k);
                subs_[i][s].assign(static_cast<std::size_t>(di * dk), 0);
                stops_[i][s].assign(static_cast<std::size_t>(di * di), 0);
                for (ValueIdx a = 0; a < di; ++a) {
                    if (! dom[i].contains(a))
                        continue;
                    for (ValueIdx d = 0; d < dk; ++d) {
                        if (! dom[k].contains(d) || arc.allows(a, d))
                            continue;
                        int count = 0;
                        for (ValueIdx e = 0; e < dk; ++e)
                            if (dom[k].contains(e) && arc.allows(a, e) && blocks_.within(k, d, e, arc.reverse))
                                ++count;
                        subs_[i][s][a * dk + d] = count;
                        upd += static_cast<std::uint64_t>(count);
                    }
                }
                for (ValueIdx a = 0; a < di; ++a)
                    for (ValueIdx b = 0; b < di; ++b) {
                        if (a == b || ! dom[i].contains(a) || ! dom[i].contains(b))
                            continue;
                        int count = 0;
                        for (ValueIdx d = 0; d < dk; ++d)
                            if (dom[k].contains(d) && arc.allows(b, d) && ! arc.allows(a, d) && subs_[i][s][a * dk + d] == 0)
                                ++count;
                        stops_[i][s][a * di + b] = count;
                        upd += static_cast<std::uint64_t>(count);
                        if (count > 0) {
                            ++stop_vars_[i][a * di + b];
                            ++upd;
                        }
                    }
            }
            for (ValueIdx b = 0; b < di; ++b) {
                if (! dom[i].contains(b))
                    continue;
                for (ValueIdx a = 0; a < di; ++a)
                    if (a != b && dom[i].contains(a) && stop_vars_[i][a * di + b] == 0) {
                        ++snake_[i][b];
                        ++upd;
                    }
                for (const auto & arc : net_.arcs(i))
                    if (! supported(arc, b, dom[arc.target]))
                        inconsistent_[i][b] = 1;
            }
        }

        for (VarId i = 0; i < n; ++i)
            for (ValueIdx b = 0; b < net_.size(i); ++b) {
                if (! dom[i].contains(b))
                    continue;
                bool ns = false;
                for (ValueIdx e = 0; e < net_.size(i) && ! ns; ++e)
                    ns = e != b && dom[i].contains(e) && blocks_.empty(i, b, e);
                if (inconsistent_[i][b] || ns)
                    head_.emplace_back(i, b);
                else if (snake_[i][b] > 0)
                    tail_.emplace_back(i, b);
            }
    }

    auto SsEngine::slot(VarId i, VarId k) const -> int
    {
        int s = net_.slot_of(i, k);
        if (s < 0)
            throw InstanceError("no constraint between variables " + std::to_string(i) + " and " + std::to_string(k));
        return s;
    }

    auto SsEngine::subs_at(VarId i, int s, ValueIdx a, ValueIdx d) -> int &
    {
        return subs_[i][s][a * net_.size(net_.arc(i, s).target) + d];
    }

    auto SsEngine::stops_at(VarId i, int s, ValueIdx a, ValueIdx b) -> int &
    {
        return stops_[i][s][a * net_.size(i) + b];
    }

    auto SsEngine::nb_blocks(VarId k, ValueIdx d, ValueIdx e, VarId l) const -> int
    {
        return blocks_.blocks(k, slot(k, l), d, e);
    }

    auto SsEngine::block_vars(VarId k, ValueIdx d, ValueIdx e) const -> vector<VarId>
    {
        vector<VarId> out;
        for (int s = 0; s < net_.degree(k); ++s)
            if (blocks_.blocks(k, s, d, e) > 0)
                out.push_back(net_.arc(k, s).target);
        return out;
    }

    auto SsEngine::nb_subs(VarId i, ValueIdx a, VarId k, ValueIdx d) const -> int
    {
        return subs_[i][slot(i, k)][a * net_.size(k) + d];
    }

    auto SsEngine::nb_stops(VarId i, ValueIdx a, ValueIdx b, VarId k) const -> int
    {
        return stops_[i][slot(i, k)][a * net_.size(i) + b];
    }

    auto SsEngine::nb_stop_vars(VarId i, ValueIdx a, ValueIdx b) const -> int { return stop_vars_[i][a * net_.size(i) + b]; }

    auto SsEngine::nb_snake(VarId i, ValueIdx b) const -> int { return snake_[i][b]; }

    auto SsEngine::inconsistent(VarId i, ValueIdx b) const -> bool { return inconsistent_[i][b] != 0; }

    auto SsEngine::updates() const -> std::uint64_t { return const_cast<EngineRun &>(run_).updates(); }

    auto SsEngine::worklist() const -> vector<pair<VarId, ValueIdx>>
    {
        vector<pair<VarId, ValueIdx>> out(head_.begin(), head_.end());
        out.insert(out.end(), tail_.begin(), tail_.end());
        return out;
    }

    auto SsEngine::dec_stops(VarId i, ValueIdx a, ValueIdx b, VarId k) -> void { dec_stops_slot(i, slot(i, k), a, b); }

    auto SsEngine::inc_stops(VarId i, ValueIdx a, ValueIdx b, VarId k) -> void { inc_stops_slot(i, slot(i, k), a, b); }

    auto SsEngine::dec_stops_slot(VarId i, int s, ValueIdx a, ValueIdx b) -> void
    {
        auto & stops = stops_at(i, s, a, b);
        if (stops <= 0)
            throw CounterMismatch("NbStops underflow at (" + std::to_string(i) + "," + std::to_string(a) + "," + std::to_string(b) + ")");
        --stops;
        ++run_.updates();
        if (stops > 0)
            return;
        auto & vars = stop_vars_[i][a * net_.size(i) + b];
        --vars;
        ++run_.updates();
        if (vars > 0)
            return;
        ++snake_[i][b];
        ++run_.updates();
        if (snake_[i][b] == 1)
            tail_.emplace_back(i, b);
    }

    auto SsEngine::inc_stops_slot(VarId i, int s, ValueIdx a, ValueIdx b) -> void
    {
        auto & stops = stops_at(i, s, a, b);
        ++stops;
        ++run_.updates();
        if (stops > 1)
            return;
        auto & vars = stop_vars_[i][a * net_.size(i) + b];
        ++vars;
        ++run_.updates();
        if (vars == 1) {
            --snake_[i][b];
            ++run_.updates();
        }
    }

    auto SsEngine::inc_subs(VarId i, int s, ValueIdx a, ValueIdx d) -> void
    {
        const auto & dom = run_.domains();
        auto & subs = subs_at(i, s, a, d);
        ++subs;
        ++run_.updates();
        if (subs != 1)
            return;
        // d stops being a stop for a against every b compatible with it
        const auto & arc = net_.arc(i, s);
        for (ValueIdx b = 0; b < net_.size(i); ++b)
            if (dom[i].contains(b) && arc.allows(b, d))
                dec_stops_slot(i, s, a, b);
    }

    auto SsEngine::dec_subs(VarId i, int s, ValueIdx a, ValueIdx d) -> void
    {
        const auto & dom = run_.domains();
        auto & subs = subs_at(i, s, a, d);
        if (subs <= 0)
            throw CounterMismatch("NbSubs underflow at (" + std::to_string(i) + "," + std::to_string(a) + "," + std::to_string(d) + ")");
        --subs;
        ++run_.updates();
        if (subs != 0)
            return;
        const auto & arc = net_.arc(i, s);
        for (ValueIdx b = 0; b < net_.size(i); ++b)
            if (dom[i].contains(b) && arc.allows(b, d))
                inc_stops_slot(i, s, a, b);
    }

    // BlockVars(k,d,e) just shrank to within {slot s2 of k}: e is now a sub of
    // d for every a at that variable compatible with e and not with d.
    auto SsEngine::gain_sub(VarId k, int s2, ValueIdx d, ValueIdx e) -> void
    {
        const auto & dom = run_.domains();
        const auto & kx = net_.arc(k, s2);
        VarId i = kx.target;
        int si = kx.reverse;
        const auto & ik = net_.arc(i, si);
        for (ValueIdx a = 0; a < net_.size(i); ++a)
            if (dom[i].contains(a) && ik.allows(a, e) && ! ik.allows(a, d))
                inc_subs(i, si, a, d);
    }

    auto SsEngine::witness_for(VarId r, ValueIdx u) const -> Witness
    {
        // Substitution is reported whenever it holds; AC only as a last resort.
        const auto & dom = run_.domains();
        auto dr = net_.size(r);
        for (ValueIdx e = 0; e < dr; ++e)
            if (e != u && dom[r].contains(e) && blocks_.empty(r, u, e))
                return NsWitness{source_.value_at(r, e)};

        for (ValueIdx a = 0; a < dr; ++a) {
            if (a == u || ! dom[r].contains(a) || stop_vars_[r][a * dr + u] != 0)
                continue;
            SsWitness w{source_.value_at(r, a), {}};
            for (int s = 0; s < net_.degree(r); ++s) {
                const auto & arc = net_.arc(r, s);
                VarId k = arc.target;
                for (ValueIdx d = 0; d < net_.size(k); ++d) {
                    if (! dom[k].contains(d) || ! arc.allows(u, d) || arc.allows(a, d))
                        continue;
                    for (ValueIdx e = 0; e < net_.size(k); ++e)
                        if (dom[k].contains(e) && arc.allows(a, e) && blocks_.within(k, d, e, arc.reverse)) {
                            w.swaps.push_back(SnakeSwap{k, source_.value_at(k, d), source_.value_at(k, e)});
                            break;
                        }
                }
            }
            return w;
        }
        for (const auto & arc : net_.arcs(r))
            if (! supported(arc, u, dom[arc.target]))
                return AcWitness{arc.target};
        throw CounterMismatch("worklist entry (" + std::to_string(r) + "," + std::to_string(u) + ") has no substitute");
    }

    auto SsEngine::propagate(VarId r, ValueIdx u, bool removed_by_ac) -> void
    {
        const auto & dom = run_.domains();

        // u was a block f at r for (d, e) at each neighbour k
        for (const auto & out : net_.arcs(r)) {
            VarId k = out.target;
            int t = out.reverse;
            const auto & in = net_.arc(k, t);
            for (ValueIdx d = 0; d < net_.size(k); ++d) {
                if (! dom[k].contains(d) || ! in.allows(d, u))
                    continue;
                for (ValueIdx e = 0; e < net_.size(k); ++e) {
                    if (! dom[k].contains(e) || in.allows(e, u))
                        continue;
                    auto change = blocks_.remove_block(k, t, d, e);
                    if (change == BlockTable::Change::emptied) {
                        head_.emplace_back(k, d);
                        // the set was {r}; e is now a sub of d for every other neighbour
                        for (int s2 = 0; s2 < net_.degree(k); ++s2)
                            if (s2 != t)
                                gain_sub(k, s2, d, e);
                    }
                    else if (change == BlockTable::Change::singleton)
                        gain_sub(k, blocks_.singleton(k, d, e), d, e);
                }
            }
        }

        for (int idx = 0; idx < net_.degree(r); ++idx) {
            const auto & out = net_.arc(r, idx);
            VarId i = out.target;
            int si = out.reverse;
            const auto & ir = net_.arc(i, si);
            auto dr = net_.size(r);

            // u was a sub e of d at r
            for (ValueIdx d = 0; d < dr; ++d) {
                if (! dom[r].contains(d) || ! blocks_.within(r, d, u, idx))
                    continue;
                for (ValueIdx a = 0; a < net_.size(i); ++a)
                    if (dom[i].contains(a) && ir.allows(a, u) && ! ir.allows(a, d))
                        dec_subs(i, si, a, d);
            }

            // u was a stop d at r
            for (ValueIdx a = 0; a < net_.size(i); ++a) {
                if (! dom[i].contains(a) || ir.allows(a, u) || subs_[i][si][a * dr + u] != 0)
                    continue;
                for (ValueIdx b = 0; b < net_.size(i); ++b)
                    if (dom[i].contains(b) && ir.allows(b, u))
                        dec_stops_slot(i, si, a, b);
            }

            for (ValueIdx v = 0; v < net_.size(i); ++v) {
                if (! dom[i].contains(v) || inconsistent_[i][v])
                    continue;
                ++run_.updates();
                if (! supported(ir, v, dom[r])) {
                    inconsistent_[i][v] = 1;
                    head_.emplace_back(i, v);
                    if (removed_by_ac)
                        ++run_.report().cascaded_ac;
                }
            }
        }

        // u is no longer a candidate substitute at r
        auto dr = net_.size(r);
        for (ValueIdx b = 0; b < dr; ++b)
            if (dom[r].contains(b) && stop_vars_[r][u * dr + b] == 0) {
                --snake_[r][b];
                ++run_.updates();
            }
    }

    auto SsEngine::check_counters() const -> void
    {
        blocks_.check(net_, run_.domains());
        auto snap = run_.snapshot();
        SsEngine fresh{snap, EngineOptions{false, false}};
        const auto & dom = run_.domains();
        for (VarId i = 0; i < net_.num_variables(); ++i) {
            auto di = net_.size(i);
            for (int s = 0; s < net_.degree(i); ++s) {
                VarId k = net_.arc(i, s).target;
                auto dk = net_.size(k);
                const auto & arc = net_.arc(i, s);
                for (ValueIdx a = 0; a < di; ++a) {
                    if (! dom[i].contains(a))
                        continue;
                    for (ValueIdx d = 0; d < dk; ++d)
                        if (dom[k].contains(d) && ! arc.allows(a, d) && fresh.subs_[i][s][a * dk + d] != subs_[i][s][a * dk + d])
                            throw mismatch("NbSubs", {i, a, k, d}, fresh.subs_[i][s][a * dk + d], subs_[i][s][a * dk + d]);
                    for (ValueIdx b = 0; b < di; ++b)
                        if (b != a && dom[i].contains(b) && fresh.stops_[i][s][a * di + b] != stops_[i][s][a * di + b])
                            throw mismatch("NbStops", {i, a, b, k}, fresh.stops_[i][s][a * di + b], stops_[i][s][a * di + b]);
                }
            }
            for (ValueIdx b = 0; b < di; ++b) {
                if (! dom[i].contains(b))
                    continue;
                for (ValueIdx a = 0; a < di; ++a)
                    if (a != b && dom[i].contains(a) && fresh.stop_vars_[i][a * di + b] != stop_vars_[i][a * di + b])
                        throw mismatch("NbStopVars", {i, a, b}, fresh.stop_vars_[i][a * di + b], stop_vars_[i][a * di + b]);
                if (fresh.snake_[i][b] != snake_[i][b])
                    throw mismatch("NbSnake", {i, b}, fresh.snake_[i][b], snake_[i][b]);
                if (fresh.inconsistent_[i][b] != inconsistent_[i][b])
                    throw mismatch("Inconsistent", {i, b}, fresh.inconsistent_[i][b], inconsistent_[i][b]);
            }
        }
    }

    auto SsEngine::run() -> Reduction
    {
        auto & dom = run_.domains();
        while (! head_.empty() || ! tail_.empty()) {
            auto & queue = head_.empty() ? tail_ : head_;
            auto [r, u] = queue.front();
            queue.pop_front();
            if (! dom[r].contains(u) || ! (snake_[r][u] > 0 || inconsistent_[r][u]))
                continue;
            auto witness = witness_for(r, u);
            bool by_ac = std::holds_alternative<AcWitness>(witness);
            run_.eliminate(r, u, std::move(witness));
            if (dom[r].empty())
                break;
            propagate(r, u, by_ac);
            if (options_.debug_recompute)
                check_counters();
        }
        return run_.finish();
    }

    auto ss_to_convergence(const Instance & inst, const EngineOptions & options) -> Reduction
    {
        SsEngine engine{inst, options};
        return engine.run();
    }
}
