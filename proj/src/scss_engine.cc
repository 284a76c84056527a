#include <subsense/scss_engine.hh>

#include <subsense/oracle.hh>

using std::tuple;
using std::vector;

namespace subsense
{
    ScssEngine::ScssEngine(const Instance & inst, EngineOptions options) :
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
        stop_count_.resize(n);
        stop_sum_.resize(n);
        covers_.resize(n);
        open_.resize(n);
        open_count_.resize(n);

        for (VarId i = 0; i < n; ++i) {
            auto di = net_.size(i);
            stop_count_[i].assign(static_cast<std::size_t>(di * di), 0);
            stop_sum_[i].assign(static_cast<std::size_t>(di * di), 0);
            for (int s = 0; s < net_.degree(i); ++s) {
                const auto & arc = net_.arc(i, s);
                VarId k = arc.target;
                auto dk = net_.size(k);
                subs_[i].emplace_back(static_cast<std::size_t>(di * dk), 0);
                stops_[i].emplace_back(static_cast<std::size_t>(di * di), 0);
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
                            ++stop_count_[i][a * di + b];
                            stop_sum_[i][a * di + b] += s;
                            ++upd;
                        }
                    }
            }
        }

        for (VarId i = 0; i < n; ++i) {
            auto di = net_.size(i);
            for (int s = 0; s < net_.degree(i); ++s) {
                const auto & arc = net_.arc(i, s);
                VarId j = arc.target;
                auto dj = net_.size(j);
                covers_[i].emplace_back(static_cast<std::size_t>(di * dj), 0);
                open_[i].emplace_back(static_cast<std::size_t>(di * dj), 0);
                open_count_[i].emplace_back(di, 0);
                for (ValueIdx b = 0; b < di; ++b) {
                    if (! dom[i].contains(b))
                        continue;
                    for (ValueIdx c = 0; c < dj; ++c) {
                        if (! dom[j].contains(c))
                            continue;
                        int count = 0;
                        for (ValueIdx a = 0; a < di; ++a)
                            if (a != b && dom[i].contains(a) && sub_or_allowed(i, s, a, c) && stop_within(i, a, b, s))
                                ++count;
                        covers_[i][s][b * dj + c] = count;
                        upd += static_cast<std::uint64_t>(count);
                        if (count == 0 && arc.allows(b, c)) {
                            open_[i][s][b * dj + c] = 1;
                            ++open_count_[i][s][b];
                            ++upd;
                        }
                    }
                }
            }
        }

        for (VarId i = 0; i < n; ++i)
            for (ValueIdx b = 0; b < net_.size(i); ++b)
                for (int s = 0; s < net_.degree(i); ++s)
                    if (dom[i].contains(b) && open_count_[i][s][b] == 0)
                        pending_.emplace_back(i, b, s);
    }

    auto ScssEngine::slot(VarId i, VarId k) const -> int
    {
        int s = net_.slot_of(i, k);
        if (s < 0)
            throw InstanceError("no constraint between variables " + std::to_string(i) + " and " + std::to_string(k));
        return s;
    }

    // (a,c) in R_ij, or some sub of c for a exists; NbSubs is only kept for (a,c) not in R_ij.
    auto ScssEngine::sub_or_allowed(VarId i, int s, ValueIdx a, ValueIdx c) const -> bool
    {
        const auto & arc = net_.arc(i, s);
        return arc.allows(a, c) || subs_[i][s][a * arc.cols + c] > 0;
    }

    auto ScssEngine::stop_within(VarId i, ValueIdx a, ValueIdx b, int s) const -> bool
    {
        auto at = a * net_.size(i) + b;
        return stop_count_[i][at] == 0 || (stop_count_[i][at] == 1 && stop_sum_[i][at] == s);
    }

    auto ScssEngine::nb_subs(VarId i, ValueIdx a, VarId k, ValueIdx d) const -> int
    {
        return subs_[i][slot(i, k)][a * net_.size(k) + d];
    }

    auto ScssEngine::nb_stops(VarId i, ValueIdx a, ValueIdx b, VarId k) const -> int
    {
        return stops_[i][slot(i, k)][a * net_.size(i) + b];
    }

    auto ScssEngine::stop_vars(VarId i, ValueIdx a, ValueIdx b) const -> vector<VarId>
    {
        vector<VarId> out;
        for (int s = 0; s < net_.degree(i); ++s)
            if (stops_[i][s][a * net_.size(i) + b] > 0)
                out.push_back(net_.arc(i, s).target);
        return out;
    }

    auto ScssEngine::nb_snake_covers(VarId i, ValueIdx b, VarId j, ValueIdx c) const -> int
    {
        return covers_[i][slot(i, j)][b * net_.size(j) + c];
    }

    auto ScssEngine::not_snake_covered(VarId i, ValueIdx b, VarId j) const -> vector<ValueIdx>
    {
        int s = slot(i, j);
        vector<ValueIdx> out;
        for (ValueIdx c = 0; c < net_.size(j); ++c)
            if (open_[i][s][b * net_.size(j) + c])
                out.push_back(c);
        return out;
    }

    auto ScssEngine::elim_list() const -> vector<tuple<VarId, ValueIdx, VarId>>
    {
        vector<tuple<VarId, ValueIdx, VarId>> out;
        for (auto [i, b, s] : pending_)
            out.emplace_back(i, b, net_.arc(i, s).target);
        return out;
    }

    auto ScssEngine::inc_snake_covers(VarId i, int s, ValueIdx b, ValueIdx c) -> void
    {
        auto dj = net_.arc(i, s).cols;
        auto at = b * dj + c;
        ++covers_[i][s][at];
        ++run_.updates();
        if (covers_[i][s][at] == 1 && open_[i][s][at]) {
            open_[i][s][at] = 0;
            ++run_.updates();
            if (--open_count_[i][s][b] == 0)
                pending_.emplace_back(i, b, s);
        }
    }

    auto ScssEngine::dec_snake_covers(VarId i, int s, ValueIdx b, ValueIdx c) -> void
    {
        const auto & arc = net_.arc(i, s);
        auto at = b * arc.cols + c;
        if (covers_[i][s][at] <= 0)
            throw CounterMismatch("NbSnakeCovers underflow at (" + std::to_string(i) + "," + std::to_string(b) + ")");
        --covers_[i][s][at];
        ++run_.updates();
        if (covers_[i][s][at] == 0 && arc.allows(b, c)) {
            open_[i][s][at] = 1;
            ++open_count_[i][s][b];
            ++run_.updates();
        }
    }

    // a's standing as a snake cover of b conditioned on slot s changed by delta.
    auto ScssEngine::shift_covers(VarId i, int s, ValueIdx a, ValueIdx b, int delta) -> void
    {
        const auto & domj = run_.domains()[net_.arc(i, s).target];
        for (ValueIdx c = 0; c < domj.capacity(); ++c) {
            if (! domj.contains(c) || ! sub_or_allowed(i, s, a, c))
                continue;
            if (delta > 0)
                inc_snake_covers(i, s, b, c);
            else
                dec_snake_covers(i, s, b, c);
        }
    }

    auto ScssEngine::inc_stops(VarId i, int s, ValueIdx a, ValueIdx b) -> void
    {
        auto & stops = stops_[i][s][a * net_.size(i) + b];
        ++stops;
        ++run_.updates();
        if (stops != 1)
            return;
        vector<char> before(net_.degree(i));
        for (int s2 = 0; s2 < net_.degree(i); ++s2)
            before[s2] = stop_within(i, a, b, s2);
        ++stop_count_[i][a * net_.size(i) + b];
        stop_sum_[i][a * net_.size(i) + b] += s;
        ++run_.updates();
        for (int s2 = 0; s2 < net_.degree(i); ++s2)
            if (before[s2] && ! stop_within(i, a, b, s2))
                shift_covers(i, s2, a, b, -1);
    }

    auto ScssEngine::dec_stops(VarId i, int s, ValueIdx a, ValueIdx b) -> void
    {
        auto & stops = stops_[i][s][a * net_.size(i) + b];
        if (stops <= 0)
            throw CounterMismatch("NbStops underflow at (" + std::to_string(i) + "," + std::to_string(a) + "," + std::to_string(b) + ")");
        --stops;
        ++run_.updates();
        if (stops != 0)
            return;
        vector<char> before(net_.degree(i));
        for (int s2 = 0; s2 < net_.degree(i); ++s2)
            before[s2] = stop_within(i, a, b, s2);
        --stop_count_[i][a * net_.size(i) + b];
        stop_sum_[i][a * net_.size(i) + b] -= s;
        ++run_.updates();
        for (int s2 = 0; s2 < net_.degree(i); ++s2)
            if (! before[s2] && stop_within(i, a, b, s2))
                shift_covers(i, s2, a, b, +1);
    }

    auto ScssEngine::inc_subs(VarId i, int s, ValueIdx a, ValueIdx d) -> void
    {
        const auto & dom = run_.domains();
        const auto & arc = net_.arc(i, s);
        auto & subs = subs_[i][s][a * arc.cols + d];
        ++subs;
        ++run_.updates();
        if (subs != 1)
            return;
        // a now snake covers d for every b whose stops for a allow conditioning here
        for (ValueIdx b = 0; b < net_.size(i); ++b)
            if (b != a && dom[i].contains(b) && stop_within(i, a, b, s))
                inc_snake_covers(i, s, b, d);
        for (ValueIdx b = 0; b < net_.size(i); ++b)
            if (dom[i].contains(b) && arc.allows(b, d))
                dec_stops(i, s, a, b);
    }

    auto ScssEngine::dec_subs(VarId i, int s, ValueIdx a, ValueIdx d) -> void
    {
        const auto & dom = run_.domains();
        const auto & arc = net_.arc(i, s);
        auto & subs = subs_[i][s][a * arc.cols + d];
        if (subs <= 0)
            throw CounterMismatch("NbSubs underflow at (" + std::to_string(i) + "," + std::to_string(a) + "," + std::to_string(d) + ")");
        --subs;
        ++run_.updates();
        if (subs != 0)
            return;
        for (ValueIdx b = 0; b < net_.size(i); ++b)
            if (b != a && dom[i].contains(b) && stop_within(i, a, b, s))
                dec_snake_covers(i, s, b, d);
        for (ValueIdx b = 0; b < net_.size(i); ++b)
            if (dom[i].contains(b) && arc.allows(b, d))
                inc_stops(i, s, a, b);
    }

    auto ScssEngine::gain_sub(VarId k, int s2, ValueIdx d, ValueIdx e) -> void
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

    auto ScssEngine::propagate(VarId r, ValueIdx u) -> void
    {
        const auto & dom = run_.domains();
        auto dr = net_.size(r);

        // u was a block at r for (d, e) at each neighbour k
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
                        dec_stops(i, si, a, b);
            }
        }

        // u was a snake cover a at r
        for (int s = 0; s < net_.degree(r); ++s) {
            const auto & domj = dom[net_.arc(r, s).target];
            for (ValueIdx c = 0; c < domj.capacity(); ++c) {
                if (! domj.contains(c) || ! sub_or_allowed(r, s, u, c))
                    continue;
                for (ValueIdx b = 0; b < dr; ++b)
                    if (dom[r].contains(b) && stop_within(r, u, b, s))
                        dec_snake_covers(r, s, b, c);
            }
        }

        // u was a conditioning value c at r
        for (const auto & out : net_.arcs(r)) {
            VarId i = out.target;
            int si = out.reverse;
            for (ValueIdx b = 0; b < net_.size(i); ++b) {
                if (! dom[i].contains(b))
                    continue;
                auto & flag = open_[i][si][b * dr + u];
                if (! flag)
                    continue;
                flag = 0;
                ++run_.updates();
                if (--open_count_[i][si][b] == 0)
                    pending_.emplace_back(i, b, si);
            }
        }
    }

    auto ScssEngine::witness_for(VarId r, ValueIdx u, int t) const -> ScssWitness
    {
        const auto & dom = run_.domains();
        const auto & arc = net_.arc(r, t);
        VarId j = arc.target;
        ScssWitness w{j, {}};
        for (ValueIdx c = 0; c < net_.size(j); ++c) {
            if (! dom[j].contains(c) || ! arc.allows(u, c))
                continue;
            for (ValueIdx a = 0; a < net_.size(r); ++a) {
                if (a == u || ! dom[r].contains(a) || ! sub_or_allowed(r, t, a, c) || ! stop_within(r, a, u, t))
                    continue;
                ScssCover cover{source_.value_at(j, c), source_.value_at(r, a), 0, {}};
                for (ValueIdx g = 0; g < net_.size(j); ++g)
                    if (dom[j].contains(g) && arc.allows(a, g) && blocks_.within(j, c, g, arc.reverse)) {
                        cover.conditioning_swap = source_.value_at(j, g);
                        break;
                    }
                for (int s = 0; s < net_.degree(r); ++s) {
                    if (s == t)
                        continue;
                    const auto & side = net_.arc(r, s);
                    VarId k = side.target;
                    for (ValueIdx d = 0; d < net_.size(k); ++d) {
                        if (! dom[k].contains(d) || ! side.allows(u, d) || side.allows(a, d))
                            continue;
                        for (ValueIdx e = 0; e < net_.size(k); ++e)
                            if (dom[k].contains(e) && side.allows(a, e) && blocks_.within(k, d, e, side.reverse)) {
                                cover.swaps.push_back(SnakeSwap{k, source_.value_at(k, d), source_.value_at(k, e)});
                                break;
                            }
                    }
                }
                w.covers.push_back(std::move(cover));
                break;
            }
        }
        return w;
    }

    // Variables outside every constraint: keep the largest value. With at
    // least two variables the conditioning falls back to the smallest other
    // variable, against which every value is trivially compatible.
    auto ScssEngine::eliminate_isolated() -> void
    {
        auto & dom = run_.domains();
        auto n = net_.num_variables();
        for (VarId i = 0; i < n; ++i) {
            if (net_.degree(i) != 0 || dom[i].size() < 2)
                continue;
            auto members = dom[i].members();
            ValueIdx keep = members.back();
            members.pop_back();
            int kept = source_.value_at(i, keep);
            for (ValueIdx b : members) {
                if (n == 1) {
                    run_.eliminate(i, b, NsWitness{kept});
                    continue;
                }
                VarId j = i == 0 ? 1 : 0;
                ScssWitness w{j, {}};
                for (ValueIdx c : dom[j].members())
                    w.covers.push_back(ScssCover{source_.value_at(j, c), kept, source_.value_at(j, c), {}});
                run_.eliminate(i, b, std::move(w));
            }
        }
    }

    auto ScssEngine::check_counters() const -> void
    {
        blocks_.check(net_, run_.domains());
        auto snap = run_.snapshot();
        ScssEngine fresh{snap, EngineOptions{false, false}};
        const auto & dom = run_.domains();
        for (VarId i = 0; i < net_.num_variables(); ++i) {
            auto di = net_.size(i);
            for (int s = 0; s < net_.degree(i); ++s) {
                const auto & arc = net_.arc(i, s);
                VarId k = arc.target;
                auto dk = net_.size(k);
                for (ValueIdx a = 0; a < di; ++a) {
                    if (! dom[i].contains(a))
                        continue;
                    for (ValueIdx d = 0; d < dk; ++d)
                        if (dom[k].contains(d) && ! arc.allows(a, d) && fresh.subs_[i][s][a * dk + d] != subs_[i][s][a * dk + d])
                            throw mismatch("NbSubs", {i, a, k, d}, fresh.subs_[i][s][a * dk + d], subs_[i][s][a * dk + d]);
                    for (ValueIdx b = 0; b < di; ++b) {
                        if (b == a || ! dom[i].contains(b))
                            continue;
                        if (fresh.stops_[i][s][a * di + b] != stops_[i][s][a * di + b])
                            throw mismatch("NbStops", {i, a, b, k}, fresh.stops_[i][s][a * di + b], stops_[i][s][a * di + b]);
                        if (s == 0 && (fresh.stop_count_[i][a * di + b] != stop_count_[i][a * di + b]
                                          || fresh.stop_sum_[i][a * di + b] != stop_sum_[i][a * di + b]))
                            throw mismatch("StopVars", {i, a, b}, fresh.stop_count_[i][a * di + b], stop_count_[i][a * di + b]);
                    }
                }
                for (ValueIdx b = 0; b < di; ++b) {
                    if (! dom[i].contains(b))
                        continue;
                    for (ValueIdx c = 0; c < dk; ++c) {
                        if (! dom[k].contains(c))
                            continue;
                        auto at = b * dk + c;
                        if (fresh.covers_[i][s][at] != covers_[i][s][at])
                            throw mismatch("NbSnakeCovers", {i, b, k, c}, fresh.covers_[i][s][at], covers_[i][s][at]);
                        if (fresh.open_[i][s][at] != open_[i][s][at])
                            throw mismatch("NotSnakeCovered", {i, b, k, c}, fresh.open_[i][s][at], open_[i][s][at]);
                    }
                    if (fresh.open_count_[i][s][b] != open_count_[i][s][b])
                        throw mismatch("|NotSnakeCovered|", {i, b, k}, fresh.open_count_[i][s][b], open_count_[i][s][b]);
                }
            }
        }
    }

    auto ScssEngine::run() -> Reduction
    {
        auto & dom = run_.domains();
        eliminate_isolated();
        while (! pending_.empty()) {
            auto [r, u, t] = pending_.front();
            pending_.pop_front();
            if (! dom[r].contains(u) || open_count_[r][t][u] != 0)
                continue;
            run_.eliminate(r, u, witness_for(r, u, t));
            if (dom[r].empty())
                break;
            propagate(r, u);
            if (options_.debug_recompute)
                check_counters();
        }
        return run_.finish();
    }

    auto check_scss(const Instance & inst) -> vector<tuple<VarId, int, VarId>>
    {
        ScssEngine engine{inst, EngineOptions{false, false}};
        vector<tuple<VarId, int, VarId>> out;
        for (auto [i, b, j] : engine.elim_list())
            out.emplace_back(i, inst.value_at(i, b), j);
        return out;
    }

    auto scss_to_convergence(const Instance & inst, const EngineOptions & options) -> Reduction
    {
        ScssEngine engine{inst, options};
        return engine.run();
    }

    auto replay_sequence(const Instance & inst, const vector<ReplayStep> & steps) -> std::pair<Instance, Trace>
    {
        Instance current = inst;
        Trace trace{inst.name(), {}};
        int number = 0;
        for (const auto & step : steps) {
            ++number;
            auto label = "step " + std::to_string(number) + " (" + rule_name(step.rule) + " removal of " + std::to_string(step.value) + " from variable "
                + std::to_string(step.variable) + ")";
            if (step.variable < 0 || step.variable >= current.num_variables() || ! current.contains(step.variable, step.value))
                throw ReplayError(number, step.rule, label + ": value is not in the current domain");
            if (step.conditioning && (*step.conditioning < 0 || *step.conditioning >= current.num_variables() || *step.conditioning == step.variable))
                throw ReplayError(number, step.rule, label + ": bad conditioning variable");
            auto witness = oracle::eliminable(current, step.variable, step.value, step.rule, step.conditioning);
            if (! witness)
                throw ReplayError(number, step.rule, label + ": not certified by the rule's definition");
            trace.append(step.variable, step.value, std::move(*witness));
            current = current.remove_value(step.variable, step.value);
        }
        return {std::move(current), std::move(trace)};
    }
}
