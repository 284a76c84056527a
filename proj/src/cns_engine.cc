#include <subsense/cns_engine.hh>

using std::tuple;
using std::vector;

namespace subsense
{
    CnsEngine::CnsEngine(const Instance & inst, EngineOptions options) :
        source_(inst),
        options_(options),
        net_(inst),
        run_(inst),
        blocks_(net_, run_.domains(), run_.updates())
    {
        const auto & dom = run_.domains();
        auto n = net_.num_variables();
        auto & upd = run_.updates();
        covers_.resize(n);
        open_.resize(n);
        open_count_.resize(n);

        for (VarId i = 0; i < n; ++i) {
            auto di = net_.size(i);
            for (int s = 0; s < net_.degree(i); ++s) {
                const auto & arc = net_.arc(i, s);
                auto dj = net_.size(arc.target);
                const auto & domj = dom[arc.target];
                covers_[i].emplace_back(static_cast<std::size_t>(di * dj), 0);
                open_[i].emplace_back(static_cast<std::size_t>(di * dj), 0);
                open_count_[i].emplace_back(di, 0);
                for (ValueIdx b = 0; b < di; ++b) {
                    if (! dom[i].contains(b))
                        continue;
                    for (ValueIdx c = 0; c < dj; ++c) {
                        if (! domj.contains(c))
                            continue;
                        int count = 0;
                        for (ValueIdx a = 0; a < di; ++a)
                            if (a != b && dom[i].contains(a) && arc.allows(a, c) && blocks_.within(i, b, a, s))
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
            for (ValueIdx b = 0; b < net_.size(i); ++b) {
                if (! dom[i].contains(b))
                    continue;
                for (ValueIdx a = 0; a < net_.size(i); ++a)
                    if (a != b && dom[i].contains(a) && blocks_.empty(i, b, a))
                        ns_.emplace_back(i, b, a);
                for (int s = 0; s < net_.degree(i); ++s)
                    if (open_count_[i][s][b] == 0)
                        cns_.emplace_back(i, b, s);
            }
    }

    auto CnsEngine::slot(VarId i, VarId j) const -> int
    {
        int s = net_.slot_of(i, j);
        if (s < 0)
            throw InstanceError("no constraint between variables " + std::to_string(i) + " and " + std::to_string(j));
        return s;
    }

    auto CnsEngine::nb_covers(VarId i, ValueIdx b, VarId j, ValueIdx c) const -> int
    {
        return covers_[i][slot(i, j)][b * net_.size(j) + c];
    }

    auto CnsEngine::uncovered(VarId i, ValueIdx b, VarId j) const -> vector<ValueIdx>
    {
        int s = slot(i, j);
        vector<ValueIdx> out;
        for (ValueIdx c = 0; c < net_.size(j); ++c)
            if (open_[i][s][b * net_.size(j) + c])
                out.push_back(c);
        return out;
    }

    auto CnsEngine::ns_list() const -> vector<tuple<VarId, ValueIdx, ValueIdx>> { return {ns_.begin(), ns_.end()}; }

    auto CnsEngine::cns_list() const -> vector<tuple<VarId, ValueIdx, VarId>>
    {
        vector<tuple<VarId, ValueIdx, VarId>> out;
        for (auto [i, b, s] : cns_)
            out.emplace_back(i, b, net_.arc(i, s).target);
        return out;
    }

    auto CnsEngine::mark_covered(VarId i, int s, ValueIdx b, ValueIdx c) -> void
    {
        auto & flag = open_[i][s][b * net_.size(net_.arc(i, s).target) + c];
        if (! flag)
            return;
        flag = 0;
        ++run_.updates();
        if (--open_count_[i][s][b] == 0)
            cns_.emplace_back(i, b, s);
    }

    // BlockVars(i,b,a) just shrank to within {slot s}: a covers b at every c it supports there.
    auto CnsEngine::gain_cover(VarId i, int s, ValueIdx b, ValueIdx a) -> void
    {
        const auto & arc = net_.arc(i, s);
        VarId j = arc.target;
        auto dj = net_.size(j);
        const auto & domj = run_.domains()[j];
        for (ValueIdx c = 0; c < dj; ++c) {
            if (! domj.contains(c) || ! arc.allows(a, c))
                continue;
            ++covers_[i][s][b * dj + c];
            ++run_.updates();
            mark_covered(i, s, b, c);
        }
    }

    auto CnsEngine::propagate(VarId p, ValueIdx u) -> void
    {
        const auto & dom = run_.domains();

        // u was a block at p for (b, a) at each neighbour i
        for (const auto & out : net_.arcs(p)) {
            VarId i = out.target;
            int t = out.reverse;
            const auto & in = net_.arc(i, t);
            for (ValueIdx b = 0; b < net_.size(i); ++b) {
                if (! dom[i].contains(b) || ! in.allows(b, u))
                    continue;
                for (ValueIdx a = 0; a < net_.size(i); ++a) {
                    if (! dom[i].contains(a) || in.allows(a, u))
                        continue;
                    auto change = blocks_.remove_block(i, t, b, a);
                    if (change == BlockTable::Change::emptied) {
                        ns_.emplace_back(i, b, a);
                        // the set was {p}; a now covers b conditioned on every other neighbour
                        for (int s2 = 0; s2 < net_.degree(i); ++s2)
                            if (s2 != t)
                                gain_cover(i, s2, b, a);
                    }
                    else if (change == BlockTable::Change::singleton)
                        gain_cover(i, blocks_.singleton(i, b, a), b, a);
                }
            }
        }

        // u was a cover a at p
        for (int s = 0; s < net_.degree(p); ++s) {
            const auto & arc = net_.arc(p, s);
            auto dj = net_.size(arc.target);
            const auto & domj = dom[arc.target];
            for (ValueIdx b = 0; b < net_.size(p); ++b) {
                if (! dom[p].contains(b) || ! blocks_.within(p, b, u, s))
                    continue;
                for (ValueIdx c = 0; c < dj; ++c) {
                    if (! domj.contains(c) || ! arc.allows(u, c))
                        continue;
                    auto & count = covers_[p][s][b * dj + c];
                    if (count <= 0)
                        throw CounterMismatch("NbCovers underflow at (" + std::to_string(p) + "," + std::to_string(b) + ")");
                    --count;
                    ++run_.updates();
                    if (count == 0 && arc.allows(b, c)) {
                        open_[p][s][b * dj + c] = 1;
                        ++open_count_[p][s][b];
                        ++run_.updates();
                    }
                }
            }
        }

        // u was a conditioning value c at p
        for (const auto & out : net_.arcs(p))
            for (ValueIdx b = 0; b < net_.size(out.target); ++b)
                if (dom[out.target].contains(b))
                    mark_covered(out.target, out.reverse, b, u);
    }

    auto CnsEngine::pop_ns() -> bool
    {
        auto & dom = run_.domains();
        while (! ns_.empty()) {
            auto [r, u, v] = ns_.front();
            ns_.pop_front();
            if (! dom[r].contains(u) || ! dom[r].contains(v))
                continue;
            run_.eliminate(r, u, NsWitness{source_.value_at(r, v)});
            propagate(r, u);
            return true;
        }
        return false;
    }

    auto CnsEngine::pop_cns() -> bool
    {
        auto & dom = run_.domains();
        while (! cns_.empty()) {
            auto [p, u, s] = cns_.front();
            cns_.pop_front();
            if (! dom[p].contains(u) || open_count_[p][s][u] != 0)
                continue;
            const auto & arc = net_.arc(p, s);
            VarId q = arc.target;
            CnsWitness w{q, {}};
            for (ValueIdx c = 0; c < net_.size(q); ++c) {
                if (! dom[q].contains(c) || ! arc.allows(u, c))
                    continue;
                for (ValueIdx a = 0; a < net_.size(p); ++a)
                    if (a != u && dom[p].contains(a) && arc.allows(a, c) && blocks_.within(p, u, a, s)) {
                        w.covers.push_back(CnsCover{source_.value_at(q, c), source_.value_at(p, a)});
                        break;
                    }
            }
            run_.eliminate(p, u, std::move(w));
            if (! dom[p].empty())
                propagate(p, u);
            return true;
        }
        return false;
    }

    auto CnsEngine::check_counters() const -> void
    {
        blocks_.check(net_, run_.domains());
        auto snap = run_.snapshot();
        CnsEngine fresh{snap, EngineOptions{false, false}};
        const auto & dom = run_.domains();
        for (VarId i = 0; i < net_.num_variables(); ++i)
            for (int s = 0; s < net_.degree(i); ++s) {
                VarId j = net_.arc(i, s).target;
                auto dj = net_.size(j);
                for (ValueIdx b = 0; b < net_.size(i); ++b) {
                    if (! dom[i].contains(b))
                        continue;
                    for (ValueIdx c = 0; c < dj; ++c) {
                        if (! dom[j].contains(c))
                            continue;
                        auto at = b * dj + c;
                        if (fresh.covers_[i][s][at] != covers_[i][s][at])
                            throw mismatch("NbCovers", {i, b, j, c}, fresh.covers_[i][s][at], covers_[i][s][at]);
                        if (fresh.open_[i][s][at] != open_[i][s][at])
                            throw mismatch("Uncovered", {i, b, j, c}, fresh.open_[i][s][at], open_[i][s][at]);
                    }
                    if (fresh.open_count_[i][s][b] != open_count_[i][s][b])
                        throw mismatch("|Uncovered|", {i, b, j}, fresh.open_count_[i][s][b], open_count_[i][s][b]);
                }
            }
    }

    auto CnsEngine::run() -> Reduction
    {
        auto & dom = run_.domains();
        while (true) {
            bool done = options_.cns_first ? (pop_cns() || pop_ns()) : (pop_ns() || pop_cns());
            if (! done)
                break;
            bool wiped = false;
            for (const auto & d : dom)
                wiped = wiped || d.empty();
            if (wiped)
                break;
            if (options_.debug_recompute)
                check_counters();
        }
        return run_.finish();
    }

    auto cns_to_convergence(const Instance & inst, const EngineOptions & options) -> Reduction
    {
        CnsEngine engine{inst, options};
        return engine.run();
    }
}
