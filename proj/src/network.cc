#include <subsense/network.hh>

#include <cstdlib>
#include <cstring>

using std::string;
using std::vector;

namespace subsense
{
    auto debug_recompute_from_env() -> bool
    {
        const char * v = std::getenv("SUBSENSE_DEBUG_RECOMPUTE");
        return v && std::strcmp(v, "1") == 0;
    }

    auto mismatch(const string & family, std::initializer_list<int> index, long long expected, long long actual) -> CounterMismatch
    {
        string where = family + "(";
        bool first = true;
        for (int x : index) {
            if (! first)
                where += ",";
            where += std::to_string(x);
            first = false;
        }
        where += ")";
        return CounterMismatch(where + ": incremental value " + std::to_string(actual) + ", definition gives " + std::to_string(expected));
    }

    Network::Network(const Instance & inst)
    {
        auto n = inst.num_variables();
        arcs_.resize(n);
        for (VarId i = 0; i < n; ++i) {
            sizes_.push_back(inst.original_size(i));
            for (VarId j : inst.neighbours(i)) {
                Arc arc;
                arc.target = j;
                arc.cols = inst.original_size(j);
                arc.bits.resize(static_cast<std::size_t>(inst.original_size(i) * arc.cols));
                for (ValueIdx a = 0; a < inst.original_size(i); ++a)
                    for (ValueIdx c = 0; c < arc.cols; ++c)
                        arc.bits[a * arc.cols + c] = inst.allows_idx(i, a, j, c) ? 1 : 0;
                arcs_[i].push_back(std::move(arc));
            }
        }
        for (VarId i = 0; i < n; ++i)
            for (auto & arc : arcs_[i])
                arc.reverse = slot_of(arc.target, i);
    }

    auto Network::slot_of(VarId i, VarId j) const -> int
    {
        const auto & list = arcs_[i];
        for (int s = 0; s < static_cast<int>(list.size()); ++s)
            if (list[s].target == j)
                return s;
        return -1;
    }

    BlockTable::BlockTable(const Network & net, const vector<DomainSet> & domains, std::uint64_t & updates) :
        updates_(&updates)
    {
        auto n = net.num_variables();
        nb_blocks_.resize(n);
        count_.resize(n);
        sum_.resize(n);
        for (VarId k = 0; k < n; ++k) {
            auto dk = net.size(k);
            sizes_.push_back(dk);
            nb_blocks_[k].assign(static_cast<std::size_t>(net.degree(k) * dk * dk), 0);
            count_[k].assign(static_cast<std::size_t>(dk * dk), 0);
            sum_[k].assign(static_cast<std::size_t>(dk * dk), 0);
            for (int s = 0; s < net.degree(k); ++s) {
                const auto & arc = net.arc(k, s);
                const auto & dl = domains[arc.target];
                for (ValueIdx d = 0; d < dk; ++d) {
                    if (! domains[k].contains(d))
                        continue;
                    for (ValueIdx e = 0; e < dk; ++e) {
                        if (e == d || ! domains[k].contains(e))
                            continue;
                        int blocks = 0;
                        for (ValueIdx f = 0; f < dl.capacity(); ++f)
                            if (dl.contains(f) && arc.allows(d, f) && ! arc.allows(e, f))
                                ++blocks;
                        nb_blocks_[k][(s * dk + d) * dk + e] = blocks;
                        updates += static_cast<std::uint64_t>(blocks);
                        if (blocks > 0) {
                            ++count_[k][d * dk + e];
                            sum_[k][d * dk + e] += s;
                            ++updates;
                        }
                    }
                }
            }
        }
    }

    auto BlockTable::remove_block(VarId k, int slot, ValueIdx d, ValueIdx e) -> Change
    {
        auto dk = sizes_[k];
        auto & nb = nb_blocks_[k][(slot * dk + d) * dk + e];
        if (nb <= 0)
            throw CounterMismatch("NbBlocks underflow at (" + std::to_string(k) + "," + std::to_string(d) + "," + std::to_string(e) + ")");
        --nb;
        ++*updates_;
        if (nb > 0)
            return Change::none;
        auto at = d * dk + e;
        --count_[k][at];
        sum_[k][at] -= slot;
        ++*updates_;
        if (count_[k][at] == 0)
            return Change::emptied;
        if (count_[k][at] == 1)
            return Change::singleton;
        return Change::none;
    }

    auto BlockTable::check(const Network & net, const vector<DomainSet> & domains) const -> void
    {
        for (VarId k = 0; k < net.num_variables(); ++k) {
            auto dk = sizes_[k];
            for (ValueIdx d = 0; d < dk; ++d) {
                if (! domains[k].contains(d))
                    continue;
                for (ValueIdx e = 0; e < dk; ++e) {
                    if (e == d || ! domains[k].contains(e))
                        continue;
                    int members = 0, slot_sum = 0;
                    for (int s = 0; s < net.degree(k); ++s) {
                        const auto & arc = net.arc(k, s);
                        const auto & dl = domains[arc.target];
                        int expected = 0;
                        for (ValueIdx f = 0; f < dl.capacity(); ++f)
                            if (dl.contains(f) && arc.allows(d, f) && ! arc.allows(e, f))
                                ++expected;
                        if (expected != blocks(k, s, d, e))
                            throw mismatch("NbBlocks", {k, d, e, arc.target}, expected, blocks(k, s, d, e));
                        if (expected > 0) {
                            ++members;
                            slot_sum += s;
                        }
                    }
                    if (members != count_[k][d * dk + e] || slot_sum != sum_[k][d * dk + e])
                        throw mismatch("BlockVars", {k, d, e}, members, count_[k][d * dk + e]);
                }
            }
        }
    }

    EngineRun::EngineRun(const Instance & inst) :
        source_(inst),
        domains_(inst.domains()),
        trace_{inst.name(), {}},
        start_(std::chrono::steady_clock::now())
    {
        report_.initial_sizes = inst.domain_sizes();
    }

    auto EngineRun::eliminate(VarId i, ValueIdx v, Witness w) -> void
    {
        domains_[i].erase(v);
        report_.record(witness_rule(w));
        trace_.append(i, source_.value_at(i, v), std::move(w));
        if (domains_[i].empty())
            report_.unsatisfiable = true;
    }

    auto EngineRun::finish() -> Reduction
    {
        auto elapsed = std::chrono::steady_clock::now() - start_;
        report_.micros = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count());
        for (const auto & d : domains_)
            if (d.empty())
                report_.unsatisfiable = true;
        report_.final_sizes.clear();
        for (const auto & d : domains_)
            report_.final_sizes.push_back(d.size());
        return Reduction{source_.with_domains(domains_), std::move(trace_), std::move(report_)};
    }
}
