#include <subsense/trace.hh>

#include <numeric>

namespace subsense
{
    auto witness_rule(const Witness & w) -> Rule
    {
        switch (w.index()) {
        case 0: return Rule::ac;
        case 1: return Rule::ns;
        case 2: return Rule::ss;
        case 3: return Rule::cns;
        default: return Rule::scss;
        }
    }

    auto Trace::append(VarId variable, int value, Witness witness) -> void
    {
        steps.push_back(EliminationRecord{static_cast<int>(steps.size()) + 1, variable, value, std::move(witness)});
    }

    auto Trace::count(Rule r) const -> int
    {
        int c = 0;
        for (const auto & s : steps)
            if (s.rule() == r)
                ++c;
        return c;
    }

    auto ReductionReport::total() const -> int
    {
        return std::accumulate(eliminations.begin(), eliminations.end(), 0);
    }

    auto ReductionReport::absorb(const ReductionReport & later) -> void
    {
        for (std::size_t r = 0; r < eliminations.size(); ++r)
            eliminations[r] += later.eliminations[r];
        updates += later.updates;
        micros += later.micros;
        if (initial_sizes.empty())
            initial_sizes = later.initial_sizes;
        final_sizes = later.final_sizes;
        unsatisfiable = unsatisfiable || later.unsatisfiable;
        cascaded_ac += later.cascaded_ac;
    }
}
