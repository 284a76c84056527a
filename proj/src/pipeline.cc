#include <subsense/pipeline.hh>

#include <subsense/ac_ns.hh>
#include <subsense/cns_engine.hh>
#include <subsense/ss_engine.hh>

#include <sstream>
#include <stdexcept>

using std::string;
using std::vector;

namespace subsense
{
    namespace
    {
        auto chain(Reduction first, const Reduction & second) -> Reduction
        {
            for (const auto & s : second.trace.steps)
                first.trace.append(s.variable, s.value, s.witness);
            first.report.absorb(second.report);
            first.instance = second.instance;
            return first;
        }
    }

    auto run_rule(const Instance & inst, Rule rule, const EngineOptions & options) -> Reduction
    {
        switch (rule) {
        case Rule::ac: return establish_ac(inst);
        case Rule::scss: return scss_to_convergence(inst, options);
        default: break;
        }
        auto ac = establish_ac(inst);
        if (ac.report.unsatisfiable)
            return ac;
        const auto & base = ac.instance;
        switch (rule) {
        case Rule::ns: return chain(std::move(ac), ns_to_convergence(base, options));
        case Rule::ss: return chain(std::move(ac), ss_to_convergence(base, options));
        default: return chain(std::move(ac), cns_to_convergence(base, options));
        }
    }

    auto reduce(const Instance & inst, const vector<Rule> & rules, const EngineOptions & options) -> Reduction
    {
        Reduction total{inst, Trace{inst.name(), {}}, {}};
        total.report.initial_sizes = inst.domain_sizes();
        total.report.final_sizes = inst.domain_sizes();
        total.report.unsatisfiable = inst.has_empty_domain();
        while (! total.report.unsatisfiable) {
            int before = total.report.total();
            for (Rule r : rules) {
                auto step = run_rule(total.instance, r, options);
                total = chain(std::move(total), step);
                if (total.report.unsatisfiable)
                    break;
            }
            if (total.report.total() == before)
                break;
        }
        return total;
    }

    auto parse_rules(const string & list) -> vector<Rule>
    {
        vector<Rule> out;
        std::stringstream in{list};
        string item;
        while (std::getline(in, item, ',')) {
            auto r = parse_rule(item);
            if (! r)
                throw std::invalid_argument("unknown rule \"" + item + "\"");
            out.push_back(*r);
        }
        if (out.empty())
            throw std::invalid_argument("empty rule list");
        return out;
    }

    auto verify(const Instance & inst, const vector<ReplayStep> & steps, const std::optional<vector<vector<int>>> & final_domains)
        -> VerifyResult
    {
        try {
            auto [result, trace] = replay_sequence(inst, steps);
            if (final_domains) {
                if (static_cast<int>(final_domains->size()) != result.num_variables())
                    return {false, 0, "final domains list the wrong number of variables"};
                for (VarId i = 0; i < result.num_variables(); ++i)
                    if (result.current_values(i) != (*final_domains)[i])
                        return {false, 0, "final domain of variable " + std::to_string(i) + " differs after replay"};
            }
            return {true, 0, "all " + std::to_string(steps.size()) + " steps certified"};
        }
        catch (const ReplayError & e) {
            return {false, e.step(), e.what()};
        }
    }
}
