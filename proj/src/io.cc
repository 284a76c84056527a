#include <subsense/io.hh>

#include <fstream>
#include <set>

using nlohmann::json;
using std::string;
using std::vector;

namespace subsense::io
{
    namespace
    {
        template <typename T>
        auto field(const json & j, const char * key) -> T
        {
            if (! j.is_object() || ! j.contains(key))
                throw FormatError(string("missing field \"") + key + "\"");
            try {
                return j.at(key).get<T>();
            }
            catch (const json::exception & e) {
                throw FormatError(string("bad field \"") + key + "\": " + e.what());
            }
        }

        auto swaps_to_json(const vector<SnakeSwap> & swaps) -> json
        {
            json out = json::array();
            for (const auto & s : swaps)
                out.push_back({{"variable", s.variable}, {"from", s.from}, {"to", s.to}});
            return out;
        }

        auto swaps_from_json(const json & j) -> vector<SnakeSwap>
        {
            vector<SnakeSwap> out;
            for (const auto & s : j)
                out.push_back(SnakeSwap{field<int>(s, "variable"), field<int>(s, "from"), field<int>(s, "to")});
            return out;
        }
    }

    auto instance_to_json(const Instance & inst) -> json
    {
        json vars = json::array();
        for (VarId i = 0; i < inst.num_variables(); ++i)
            vars.push_back({{"id", i}, {"name", inst.variable_name(i)}, {"domain", inst.current_values(i)}});

        json cons = json::array();
        for (const auto & rel : inst.relations()) {
            json allowed = json::array();
            for (ValueIdx r = 0; r < rel.rows; ++r)
                for (ValueIdx c = 0; c < rel.cols; ++c)
                    if (rel.test(r, c) && inst.domain(rel.first).contains(r) && inst.domain(rel.second).contains(c))
                        allowed.push_back({inst.value_at(rel.first, r), inst.value_at(rel.second, c)});
            cons.push_back({{"scope", {rel.first, rel.second}}, {"allowed", allowed}});
        }
        return {{"name", inst.name()}, {"variables", vars}, {"constraints", cons}};
    }

    auto instance_from_json(const json & j) -> Instance
    {
        if (! j.is_object())
            throw FormatError("instance must be a JSON object");
        Instance::Builder b{j.contains("name") ? field<string>(j, "name") : string("instance")};
        const auto vars = field<json>(j, "variables");
        if (! vars.is_array())
            throw FormatError("\"variables\" must be an array");
        int expected = 0;
        for (const auto & v : vars) {
            if (field<int>(v, "id") != expected)
                throw FormatError("variable ids must be 0, 1, 2, ... in order");
            auto name = v.contains("name") ? field<string>(v, "name") : "x" + std::to_string(expected + 1);
            b.add_variable(name, field<vector<int>>(v, "domain"));
            ++expected;
        }
        if (j.contains("constraints")) {
            std::set<std::pair<int, int>> seen;
            for (const auto & c : field<json>(j, "constraints")) {
                auto scope = field<vector<int>>(c, "scope");
                if (scope.size() != 2)
                    throw FormatError("constraint scope must have two variables");
                if (scope[0] >= scope[1])
                    throw FormatError("constraint scope must be [i, j] with i < j");
                if (! seen.emplace(scope[0], scope[1]).second)
                    throw FormatError("duplicate constraint scope [" + std::to_string(scope[0]) + ", " + std::to_string(scope[1]) + "]");
                vector<std::pair<int, int>> allowed;
                for (const auto & p : field<json>(c, "allowed")) {
                    if (! p.is_array() || p.size() != 2 || ! p[0].is_number_integer() || ! p[1].is_number_integer())
                        throw FormatError("allowed tuples must be pairs of integers");
                    allowed.emplace_back(p[0].get<int>(), p[1].get<int>());
                }
                b.add_constraint(scope[0], scope[1], allowed);
            }
        }
        try {
            return b.build();
        }
        catch (const InstanceError & e) {
            throw FormatError(e.what());
        }
    }

    auto witness_to_json(const Witness & w) -> json
    {
        switch (w.index()) {
        case 0: return {{"unsupported_at", std::get<AcWitness>(w).unsupported_at}};
        case 1: return {{"substitute", std::get<NsWitness>(w).substitute}};
        case 2: {
            const auto & s = std::get<SsWitness>(w);
            return {{"substitute", s.substitute}, {"swaps", swaps_to_json(s.swaps)}};
        }
        case 3: {
            const auto & c = std::get<CnsWitness>(w);
            json covers = json::array();
            for (const auto & cov : c.covers)
                covers.push_back({{"conditioning_value", cov.conditioning_value}, {"substitute", cov.substitute}});
            return {{"conditioning", c.conditioning}, {"covers", covers}};
        }
        default: {
            const auto & c = std::get<ScssWitness>(w);
            json covers = json::array();
            for (const auto & cov : c.covers)
                covers.push_back({{"conditioning_value", cov.conditioning_value}, {"substitute", cov.substitute},
                    {"conditioning_swap", cov.conditioning_swap}, {"swaps", swaps_to_json(cov.swaps)}});
            return {{"conditioning", c.conditioning}, {"covers", covers}};
        }
        }
    }

    auto witness_from_json(Rule rule, const json & j) -> Witness
    {
        switch (rule) {
        case Rule::ac: return AcWitness{field<int>(j, "unsupported_at")};
        case Rule::ns: return NsWitness{field<int>(j, "substitute")};
        case Rule::ss:
            return SsWitness{field<int>(j, "substitute"), j.contains("swaps") ? swaps_from_json(j.at("swaps")) : vector<SnakeSwap>{}};
        case Rule::cns: {
            CnsWitness w{field<int>(j, "conditioning"), {}};
            if (j.contains("covers"))
                for (const auto & c : j.at("covers"))
                    w.covers.push_back(CnsCover{field<int>(c, "conditioning_value"), field<int>(c, "substitute")});
            return w;
        }
        case Rule::scss: {
            ScssWitness w{field<int>(j, "conditioning"), {}};
            if (j.contains("covers"))
                for (const auto & c : j.at("covers"))
                    w.covers.push_back(ScssCover{field<int>(c, "conditioning_value"), field<int>(c, "substitute"),
                        field<int>(c, "conditioning_swap"), c.contains("swaps") ? swaps_from_json(c.at("swaps")) : vector<SnakeSwap>{}});
            return w;
        }
        }
        throw FormatError("unknown rule");
    }

    auto trace_to_json(const Trace & trace, const std::optional<Instance> & final_instance) -> json
    {
        json steps = json::array();
        for (const auto & s : trace.steps)
            steps.push_back({{"step", s.step}, {"rule", rule_name(s.rule())}, {"variable", s.variable}, {"value", s.value},
                {"witness", witness_to_json(s.witness)}});
        json out{{"instance", trace.instance}, {"steps", steps}};
        if (final_instance) {
            json doms = json::array();
            for (VarId i = 0; i < final_instance->num_variables(); ++i)
                doms.push_back(final_instance->current_values(i));
            out["final_domains"] = doms;
        }
        return out;
    }

    auto trace_from_json(const json & j) -> Trace
    {
        Trace trace{j.contains("instance") ? field<string>(j, "instance") : string(), {}};
        for (const auto & s : field<json>(j, "steps")) {
            auto rule = parse_rule(field<string>(s, "rule"));
            if (! rule)
                throw FormatError("unknown rule \"" + field<string>(s, "rule") + "\"");
            auto witness = s.contains("witness") && ! s.at("witness").is_null() ? witness_from_json(*rule, s.at("witness"))
                                                                                 : witness_from_json(*rule, json::object());
            trace.append(field<int>(s, "variable"), field<int>(s, "value"), std::move(witness));
        }
        return trace;
    }

    auto replay_steps_from_json(const json & j) -> vector<ReplayStep>
    {
        vector<ReplayStep> out;
        for (const auto & s : field<json>(j, "steps")) {
            auto rule = parse_rule(field<string>(s, "rule"));
            if (! rule)
                throw FormatError("unknown rule \"" + field<string>(s, "rule") + "\"");
            ReplayStep step{field<int>(s, "variable"), field<int>(s, "value"), *rule, std::nullopt};
            if (s.contains("witness") && s.at("witness").is_object()) {
                const auto & w = s.at("witness");
                if (w.contains("conditioning"))
                    step.conditioning = field<int>(w, "conditioning");
                else if (w.contains("unsupported_at"))
                    step.conditioning = field<int>(w, "unsupported_at");
            }
            out.push_back(step);
        }
        return out;
    }

    auto final_domains_from_json(const json & j) -> std::optional<vector<vector<int>>>
    {
        if (! j.contains("final_domains"))
            return std::nullopt;
        return field<vector<vector<int>>>(j, "final_domains");
    }

    auto read_json(const string & path) -> json
    {
        std::ifstream in{path};
        if (! in)
            throw FormatError("cannot open " + path);
        try {
            return json::parse(in);
        }
        catch (const json::parse_error & e) {
            throw FormatError(path + ": " + e.what());
        }
    }

    auto write_json(const string & path, const json & j) -> void
    {
        std::ofstream out{path};
        if (! out)
            throw std::runtime_error("cannot write " + path);
        out << j.dump(2) << '\n';
    }
}
