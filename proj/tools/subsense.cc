#include <subsense/ac_ns.hh>
#include <subsense/cns_engine.hh>
#include <subsense/generators.hh>
#include <subsense/io.hh>
#include <subsense/oracle.hh>
#include <subsense/pipeline.hh>
#include <subsense/scss_engine.hh>
#include <subsense/ss_engine.hh>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace subsense;
using std::cerr;
using std::cout;
using std::string;
using std::vector;

namespace
{
    constexpr int exit_reduced = 0;
    constexpr int exit_verify_failed = 1;
    constexpr int exit_bad_input = 2;
    constexpr int exit_unsatisfiable = 10;

    struct GenArgs
    {
        string family;
        string out;
        int n = 8, d = 4, len = 5, universe = 3;
        double density = 0.5, tightness = 0.5;
        std::uint64_t seed = 0;
        string sets;
    };

    // "12,23,13" over universe 3 -> {1,2}, {2,3}, {1,3}
    auto parse_sets(const string & text) -> vector<std::set<int>>
    {
        vector<std::set<int>> out;
        std::stringstream in{text};
        string item;
        while (std::getline(in, item, ',')) {
            std::set<int> s;
            for (char ch : item) {
                if (ch < '0' || ch > '9')
                    throw std::invalid_argument("set elements must be digits: \"" + item + "\"");
                s.insert(ch - '0');
            }
            out.push_back(std::move(s));
        }
        return out;
    }

    auto generate(const GenArgs & a) -> Instance
    {
        if (a.family == "figure1a")
            return generators::figure1a();
        if (a.family == "figure1b")
            return generators::figure1b();
        if (a.family == "figure1c")
            return generators::figure1c();
        if (a.family == "cns-vs-ns")
            return generators::two_var_cns_vs_ns(a.d);
        if (a.family == "setcover") {
            std::set<int> u;
            for (int i = 1; i <= a.universe; ++i)
                u.insert(i);
            return generators::set_cover_instance(u, parse_sets(a.sets));
        }
        if (a.family == "geq-chain")
            return generators::geq_chain(a.len);
        if (a.family == "anchored-geq-chain")
            return generators::anchored_geq_chain(a.len);
        if (a.family == "random")
            return generators::random_instance(a.n, a.d, a.density, a.tightness, a.seed);
        throw std::invalid_argument("unknown family \"" + a.family + "\"");
    }

    auto emit(const nlohmann::json & j, const string & path) -> void
    {
        if (path.empty() || path == "-")
            cout << j.dump(2) << '\n';
        else
            io::write_json(path, j);
    }

    auto cmd_gen(const GenArgs & a) -> int
    {
        emit(io::instance_to_json(generate(a)), a.out);
        return 0;
    }

    auto domains_text(const Instance & inst) -> string
    {
        string out;
        for (VarId i = 0; i < inst.num_variables(); ++i) {
            out += "  " + inst.variable_name(i) + " = {";
            bool first = true;
            for (int v : inst.current_values(i)) {
                out += (first ? "" : ",") + std::to_string(v);
                first = false;
            }
            out += "}\n";
        }
        return out;
    }

    struct ReduceArgs
    {
        string in, rules = "ss", out, trace, stats;
    };

    auto cmd_reduce(const ReduceArgs & a) -> int
    {
        auto inst = io::instance_from_json(io::read_json(a.in));
        auto rules = parse_rules(a.rules);
        auto result = reduce(inst, rules);
        const auto & rep = result.report;

        if (! a.out.empty())
            emit(io::instance_to_json(result.instance), a.out);
        if (! a.trace.empty())
            io::write_json(a.trace, io::trace_to_json(result.trace, result.instance));
        if (! a.stats.empty()) {
            std::ofstream csv{a.stats};
            csv << "instance,rules,eliminations,ac,ns,ss,cns,scss,updates,micros,unsatisfiable\n";
            csv << inst.name() << ",\"" << a.rules << "\"," << rep.total();
            for (int r = 0; r < 5; ++r)
                csv << ',' << rep.eliminations[r];
            csv << ',' << rep.updates << ',' << rep.micros << ',' << (rep.unsatisfiable ? 1 : 0) << '\n';
        }

        cout << "eliminations: " << rep.total();
        for (int r = 0; r < 5; ++r)
            if (rep.eliminations[r] > 0)
                cout << ' ' << rule_name(static_cast<Rule>(r)) << '=' << rep.eliminations[r];
        cout << "\nupdates: " << rep.updates << "\n";
        if (rep.unsatisfiable) {
            cout << "unsatisfiable: a domain was wiped out\n";
            return exit_unsatisfiable;
        }
        cout << "domains:\n" << domains_text(result.instance);
        return exit_reduced;
    }

    auto cmd_solve(const string & in, std::size_t limit) -> int
    {
        auto inst = io::instance_from_json(io::read_json(in));
        auto sols = oracle::solve(inst, limit);
        if (sols.empty()) {
            cout << "UNSAT\n";
            return 0;
        }
        for (const auto & s : sols) {
            for (std::size_t i = 0; i < s.size(); ++i)
                cout << (i ? " " : "") << s[i];
            cout << '\n';
        }
        return 0;
    }

    auto cmd_verify(const string & in, const string & trace_path) -> int
    {
        auto inst = io::instance_from_json(io::read_json(in));
        auto trace = io::read_json(trace_path);
        auto steps = io::replay_steps_from_json(trace);
        auto result = verify(inst, steps, io::final_domains_from_json(trace));
        if (result.ok) {
            cout << "verified: " << result.message << '\n';
            return 0;
        }
        if (result.failed_step > 0)
            cout << "failed at step " << result.failed_step << ": " << result.message << '\n';
        else
            cout << "failed: " << result.message << '\n';
        return exit_verify_failed;
    }

    struct BenchArgs
    {
        vector<int> n{20}, d{4, 8, 16};
        double density = 0.3, tightness = 0.5;
        int seeds = 5;
        std::uint64_t first_seed = 1;
        string rules = "ns,ss,cns";
        string out;
        bool ac_first = false;
    };

    // Each rule's engine runs alone on the generated instance, so the update
    // counts belong to that engine at the nominal domain size. With
    // --ac-first the engines start from the arc-consistent closure instead.
    auto cmd_bench(const BenchArgs & a) -> int
    {
        auto rules = parse_rules(a.rules);
        std::ofstream file;
        std::ostream * sink = &cout;
        if (! a.out.empty() && a.out != "-") {
            file.open(a.out);
            if (! file)
                throw std::runtime_error("cannot write " + a.out);
            sink = &file;
        }
        *sink << "family,n,d,density,tightness,seed,rule,eliminations,updates,micros\n";
        for (int n : a.n)
            for (int d : a.d)
                for (int k = 0; k < a.seeds; ++k) {
                    auto seed = a.first_seed + static_cast<std::uint64_t>(k);
                    auto raw = generators::random_instance(n, d, a.density, a.tightness, seed);
                    auto start = a.ac_first ? establish_ac(raw).instance : raw;
                    for (Rule r : rules) {
                        Reduction red = r == Rule::ac ? establish_ac(start)
                            : r == Rule::ns           ? ns_to_convergence(start)
                            : r == Rule::ss           ? ss_to_convergence(start)
                            : r == Rule::cns          ? cns_to_convergence(start)
                                                      : scss_to_convergence(start);
                        *sink << "random," << n << ',' << d << ',' << a.density << ',' << a.tightness << ',' << seed << ','
                              << rule_name(r) << ',' << red.report.total() << ',' << red.report.updates << ',' << red.report.micros << '\n';
                    }
                }
        return 0;
    }
}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{"Value elimination for binary constraint networks by substitution rules"};
    app.require_subcommand(1);

    GenArgs gen;
    auto * g = app.add_subcommand("gen", "Write a generated instance as JSON");
    g->add_option("family", gen.family, "figure1a | figure1b | figure1c | cns-vs-ns | setcover | geq-chain | anchored-geq-chain | random")
        ->required();
    g->add_option("-o,--out", gen.out, "Output file (default: standard output)");
    g->add_option("--n", gen.n, "random: number of variables");
    g->add_option("--d", gen.d, "random: domain size; cns-vs-ns: the parameter d");
    g->add_option("--density", gen.density, "random: probability that a pair is constrained");
    g->add_option("--tightness", gen.tightness, "random: probability that a value pair is allowed");
    g->add_option("--seed", gen.seed, "random: seed");
    g->add_option("--len", gen.len, "geq-chain: number of chain variables");
    g->add_option("--universe", gen.universe, "setcover: universe {1..N}");
    g->add_option("--sets", gen.sets, "setcover: comma separated sets of digits, e.g. 12,23,13");

    ReduceArgs red;
    auto * r = app.add_subcommand("reduce", "Eliminate values with a rule pipeline");
    r->add_option("instance", red.in, "Instance JSON")->required();
    r->add_option("--rules", red.rules, "Comma separated subset of ac,ns,ss,cns,scss, applied in order until nothing changes");
    r->add_option("-o,--out", red.out, "Write the reduced instance here");
    r->add_option("--trace", red.trace, "Write the elimination trace here");
    r->add_option("--stats", red.stats, "Write a one-row CSV report here");

    string solve_in;
    std::size_t limit = 1000;
    auto * s = app.add_subcommand("solve", "Enumerate solutions by backtracking");
    s->add_option("instance", solve_in, "Instance JSON")->required();
    s->add_option("--limit", limit, "Maximum number of solutions printed");

    string verify_in, verify_trace;
    auto * v = app.add_subcommand("verify", "Replay a trace, certifying every step");
    v->add_option("instance", verify_in, "Instance JSON the trace starts from")->required();
    v->add_option("trace", verify_trace, "Trace JSON")->required();

    BenchArgs bench;
    auto * b = app.add_subcommand("bench", "Run engines on random instances and write CSV");
    b->add_option("--n", bench.n, "Variable counts");
    b->add_option("--d", bench.d, "Domain sizes");
    b->add_option("--density", bench.density);
    b->add_option("--tightness", bench.tightness);
    b->add_option("--seeds", bench.seeds, "Seeds per cell");
    b->add_option("--first-seed", bench.first_seed);
    b->add_option("--rules", bench.rules);
    b->add_option("-o,--out", bench.out, "CSV file (default: standard output)");
    b->add_flag("--ac-first", bench.ac_first, "Start every engine from the arc-consistent closure");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError & e) {
        app.exit(e);
        return exit_bad_input;
    }

    try {
        if (*g)
            return cmd_gen(gen);
        if (*r)
            return cmd_reduce(red);
        if (*s)
            return cmd_solve(solve_in, limit);
        if (*v)
            return cmd_verify(verify_in, verify_trace);
        return cmd_bench(bench);
    }
    catch (const io::FormatError & e) {
        cerr << "error: " << e.what() << '\n';
        return exit_bad_input;
    }
    catch (const InstanceError & e) {
        cerr << "error: " << e.what() << '\n';
        return exit_bad_input;
    }
    catch (const std::invalid_argument & e) {
        cerr << "error: " << e.what() << '\n';
        return exit_bad_input;
    }
    catch (const std::exception & e) {
        cerr << "error: " << e.what() << '\n';
        return exit_verify_failed;
    }
}
