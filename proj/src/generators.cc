#include <subsense/generators.hh>

#include <map>
#include <numeric>
#include <random>
#include <string>

using std::set;
using std::string;
using std::vector;

namespace subsense::generators
{
    namespace
    {
        auto range(int lo, int hi) -> vector<int>
        {
            vector<int> v(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
            std::iota(v.begin(), v.end(), lo);
            return v;
        }

        auto name(int i) -> string { return "x" + std::to_string(i + 1); }
    }

    auto figure1a() -> Instance
    {
        Instance::Builder b{"figure1a"};
        for (int i = 0; i < 4; ++i)
            b.add_variable(name(i), {0, 1});
        b.add_constraint(0, 1, [](int p, int q) { return p == q; });
        b.add_constraint(2, 3, [](int p, int q) { return p == q; });
        b.add_constraint(1, 2, [](int p, int q) { return p == 1 || q == 1; });
        b.add_constraint(0, 3, [](int p, int q) { return p == 1 || q == 1; });
        return b.build();
    }

    auto figure1b() -> Instance
    {
        Instance::Builder b{"figure1b"};
        for (int i = 0; i < 3; ++i)
            b.add_variable(name(i), {0, 1, 2});
        b.add_constraint(0, 1, [](int p, int q) { return p != q; });
        b.add_constraint(0, 2, [](int p, int q) { return p != q; });
        b.add_constraint(1, 2, [](int p, int q) { return p >= q; });
        return b.build();
    }

    auto figure1c() -> Instance
    {
        Instance::Builder b{"figure1c"};
        for (int i = 0; i < 4; ++i)
            b.add_variable(name(i), {0, 1, 2, 3});
        b.add_constraint(0, 1, [](int p, int q) { return p != q; });
        b.add_constraint(0, 2, [](int p, int q) { return p != q; });
        b.add_constraint(0, 3, [](int p, int q) { return p != q; });
        b.add_constraint(1, 2, [](int p, int q) { return p <= q; });
        b.add_constraint(1, 3, [](int p, int q) { return p >= q; });
        b.add_constraint(2, 3, [](int p, int q) { return p >= q; });
        return b.build();
    }

    auto two_var_cns_vs_ns(int d) -> Instance
    {
        if (d < 2)
            throw InstanceError("two_var_cns_vs_ns needs d >= 2");
        Instance::Builder b{"two_var_cns_vs_ns_" + std::to_string(d)};
        b.add_variable("x1", range(1, d - 1));
        b.add_variable("x2", range(0, d - 1));
        b.add_constraint(0, 1, [](int p, int q) { return p == q || q == 0; });
        return b.build();
    }

    auto set_cover_instance(const set<int> & universe, const vector<set<int>> & sets) -> Instance
    {
        if (sets.empty())
            throw InstanceError("set cover needs at least one set");
        std::map<int, int> canon;
        for (int u : universe)
            canon.emplace(u, static_cast<int>(canon.size()) + 1);
        set<int> covered;
        for (const auto & s : sets)
            for (int u : s) {
                if (! canon.contains(u))
                    throw InstanceError("set element " + std::to_string(u) + " is outside the universe");
                covered.insert(u);
            }
        if (covered != universe)
            throw InstanceError("the sets do not cover the universe");

        int m = static_cast<int>(sets.size());
        int size = static_cast<int>(universe.size());
        Instance::Builder b{"setcover"};
        b.add_variable("x1", range(1, m));
        for (int i = 1; i < 4; ++i)
            b.add_variable(name(i), range(1, size));
        vector<std::pair<int, int>> pairs;
        for (int i = 0; i < m; ++i)
            for (int u : sets[i])
                pairs.emplace_back(i + 1, canon.at(u));
        b.add_constraint(0, 1, pairs);
        auto eq = [](int p, int q) { return p == q; };
        b.add_constraint(1, 2, eq);
        b.add_constraint(2, 3, eq);
        b.add_constraint(1, 3, eq);
        return b.build();
    }

    auto geq_chain(int len) -> Instance
    {
        if (len < 1)
            throw InstanceError("geq_chain needs len >= 1");
        Instance::Builder b{"geq_chain_" + std::to_string(len)};
        for (int i = 0; i < len; ++i)
            b.add_variable(name(i), {1, 2, 3});
        for (int i = 0; i + 1 < len; ++i)
            b.add_constraint(i, i + 1, [](int p, int q) { return p >= q; });
        return b.build();
    }

    auto anchored_geq_chain(int len) -> Instance
    {
        if (len < 2)
            throw InstanceError("anchored_geq_chain needs len >= 2");
        Instance::Builder b{"anchored_geq_chain_" + std::to_string(len)};
        for (int i = 0; i < len; ++i)
            b.add_variable(name(i), {1, 2, 3});
        for (int i = 0; i + 1 < len; ++i)
            b.add_constraint(i, i + 1, [](int p, int q) { return p >= q; });

        // Two boolean variables y = z per end. At the top end y may only be 0
        // when the end takes 3, and z is 1 at value 2 and 0 at value 3; the
        // bottom end mirrors this with 1 and 3 exchanged. Every end value
        // keeps a solution, yet the pair defeats every snake swap at the end.
        auto anchor = [&](VarId end, const string & tag, bool mirrored) {
            VarId y = b.add_variable("y" + tag, {0, 1});
            VarId z = b.add_variable("z" + tag, {0, 1});
            auto flip = [mirrored](int x) { return mirrored ? 4 - x : x; };
            b.add_constraint(end, y, [flip](int x, int v) { return flip(x) == 3 || v == 1; });
            b.add_constraint(end, z, [flip](int x, int v) { return flip(x) == 1 || v == (flip(x) == 2 ? 1 : 0); });
            b.add_constraint(y, z, [](int p, int q) { return p == q; });
        };
        anchor(0, "1", false);
        anchor(len - 1, "2", true);
        return b.build();
    }

    auto random_instance(int n, int d, double density, double tightness, std::uint64_t seed) -> Instance
    {
        if (n < 1 || d < 1)
            throw InstanceError("random_instance needs n >= 1 and d >= 1");
        if (density < 0 || density > 1 || tightness < 0 || tightness > 1)
            throw InstanceError("density and tightness must lie in [0, 1]");
        std::mt19937_64 rng{seed};
        std::bernoulli_distribution constrained{density}, allowed{tightness};
        Instance::Builder b{"random_n" + std::to_string(n) + "_d" + std::to_string(d) + "_s" + std::to_string(seed)};
        for (int i = 0; i < n; ++i)
            b.add_variable(name(i), range(0, d - 1));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (! constrained(rng))
                    continue;
                vector<std::pair<int, int>> pairs;
                for (int p = 0; p < d; ++p)
                    for (int q = 0; q < d; ++q)
                        if (allowed(rng))
                            pairs.emplace_back(p, q);
                b.add_constraint(i, j, pairs);
            }
        return b.build();
    }
}
