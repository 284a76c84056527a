#include <subsense/core.hh>

#include <algorithm>
#include <map>

using std::optional;
using std::pair;
using std::string;
using std::vector;

namespace subsense
{
    DomainSet::DomainSet(int capacity, bool full) :
        bits_(static_cast<std::size_t>(capacity), full ? 1 : 0),
        count_(full ? capacity : 0)
    {
    }

    auto DomainSet::erase(ValueIdx v) -> bool
    {
        if (! bits_[v])
            return false;
        bits_[v] = 0;
        --count_;
        return true;
    }

    auto DomainSet::insert(ValueIdx v) -> bool
    {
        if (bits_[v])
            return false;
        bits_[v] = 1;
        ++count_;
        return true;
    }

    auto DomainSet::members() const -> vector<ValueIdx>
    {
        vector<ValueIdx> result;
        result.reserve(count_);
        for (int v = 0; v < capacity(); ++v)
            if (bits_[v])
                result.push_back(v);
        return result;
    }

    auto DomainSet::first() const -> optional<ValueIdx>
    {
        for (int v = 0; v < capacity(); ++v)
            if (bits_[v])
                return v;
        return std::nullopt;
    }

    auto Relation::trivial() const -> bool
    {
        return std::all_of(allowed.begin(), allowed.end(), [](auto b) { return b != 0; });
    }

    Instance::Instance(std::shared_ptr<const Structure> s, vector<DomainSet> d) :
        structure_(std::move(s)),
        domains_(std::move(d))
    {
    }

    auto Instance::name() const -> const string & { return structure_->name; }

    auto Instance::num_variables() const -> int { return static_cast<int>(structure_->names.size()); }

    auto Instance::check_var(VarId i) const -> void
    {
        if (i < 0 || i >= num_variables())
            throw InstanceError("variable index " + std::to_string(i) + " out of range");
    }

    auto Instance::variable_name(VarId i) const -> const string &
    {
        check_var(i);
        return structure_->names[i];
    }

    auto Instance::original_values(VarId i) const -> std::span<const int>
    {
        check_var(i);
        return structure_->values[i];
    }

    auto Instance::original_size(VarId i) const -> int { return static_cast<int>(structure_->values[i].size()); }

    auto Instance::value_at(VarId i, ValueIdx v) const -> int { return structure_->values[i][v]; }

    auto Instance::index_of(VarId i, int value) const -> optional<ValueIdx>
    {
        check_var(i);
        const auto & vals = structure_->values[i];
        auto it = std::lower_bound(vals.begin(), vals.end(), value);
        if (it == vals.end() || *it != value)
            return std::nullopt;
        return static_cast<ValueIdx>(it - vals.begin());
    }

    auto Instance::domain(VarId i) const -> const DomainSet &
    {
        check_var(i);
        return domains_[i];
    }

    auto Instance::current_values(VarId i) const -> vector<int>
    {
        vector<int> result;
        for (auto v : domain(i).members())
            result.push_back(value_at(i, v));
        return result;
    }

    auto Instance::contains(VarId i, int value) const -> bool
    {
        auto v = index_of(i, value);
        return v && domains_[i].contains(*v);
    }

    auto Instance::find_arc(VarId i, VarId j) const -> const Arc *
    {
        const auto & arcs = structure_->arcs[i];
        auto it = std::lower_bound(arcs.begin(), arcs.end(), j, [](const Arc & a, VarId t) { return a.target < t; });
        if (it == arcs.end() || it->target != j)
            return nullptr;
        return &*it;
    }

    auto Instance::allows(VarId i, int a, VarId j, int b) const -> bool
    {
        check_var(i);
        check_var(j);
        if (i == j)
            throw InstanceError("allows() needs two distinct variables");
        auto ai = index_of(i, a);
        auto bj = index_of(j, b);
        if (! ai)
            throw InstanceError("value " + std::to_string(a) + " is not in the original domain of " + variable_name(i));
        if (! bj)
            throw InstanceError("value " + std::to_string(b) + " is not in the original domain of " + variable_name(j));
        return allows_idx(i, *ai, j, *bj);
    }

    auto Instance::allows_idx(VarId i, ValueIdx a, VarId j, ValueIdx b) const -> bool
    {
        auto arc = find_arc(i, j);
        if (! arc)
            return true;
        const auto & rel = structure_->relations[arc->relation];
        return arc->transposed ? rel.test(b, a) : rel.test(a, b);
    }

    auto Instance::has_edge(VarId i, VarId j) const -> bool
    {
        check_var(i);
        check_var(j);
        return i != j && find_arc(i, j) != nullptr;
    }

    auto Instance::neighbours(VarId i) const -> std::span<const VarId>
    {
        check_var(i);
        return structure_->neighbours[i];
    }

    auto Instance::num_edges() const -> int { return structure_->num_edges; }

    auto Instance::max_domain_size() const -> int
    {
        int d = 0;
        for (const auto & dom : domains_)
            d = std::max(d, dom.size());
        return d;
    }

    auto Instance::relations() const -> std::span<const Relation> { return structure_->relations; }

    auto Instance::remove_value(VarId i, int value) const -> Instance
    {
        auto v = index_of(i, value);
        if (! v || ! domains_[i].contains(*v))
            throw InstanceError("value " + std::to_string(value) + " is not in the current domain of " + variable_name(i));
        return remove_index(i, *v);
    }

    auto Instance::remove_index(VarId i, ValueIdx v) const -> Instance
    {
        check_var(i);
        if (v < 0 || v >= original_size(i) || ! domains_[i].contains(v))
            throw InstanceError("value position " + std::to_string(v) + " is not in the current domain of " + variable_name(i));
        auto d = domains_;
        d[i].erase(v);
        return Instance{structure_, std::move(d)};
    }

    auto Instance::with_domains(vector<DomainSet> domains) const -> Instance
    {
        if (static_cast<int>(domains.size()) != num_variables())
            throw InstanceError("domain vector has the wrong length");
        for (int i = 0; i < num_variables(); ++i) {
            if (domains[i].capacity() != original_size(i))
                throw InstanceError("domain of " + variable_name(i) + " has the wrong capacity");
            for (int v = 0; v < original_size(i); ++v)
                if (domains[i].contains(v) && ! domains_[i].contains(v))
                    throw InstanceError("domains may only shrink");
        }
        return Instance{structure_, std::move(domains)};
    }

    auto Instance::has_empty_domain() const -> bool
    {
        return std::any_of(domains_.begin(), domains_.end(), [](const DomainSet & d) { return d.empty(); });
    }

    auto Instance::domain_sizes() const -> vector<int>
    {
        vector<int> result;
        for (const auto & d : domains_)
            result.push_back(d.size());
        return result;
    }

    auto Instance::operator==(const Instance & other) const -> bool
    {
        if (domains_ != other.domains_)
            return false;
        if (structure_ == other.structure_)
            return true;
        const auto & a = *structure_;
        const auto & b = *other.structure_;
        return a.name == b.name && a.names == b.names && a.values == b.values && a.relations == b.relations;
    }

    Instance::Builder::Builder(string name) :
        name_(std::move(name))
    {
    }

    auto Instance::Builder::add_variable(string name, vector<int> values) -> VarId
    {
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (values[k] < 0)
                throw InstanceError("variable " + name + ": values must be non-negative");
            if (k > 0 && values[k] <= values[k - 1])
                throw InstanceError("variable " + name + ": domain must be strictly increasing");
        }
        names_.push_back(std::move(name));
        values_.push_back(std::move(values));
        return static_cast<VarId>(names_.size() - 1);
    }

    auto Instance::Builder::add_constraint(VarId i, VarId j, const vector<pair<int, int>> & allowed_values) -> void
    {
        auto n = static_cast<VarId>(names_.size());
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw InstanceError("constraint scope out of range");
        if (i == j)
            throw InstanceError("constraint scope must name two distinct variables");
        bool swap = i > j;
        if (swap)
            std::swap(i, j);
        for (const auto & r : relations_)
            if (r.first == i && r.second == j)
                throw InstanceError("duplicate constraint on {" + std::to_string(i) + "," + std::to_string(j) + "}");

        auto position = [&](VarId x, int value) {
            const auto & vals = values_[x];
            auto it = std::lower_bound(vals.begin(), vals.end(), value);
            if (it == vals.end() || *it != value)
                throw InstanceError("allowed pair mentions value " + std::to_string(value) + " outside the domain of " + names_[x]);
            return static_cast<ValueIdx>(it - vals.begin());
        };

        Relation rel;
        rel.first = i;
        rel.second = j;
        rel.rows = static_cast<int>(values_[i].size());
        rel.cols = static_cast<int>(values_[j].size());
        rel.allowed.assign(static_cast<std::size_t>(rel.rows * rel.cols), 0);
        for (auto [a, b] : allowed_values) {
            if (swap)
                std::swap(a, b);
            rel.allowed[position(i, a) * rel.cols + position(j, b)] = 1;
        }
        relations_.push_back(std::move(rel));
    }

    auto Instance::Builder::add_constraint(VarId i, VarId j, const std::function<auto(int, int)->bool> & predicate) -> void
    {
        auto n = static_cast<VarId>(names_.size());
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw InstanceError("constraint scope out of range");
        vector<pair<int, int>> pairs;
        for (int a : values_[i])
            for (int b : values_[j])
                if (predicate(a, b))
                    pairs.emplace_back(a, b);
        add_constraint(i, j, pairs);
    }

    auto Instance::Builder::build() const -> Instance
    {
        auto s = std::make_shared<Structure>();
        s->name = name_;
        s->names = names_;
        s->values = values_;
        s->relations = relations_;
        auto n = names_.size();
        s->arcs.resize(n);
        s->neighbours.resize(n);
        for (int r = 0; r < static_cast<int>(relations_.size()); ++r) {
            const auto & rel = relations_[r];
            if (rel.trivial())
                continue;
            s->arcs[rel.first].push_back({rel.second, r, false});
            s->arcs[rel.second].push_back({rel.first, r, true});
            ++s->num_edges;
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::sort(s->arcs[i].begin(), s->arcs[i].end(), [](const Arc & a, const Arc & b) { return a.target < b.target; });
            for (const auto & a : s->arcs[i])
                s->neighbours[i].push_back(a.target);
        }

        vector<DomainSet> domains;
        for (const auto & v : values_)
            domains.emplace_back(static_cast<int>(v.size()));
        return Instance{std::move(s), std::move(domains)};
    }

    auto rule_name(Rule r) -> string
    {
        switch (r) {
        case Rule::ac: return "AC";
        case Rule::ns: return "NS";
        case Rule::ss: return "SS";
        case Rule::cns: return "CNS";
        case Rule::scss: return "SCSS";
        }
        return "?";
    }

    auto parse_rule(const string & s) -> optional<Rule>
    {
        string lower;
        for (char c : s)
            lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        static const std::map<string, Rule> table{
            {"ac", Rule::ac}, {"ns", Rule::ns}, {"ss", Rule::ss}, {"cns", Rule::cns}, {"scss", Rule::scss}};
        auto it = table.find(lower);
        if (it == table.end())
            return std::nullopt;
        return it->second;
    }
}
