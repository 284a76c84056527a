#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace subsense
{
    using VarId = int;

    // Position of a value inside its variable's original domain. Engines and
    // counters index by this, so nothing reindexes after eliminations.
    using ValueIdx = int;

    class InstanceError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Membership set over a variable's original value positions.
    class DomainSet
    {
    public:
        DomainSet() = default;
        explicit DomainSet(int capacity, bool full = true);

        [[nodiscard]] auto contains(ValueIdx v) const -> bool { return bits_[v] != 0; }
        [[nodiscard]] auto size() const -> int { return count_; }
        [[nodiscard]] auto capacity() const -> int { return static_cast<int>(bits_.size()); }
        [[nodiscard]] auto empty() const -> bool { return count_ == 0; }

        auto erase(ValueIdx v) -> bool;
        auto insert(ValueIdx v) -> bool;

        [[nodiscard]] auto members() const -> std::vector<ValueIdx>;
        [[nodiscard]] auto first() const -> std::optional<ValueIdx>;

        auto operator<=>(const DomainSet &) const = default;

    private:
        std::vector<std::uint8_t> bits_;
        int count_ = 0;
    };

    /// A stored binary relation over the original domains of (first, second),
    /// with first < second. Row index is a position in first's domain.
    struct Relation
    {
        VarId first = 0;
        VarId second = 0;
        int rows = 0;
        int cols = 0;
        std::vector<std::uint8_t> allowed;

        [[nodiscard]] auto test(ValueIdx r, ValueIdx c) const -> bool { return allowed[r * cols + c] != 0; }
        [[nodiscard]] auto trivial() const -> bool;
        auto operator==(const Relation &) const -> bool = default;
    };

    /// Immutable binary CSP snapshot. Relations and original domains are
    /// shared between snapshots; only the current domains are per-snapshot.
    class Instance
    {
    public:
        class Builder;

        [[nodiscard]] auto name() const -> const std::string &;
        [[nodiscard]] auto num_variables() const -> int;
        [[nodiscard]] auto variable_name(VarId i) const -> const std::string &;

        [[nodiscard]] auto original_values(VarId i) const -> std::span<const int>;
        [[nodiscard]] auto original_size(VarId i) const -> int;
        [[nodiscard]] auto value_at(VarId i, ValueIdx v) const -> int;
        [[nodiscard]] auto index_of(VarId i, int value) const -> std::optional<ValueIdx>;

        [[nodiscard]] auto domain(VarId i) const -> const DomainSet &;
        [[nodiscard]] auto domains() const -> const std::vector<DomainSet> & { return domains_; }
        [[nodiscard]] auto current_values(VarId i) const -> std::vector<int>;
        [[nodiscard]] auto contains(VarId i, int value) const -> bool;

        // Checked, value-based. True for pairs without a stored non-trivial constraint.
        [[nodiscard]] auto allows(VarId i, int a, VarId j, int b) const -> bool;
        // Unchecked, position-based; i != j.
        [[nodiscard]] auto allows_idx(VarId i, ValueIdx a, VarId j, ValueIdx b) const -> bool;

        [[nodiscard]] auto has_edge(VarId i, VarId j) const -> bool;
        [[nodiscard]] auto neighbours(VarId i) const -> std::span<const VarId>;
        [[nodiscard]] auto num_edges() const -> int;
        [[nodiscard]] auto max_domain_size() const -> int;
        [[nodiscard]] auto relations() const -> std::span<const Relation>;

        [[nodiscard]] auto remove_value(VarId i, int value) const -> Instance;
        [[nodiscard]] auto remove_index(VarId i, ValueIdx v) const -> Instance;
        [[nodiscard]] auto with_domains(std::vector<DomainSet> domains) const -> Instance;

        [[nodiscard]] auto has_empty_domain() const -> bool;
        [[nodiscard]] auto domain_sizes() const -> std::vector<int>;

        // Same structure (names, original domains, relations) and same current domains.
        auto operator==(const Instance & other) const -> bool;

    private:
        struct Arc
        {
            VarId target;
            int relation;
            bool transposed;
        };

        struct Structure
        {
            std::string name;
            std::vector<std::string> names;
            std::vector<std::vector<int>> values;
            std::vector<Relation> relations;
            std::vector<std::vector<Arc>> arcs;         // non-trivial only, sorted by target
            std::vector<std::vector<VarId>> neighbours; // same order as arcs
            int num_edges = 0;
        };

        Instance(std::shared_ptr<const Structure> s, std::vector<DomainSet> d);

        [[nodiscard]] auto find_arc(VarId i, VarId j) const -> const Arc *;
        auto check_var(VarId i) const -> void;

        std::shared_ptr<const Structure> structure_;
        std::vector<DomainSet> domains_;
    };

    class Instance::Builder
    {
    public:
        explicit Builder(std::string name = "instance");

        auto add_variable(std::string name, std::vector<int> values) -> VarId;
        auto add_constraint(VarId i, VarId j, const std::vector<std::pair<int, int>> & allowed_values) -> void;
        auto add_constraint(VarId i, VarId j, const std::function<auto(int, int)->bool> & predicate) -> void;

        [[nodiscard]] auto build() const -> Instance;

    private:
        std::string name_;
        std::vector<std::string> names_;
        std::vector<std::vector<int>> values_;
        std::vector<Relation> relations_;
    };

    enum class Rule
    {
        ac,
        ns,
        ss,
        cns,
        scss
    };

    [[nodiscard]] auto rule_name(Rule r) -> std::string;
    [[nodiscard]] auto parse_rule(const std::string & s) -> std::optional<Rule>;
}
