#pragma once

#include <subsense/core.hh>
#include <subsense/scss_engine.hh>
#include <subsense/trace.hh>

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace subsense::io
{
    class FormatError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// {"name", "variables": [{"id", "name", "domain"}], "constraints": [{"scope": [i, j], "allowed": [[a, b], ...]}]}.
    /// Current domains are written as the domains; relations are restricted to them.
    [[nodiscard]] auto instance_to_json(const Instance & inst) -> nlohmann::json;
    [[nodiscard]] auto instance_from_json(const nlohmann::json & j) -> Instance;

    [[nodiscard]] auto witness_to_json(const Witness & w) -> nlohmann::json;
    [[nodiscard]] auto witness_from_json(Rule rule, const nlohmann::json & j) -> Witness;

    /// {"instance", "steps": [{"step", "rule", "variable", "value", "witness"}], optional "final_domains"}.
    [[nodiscard]] auto trace_to_json(const Trace & trace, const std::optional<Instance> & final_instance = std::nullopt) -> nlohmann::json;
    [[nodiscard]] auto trace_from_json(const nlohmann::json & j) -> Trace;
    /// Claimed steps of a trace for replay. Witnesses are optional; when
    /// present, the conditioning variable (or the unsupported-at variable for
    /// AC) is taken from them.
    [[nodiscard]] auto replay_steps_from_json(const nlohmann::json & j) -> std::vector<ReplayStep>;
    [[nodiscard]] auto final_domains_from_json(const nlohmann::json & j) -> std::optional<std::vector<std::vector<int>>>;

    [[nodiscard]] auto read_json(const std::string & path) -> nlohmann::json;
    auto write_json(const std::string & path, const nlohmann::json & j) -> void;
}
