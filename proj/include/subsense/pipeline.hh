#pragma once

#include <subsense/core.hh>
#include <subsense/network.hh>
#include <subsense/scss_engine.hh>
#include <subsense/trace.hh>

#include <optional>
#include <string>
#include <vector>

namespace subsense
{
    /// One engine to convergence. ns, ss and cns establish arc consistency
    /// first; scss subsumes it and runs alone.
    [[nodiscard]] auto run_rule(const Instance & inst, Rule rule, const EngineOptions & options = {}) -> Reduction;

    /// Runs the rules in order, each to convergence, and repeats the whole
    /// list until a full pass eliminates nothing or a domain wipes out.
    /// Steps are renumbered across the concatenated trace.
    [[nodiscard]] auto reduce(const Instance & inst, const std::vector<Rule> & rules, const EngineOptions & options = {}) -> Reduction;

    /// Parses a comma separated rule list; throws std::invalid_argument on an unknown name.
    [[nodiscard]] auto parse_rules(const std::string & list) -> std::vector<Rule>;

    struct VerifyResult
    {
        bool ok = false;
        int failed_step = 0; // 1-based; 0 when all steps certified
        std::string message;
    };

    /// Replays `steps` on `inst`; when `final_domains` is given, the replayed
    /// instance must end with exactly those current domains.
    [[nodiscard]] auto verify(const Instance & inst, const std::vector<ReplayStep> & steps,
        const std::optional<std::vector<std::vector<int>>> & final_domains = std::nullopt) -> VerifyResult;
}
