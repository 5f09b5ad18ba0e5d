#pragma once

#include <c2chain/core_model.hpp>

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace c2chain
{

struct RoutingConfig
{
    RoutingOption option = RoutingOption::PF;
    // EE-RR weights over the candidate path list of each direction; empty
    // means uniform.
    std::vector<double> forwardWeights;
    std::vector<double> backwardWeights;

    bool operator==(const RoutingConfig &) const = default;
};

struct Scenario
{
    std::string name;
    std::string version;
    std::vector<NodeId> nodes;
    Environment env;
    std::vector<Attack> attacks;
    RoutingConfig routing;
    // key ids held per node; nodes not listed get key id 1 when controlled
    std::map<NodeId, std::vector<int>> keys;

    bool operator==(const Scenario &) const = default;

    const Attack *findAttack(std::string_view name) const;
};

// Structural parse of a scenario document. Throws Error(InvalidScenario) on
// unknown keys, unknown node names or malformed values.
Scenario ScenarioFromJson(const nlohmann::json &doc);
nlohmann::json ScenarioToJson(const Scenario &scenario);

Scenario LoadScenarioFile(const std::string &path);

// Environment invariants plus scenario-level checks (declared node list,
// attack tuples, key ids).
std::vector<Violation> ValidateScenario(const Scenario &scenario);

} // namespace c2chain
