#pragma once

#include <c2chain/core_model.hpp>
#include <c2chain/fivegpp.hpp>
#include <c2chain/scenario.hpp>

#include <map>
#include <string>
#include <vector>

namespace c2chain
{

inline constexpr const char *kCatalogVersion = "v1";
inline constexpr const char *kRegistrationName = "registration";

// How header overhead is reported for a transfer.
enum class OverheadConvention : std::uint8_t
{
    HeaderOverPayload,
    HeaderOverTotal,
};

const char *ToString(OverheadConvention convention);

struct AttackCatalogEntry
{
    Attack attack;
    fivegpp::GppHeader headerTemplate;
    std::string notes;
    // false for scripted variants that bypass the covert header entirely
    bool framed = true;
    OverheadConvention backwardConvention = OverheadConvention::HeaderOverPayload;
    // lower end of a variable-size forward payload (e.g. cell id length)
    std::optional<BitCount> forwardBitsMin;
};

Procedure RegistrationProcedure();

// SBI operations of the registration procedure and their parameter counts.
const std::map<std::string, ParameterCounts> &SbiParameterTable();

std::vector<AttackCatalogEntry> AttackCatalog();
const AttackCatalogEntry *FindCatalogEntry(std::string_view name);

// The attacks plotted in the capacity sweep.
std::vector<std::string> SweepAttackNames();

std::vector<TransientChannel> AkaTransientChannels();

// Simulated UDM subscriber database: SUPI -> long-term key.
using SubscriberKeyStore = std::map<std::uint64_t, fivegpp::Key>;
SubscriberKeyStore DemoSubscriberStore();

// builtin:fig3, builtin:fig4, builtin:aka
std::vector<std::string> BuiltinScenarioNames();
Scenario BuiltinScenario(std::string_view name);

// "builtin:<name>" or a path to a scenario JSON file.
Scenario ResolveScenario(const std::string &ref);

} // namespace c2chain
