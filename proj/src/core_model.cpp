#include <c2chain/core_model.hpp>

#include <algorithm>
#include <array>
#include <cctype>

namespace c2chain
{

namespace
{

template <typename E, std::size_t N>
std::optional<E> ParseByName(std::string_view name, const std::array<std::pair<const char *, E>, N> &table)
{
    auto lowered = std::string(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto &[text, value] : table)
    {
        std::string candidate = text;
        std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (candidate == lowered)
            return value;
    }
    return std::nullopt;
}

constexpr std::array<std::pair<const char *, NodeId>, 10> kNodeNames = {{
    {"UE", NodeId::UE},
    {"GNB", NodeId::GNB},
    {"AMF", NodeId::AMF},
    {"SMF", NodeId::SMF},
    {"UPF", NodeId::UPF},
    {"AUSF", NodeId::AUSF},
    {"UDM", NodeId::UDM},
    {"PCF", NodeId::PCF},
    {"SEPP", NodeId::SEPP},
    {"NEF", NodeId::NEF},
}};

constexpr std::array<std::pair<const char *, AttackType>, 3> kAttackTypeNames = {{
    {"key-ext", AttackType::UdmKeyExtraction},
    {"pws", AttackType::PwsAbuse},
    {"localization", AttackType::UeLocalization},
}};

constexpr std::array<std::pair<const char *, RoutingOption>, 3> kRoutingNames = {{
    {"pf", RoutingOption::PF},
    {"rr", RoutingOption::RR},
    {"eerr", RoutingOption::EERR},
}};

constexpr std::array<std::pair<const char *, Interface>, 5> kInterfaceNames = {{
    {"Uu", Interface::Uu},
    {"N1", Interface::N1},
    {"N2", Interface::N2},
    {"SBI", Interface::Sbi},
    {"N4", Interface::N4},
}};

} // namespace

const char *ToString(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::InvalidScenario:
        return "InvalidScenario";
    case ErrorCode::MissingKey:
        return "MissingKey";
    case ErrorCode::FieldOutOfRange:
        return "FieldOutOfRange";
    case ErrorCode::CapacityTooSmall:
        return "CapacityTooSmall";
    case ErrorCode::ConflictingTotals:
        return "ConflictingTotals";
    case ErrorCode::NoPath:
        return "NoPath";
    case ErrorCode::InvalidWeights:
        return "InvalidWeights";
    case ErrorCode::DivisionByZero:
        return "DivisionByZero";
    case ErrorCode::TargetUnknown:
        return "TargetUnknown";
    }
    return "?";
}

const char *ToString(NodeId node)
{
    return kNodeNames[static_cast<std::size_t>(node)].first;
}

std::optional<NodeId> ParseNodeId(std::string_view name)
{
    // case-insensitive so the usual "gNB" spelling parses
    return ParseByName(name, kNodeNames);
}

const char *ToString(Direction direction)
{
    return direction == Direction::Forward ? "forward" : "backward";
}

std::optional<Direction> ParseDirection(std::string_view name)
{
    if (name == "forward")
        return Direction::Forward;
    if (name == "backward")
        return Direction::Backward;
    return std::nullopt;
}

const char *ToString(AttackType type)
{
    for (const auto &[text, value] : kAttackTypeNames)
        if (value == type)
            return text;
    return "?";
}

std::optional<AttackType> ParseAttackType(std::string_view name)
{
    return ParseByName(name, kAttackTypeNames);
}

const char *ToString(RoutingOption option)
{
    for (const auto &[text, value] : kRoutingNames)
        if (value == option)
            return text;
    return "?";
}

std::optional<RoutingOption> ParseRoutingOption(std::string_view name)
{
    return ParseByName(name, kRoutingNames);
}

const char *ToString(Mode mode)
{
    return mode == Mode::IM3C ? "im3c" : "pb3c";
}

std::optional<Mode> ParseMode(std::string_view name)
{
    constexpr std::array<std::pair<const char *, Mode>, 2> names = {{{"im3c", Mode::IM3C}, {"pb3c", Mode::PB3C}}};
    return ParseByName(name, names);
}

const char *ToString(Interface iface)
{
    for (const auto &[text, value] : kInterfaceNames)
        if (value == iface)
            return text;
    return "?";
}

std::optional<Interface> ParseInterface(std::string_view name)
{
    return ParseByName(name, kInterfaceNames);
}

std::set<NodeId> Environment::referencedNodes() const
{
    std::set<NodeId> nodes;
    for (const auto &proc : procedures)
    {
        for (const auto &msg : proc.messages)
        {
            nodes.insert(msg.source);
            nodes.insert(msg.target);
        }
    }
    for (const auto &channel : transientChannels)
    {
        nodes.insert(channel.first);
        nodes.insert(channel.last);
        nodes.insert(channel.via.begin(), channel.via.end());
    }
    return nodes;
}

const Procedure *Environment::findProcedure(std::string_view name) const
{
    for (const auto &proc : procedures)
        if (proc.name == name)
            return &proc;
    return nullptr;
}

std::vector<Violation> ValidateEnvironment(const Environment &env)
{
    std::vector<Violation> violations;

    for (const auto &proc : env.procedures)
    {
        for (std::size_t i = 0; i < proc.messages.size(); i++)
        {
            const auto &msg = proc.messages[i];
            auto entity = proc.name + "[" + std::to_string(i) + "] " + msg.label;
            if (msg.source == msg.target)
                violations.push_back({entity, "source equals target"});
            if (msg.availableSpace < 0)
                violations.push_back({entity, "negative available space"});
        }
    }

    for (std::size_t i = 0; i < env.transientChannels.size(); i++)
    {
        const auto &channel = env.transientChannels[i];
        auto entity = "transient_channels[" + std::to_string(i) + "] " + channel.carrier;
        if (channel.capacity <= 0)
            violations.push_back({entity, "capacity must be positive"});
        if (channel.first == channel.last)
            violations.push_back({entity, "first equals last"});
        const auto *proc = env.findProcedure(channel.procedure);
        if (proc == nullptr)
        {
            violations.push_back({entity, "unknown procedure '" + channel.procedure + "'"});
        }
        else
        {
            if (channel.anchorMessage >= proc->messages.size() || channel.deliveryMessage >= proc->messages.size())
                violations.push_back({entity, "message index outside procedure"});
            else if (channel.deliveryMessage < channel.anchorMessage)
                violations.push_back({entity, "delivery precedes anchor"});
        }
    }

    auto referenced = env.referencedNodes();
    for (auto node : env.compromised)
    {
        if (!referenced.contains(node))
            violations.push_back({ToString(node), "compromised node appears in no procedure or transient channel"});
    }

    return violations;
}

std::vector<Violation> ValidateAttack(const Attack &attack)
{
    std::vector<Violation> violations;
    auto entity = "attack " + attack.name;
    if (attack.forwardBits < 0)
        violations.push_back({entity, "negative forward bits"});
    if (attack.backwardBits < 0)
        violations.push_back({entity, "negative backward bits"});
    if (!attack.exit.has_value() && attack.backwardBits != 0)
        violations.push_back({entity, "backward bits require an exit node"});
    if (attack.exit.has_value() && attack.backwardBits == 0)
        violations.push_back({entity, "exit node given without backward bits"});
    return violations;
}

BitCount CapacityOf(const ProcedureMessage &msg, std::optional<BitCount> override)
{
    if (override.has_value())
        return *override;
    return msg.availableSpace;
}

} // namespace c2chain
