#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c2chain
{

using BitCount = std::int64_t;

enum class ErrorCode
{
    InvalidScenario,
    MissingKey,
    FieldOutOfRange,
    CapacityTooSmall,
    ConflictingTotals,
    NoPath,
    InvalidWeights,
    DivisionByZero,
    TargetUnknown,
};

const char *ToString(ErrorCode code);

class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), m_code(code)
    {
    }

    ErrorCode code() const noexcept
    {
        return m_code;
    }

  private:
    ErrorCode m_code;
};

// Closed set of network functions. The enumeration order is the lexicographic
// order used for every deterministic tie-break.
enum class NodeId : std::uint8_t
{
    UE,
    GNB,
    AMF,
    SMF,
    UPF,
    AUSF,
    UDM,
    PCF,
    SEPP,
    NEF,
};

inline constexpr NodeId kAllNodes[] = {NodeId::UE,  NodeId::GNB, NodeId::AMF, NodeId::SMF,  NodeId::UPF,
                                       NodeId::AUSF, NodeId::UDM, NodeId::PCF, NodeId::SEPP, NodeId::NEF};

const char *ToString(NodeId node);
std::optional<NodeId> ParseNodeId(std::string_view name);

enum class Direction : std::uint8_t
{
    Forward,
    Backward,
};

const char *ToString(Direction direction);
std::optional<Direction> ParseDirection(std::string_view name);

enum class AttackType : std::uint8_t
{
    UdmKeyExtraction,
    PwsAbuse,
    UeLocalization,
};

const char *ToString(AttackType type);
std::optional<AttackType> ParseAttackType(std::string_view name);

enum class RoutingOption : std::uint8_t
{
    PF,
    RR,
    EERR,
};

const char *ToString(RoutingOption option);
std::optional<RoutingOption> ParseRoutingOption(std::string_view name);

enum class Mode : std::uint8_t
{
    IM3C,
    PB3C,
};

const char *ToString(Mode mode);
std::optional<Mode> ParseMode(std::string_view name);

enum class Interface : std::uint8_t
{
    Uu,
    N1,
    N2,
    Sbi,
    N4,
};

const char *ToString(Interface iface);
std::optional<Interface> ParseInterface(std::string_view name);

// Request/response parameter counts of an SBI operation. An absent count is a
// dash in the source table.
struct ParameterCounts
{
    std::optional<int> requestRequired;
    std::optional<int> requestOptional;
    std::optional<int> responseRequired;
    std::optional<int> responseOptional;

    bool operator==(const ParameterCounts &) const = default;
};

struct ProcedureMessage
{
    NodeId source{};
    NodeId target{};
    BitCount availableSpace = 0;
    std::string label;
    std::optional<Interface> iface;
    std::optional<ParameterCounts> params;

    bool operator==(const ProcedureMessage &) const = default;
};

struct Procedure
{
    std::string name;
    std::vector<ProcedureMessage> messages;

    bool operator==(const Procedure &) const = default;
};

// A parameter that uncompromised nodes relay unmodified. The carrier must be
// held by `first` before message `anchorMessage` of `procedure` fires and is
// available at `last` once message `deliveryMessage` has fired.
struct TransientChannel
{
    NodeId first{};
    NodeId last{};
    std::vector<NodeId> via;
    BitCount capacity = 0;
    Direction direction = Direction::Forward;
    std::string carrier;
    std::string procedure;
    std::size_t anchorMessage = 0;
    std::size_t deliveryMessage = 0;

    bool operator==(const TransientChannel &) const = default;
};

struct Environment
{
    std::vector<Procedure> procedures;
    std::set<NodeId> compromised;
    std::vector<TransientChannel> transientChannels;

    bool operator==(const Environment &) const = default;

    std::set<NodeId> referencedNodes() const;
    const Procedure *findProcedure(std::string_view name) const;
};

struct Attack
{
    std::string name;
    AttackType type = AttackType::UdmKeyExtraction;
    NodeId entry{};
    NodeId execution{};
    std::optional<NodeId> exit;
    BitCount forwardBits = 0;
    BitCount backwardBits = 0;

    bool operator==(const Attack &) const = default;
};

struct Violation
{
    std::string entity;
    std::string message;

    bool operator==(const Violation &) const = default;
};

std::vector<Violation> ValidateEnvironment(const Environment &env);
std::vector<Violation> ValidateAttack(const Attack &attack);

inline constexpr BitCount kDefaultCapacity = 64;

BitCount CapacityOf(const ProcedureMessage &msg, std::optional<BitCount> override = std::nullopt);

} // namespace c2chain
