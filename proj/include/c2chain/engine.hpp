#pragma once

#include <c2chain/catalog.hpp>
#include <c2chain/core_model.hpp>
#include <c2chain/fivegpp.hpp>
#include <c2chain/netgraph.hpp>
#include <c2chain/routing.hpp>
#include <c2chain/scenario.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace c2chain
{

inline constexpr std::size_t kDefaultMaxProcedures = 1000;
inline constexpr std::uint64_t kKeySeed = 0x6b617474ULL;

struct SimConfig
{
    Environment env;
    Attack attack;
    Mode mode = Mode::PB3C;
    RoutingConfig routing;
    std::optional<BitCount> capacityOverride;
    // feasibility threshold; defaults per mode
    std::optional<BitCount> threshold;
    std::size_t maxProcedures = kDefaultMaxProcedures;
    std::uint64_t seed = 1;
    int ttl = fivegpp::kMaxTtl;
    int keyId = 1;
    int attackId = 1;
    // key ids held per controlled node; unlisted controlled nodes hold keyId
    std::map<NodeId, std::vector<int>> keys;
    // execution enqueues the backward payload within the same procedure
    bool backwardSameProcedure = true;
    bool identityCipher = false;
};

SimConfig MakeSimConfig(const Scenario &scenario, const Attack &attack);

struct TraceHop
{
    std::size_t procedure = 0;
    std::size_t message = 0;
    NodeId from{};
    NodeId to{};
    std::size_t fragment = 0;
    EdgeKind kind = EdgeKind::Direct;
    std::string outcome;

    bool operator==(const TraceHop &) const = default;
};

struct EffectRecord
{
    std::size_t procedure = 0;
    NodeId node{};
    std::string description;

    bool operator==(const EffectRecord &) const = default;
};

struct SimResult
{
    bool completed = false;
    std::size_t proceduresUsed = 0;
    std::size_t messagesCarryingPayload = 0;
    std::size_t fragmentTransmissions = 0;
    std::vector<TraceHop> forwardTrace;
    std::vector<TraceHop> backwardTrace;
    std::optional<std::size_t> attackExecutedAt;
    std::vector<EffectRecord> effects;
    FeasibilityReport feasibility;
    BitCount fragmentCapacity = 0;
    std::size_t forwardFragments = 0;
    std::size_t backwardFragments = 0;
    BitCount bitsConsumedAtExecution = 0;
    BitCount bitsConsumedAtExit = 0;
    // reassembled and deciphered payloads equal what was sent
    bool payloadIntact = false;
    std::string reason;

    bool operator==(const SimResult &) const = default;
};

// Throws Error(CapacityTooSmall) and header/key errors; a timeout or an
// infeasible attack is reported as completed = false.
SimResult Run(const SimConfig &config);

struct SweepRow
{
    BitCount bits = 0;
    bool completed = false;
    std::size_t procedures = 0;
    std::size_t messages = 0;
    std::string error;

    bool operator==(const SweepRow &) const = default;
};

// One Run per capacity with the override set. Rows come back in input order
// whatever the job count.
std::vector<SweepRow> SweepCapacity(const SimConfig &config, const std::vector<BitCount> &bitsRange,
                                    unsigned jobs = 1);

std::string SweepCsv(const std::vector<SweepRow> &rows);

struct AkaOptions
{
    int keyId = 1;
    bool backwardSameProcedure = true;
    std::size_t maxProcedures = 64;
    bool identityCipher = false;
};

struct AkaCarrier
{
    std::size_t procedure = 0;
    Direction direction = Direction::Forward;
    fivegpp::Bits ciphertext;
    std::vector<std::uint64_t> supis;
};

struct AttackScript
{
    std::vector<std::uint64_t> targets;
    std::vector<AkaCarrier> carriers;
    std::map<std::uint64_t, fivegpp::Key> recoveredKeys;
    bool completed = false;
    std::size_t proceduresUsed = 0;
    std::size_t forwardCarriers = 0;
    std::size_t backwardCarriers = 0;
    std::string reason;
};

// Key extraction over the environment's transient channels without the covert
// header: each encrypted SUPI rides one forward carrier, extracted keys are
// packed into backward carriers. Throws Error(MissingKey) when the attacker
// keyring lacks the key id and Error(TargetUnknown) when the subscriber store
// has no entry for a target.
AttackScript TransientAkaAttack(const Environment &env, const std::vector<std::uint64_t> &targets,
                                const fivegpp::Keyring &attackerKeyring, const SubscriberKeyStore &store,
                                const AkaOptions &options = {});

} // namespace c2chain
