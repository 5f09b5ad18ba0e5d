#pragma once

#include <c2chain/core_model.hpp>
#include <c2chain/fivegpp.hpp>
#include <c2chain/netgraph.hpp>

#include <map>
#include <random>
#include <set>
#include <tuple>
#include <variant>
#include <vector>

namespace c2chain
{

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits, so draws are identical
// across standard libraries.
double UniformUnit(Rng &rng);

struct SeenKey
{
    int attackId = 1;
    Direction direction = Direction::Forward;
    std::size_t index = 0;

    auto operator<=>(const SeenKey &) const = default;
};

class RoutingState
{
  public:
    explicit RoutingState(RoutingOption option = RoutingOption::PF, std::vector<double> forwardWeights = {},
                          std::vector<double> backwardWeights = {});

    RoutingOption option() const
    {
        return m_option;
    }

    // Empty when the direction uses uniform weights.
    const std::vector<double> &weights(Direction direction) const
    {
        return direction == Direction::Forward ? m_forwardWeights : m_backwardWeights;
    }

    std::size_t &cursor(NodeId node, int attackId)
    {
        return m_rrCursor[{node, attackId}];
    }

    bool seen(NodeId node, const SeenKey &key) const;
    void markSeen(NodeId node, const SeenKey &key);

  private:
    RoutingOption m_option;
    std::vector<double> m_forwardWeights;
    std::vector<double> m_backwardWeights;
    std::map<std::pair<NodeId, int>, std::size_t> m_rrCursor;
    std::map<NodeId, std::set<SeenKey>> m_seen;
};

// Throws Error(InvalidWeights) unless weights are non-negative and sum to 1.
void CheckWeights(const std::vector<double> &weights);

// PF: every candidate. RR: the candidate under the (node, attack) cursor, which
// then advances. EE-RR: one candidate drawn by weight. Throws Error(NoPath) on
// an empty candidate list.
std::vector<NodePath> SelectPaths(RoutingState &state, NodeId node, int attackId, Direction direction,
                                  const std::vector<NodePath> &candidates, Rng &rng);

enum class DropReason : std::uint8_t
{
    TtlExpired,
    Duplicate,
    Malformed,
};

const char *ToString(DropReason reason);

struct Consume
{
    fivegpp::GppHeader header;
};

struct Forward
{
    // outgoing word with the TTL already decremented
    std::uint32_t word = 0;
    int ttl = 0;
};

struct Drop
{
    DropReason reason{};
};

using ReceiveAction = std::variant<Consume, Forward, Drop>;

// What a node sees of an arriving fragment: the 20-bit header word plus the
// transfer context the embedding location conveys (attack, direction, index).
struct Arrival
{
    std::uint32_t word = 0;
    int attackId = 1;
    Direction direction = Direction::Forward;
    std::size_t index = 0;
};

// Records the fragment in the node's seen set unless it is dropped.
ReceiveAction OnReceive(RoutingState &state, NodeId node, const Arrival &arrival, const fivegpp::Keyring &keyring,
                        const fivegpp::Cipher &cipher = fivegpp::DefaultCipher());

} // namespace c2chain
