#include <c2chain/routing.hpp>

#include <cmath>
#include <numeric>

namespace c2chain
{

double UniformUnit(Rng &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void CheckWeights(const std::vector<double> &weights)
{
    if (weights.empty())
        return;
    double sum = 0;
    for (double w : weights)
    {
        if (!(w >= 0) || !std::isfinite(w))
            throw Error(ErrorCode::InvalidWeights, "weights must be finite and non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidWeights, "weights must sum to 1, got " + std::to_string(sum));
}

RoutingState::RoutingState(RoutingOption option, std::vector<double> forwardWeights,
                           std::vector<double> backwardWeights)
    : m_option(option), m_forwardWeights(std::move(forwardWeights)), m_backwardWeights(std::move(backwardWeights))
{
    CheckWeights(m_forwardWeights);
    CheckWeights(m_backwardWeights);
}

bool RoutingState::seen(NodeId node, const SeenKey &key) const
{
    auto it = m_seen.find(node);
    return it != m_seen.end() && it->second.contains(key);
}

void RoutingState::markSeen(NodeId node, const SeenKey &key)
{
    m_seen[node].insert(key);
}

std::vector<NodePath> SelectPaths(RoutingState &state, NodeId node, int attackId, Direction direction,
                                  const std::vector<NodePath> &candidates, Rng &rng)
{
    if (candidates.empty())
        throw Error(ErrorCode::NoPath, std::string("no candidate path at ") + ToString(node));

    switch (state.option())
    {
    case RoutingOption::PF:
        return candidates;
    case RoutingOption::RR: {
        auto &cursor = state.cursor(node, attackId);
        cursor %= candidates.size();
        auto chosen = candidates[cursor];
        cursor = (cursor + 1) % candidates.size();
        return {chosen};
    }
    case RoutingOption::EERR: {
        const auto &weights = state.weights(direction);
        std::vector<double> w = weights;
        if (w.empty())
            w.assign(candidates.size(), 1.0 / static_cast<double>(candidates.size()));
        if (w.size() != candidates.size())
            throw Error(ErrorCode::InvalidWeights, std::to_string(w.size()) + " weights for " +
                                                       std::to_string(candidates.size()) + " candidate paths");
        double u = UniformUnit(rng);
        double acc = 0;
        std::size_t last = 0;
        for (std::size_t i = 0; i < w.size(); i++)
        {
            if (w[i] <= 0)
                continue;
            last = i;
            acc += w[i];
            if (u < acc)
                return {candidates[i]};
        }
        // u landed in the rounding gap above the last positive weight
        return {candidates[last]};
    }
    }
    return candidates;
}

const char *ToString(DropReason reason)
{
    switch (reason)
    {
    case DropReason::TtlExpired:
        return "TtlExpired";
    case DropReason::Duplicate:
        return "Duplicate";
    case DropReason::Malformed:
        return "Malformed";
    }
    return "?";
}

ReceiveAction OnReceive(RoutingState &state, NodeId node, const Arrival &arrival, const fivegpp::Keyring &keyring,
                        const fivegpp::Cipher &cipher)
{
    SeenKey key{arrival.attackId, arrival.direction, arrival.index};
    if (state.seen(node, key))
        return Drop{DropReason::Duplicate};

    fivegpp::DecodeResult decoded;
    try
    {
        decoded = fivegpp::DecodeHeader(arrival.word, keyring, cipher, static_cast<std::uint32_t>(arrival.index));
    }
    catch (const Error &)
    {
        return Drop{DropReason::Malformed};
    }

    if (const auto *header = std::get_if<fivegpp::GppHeader>(&decoded))
    {
        NodeId terminal = arrival.direction == Direction::Forward ? header->executionPoint : header->exitPoint;
        if (terminal == node)
        {
            state.markSeen(node, key);
            return Consume{*header};
        }
    }

    int ttl = fivegpp::DecodeClearFields(arrival.word).ttl - 1;
    if (ttl <= 0)
        return Drop{DropReason::TtlExpired};
    state.markSeen(node, key);
    return Forward{fivegpp::WithTtl(arrival.word, ttl), ttl};
}

} // namespace c2chain
