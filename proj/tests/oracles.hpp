#pragma once

// Reference models written against the protocol description rather than the
// library, used to cross-check it. Nothing here calls into the code under test
// except for plain data types.

#include <c2chain/core_model.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle
{

using c2chain::AttackType;
using c2chain::NodeId;
using c2chain::RoutingOption;

// Header code tables, transcribed by hand.
inline int ExecCode(NodeId n)
{
    switch (n)
    {
    case NodeId::UDM:
        return 1;
    case NodeId::AMF:
        return 2;
    case NodeId::GNB:
        return 3;
    case NodeId::SMF:
        return 4;
    case NodeId::AUSF:
        return 5;
    case NodeId::PCF:
        return 6;
    case NodeId::UPF:
        return 7;
    case NodeId::NEF:
        return 8;
    default:
        return 0;
    }
}

inline int ExitCode(NodeId n)
{
    switch (n)
    {
    case NodeId::UE:
        return 1;
    case NodeId::UPF:
        return 2;
    case NodeId::SEPP:
        return 3;
    case NodeId::NEF:
        return 4;
    default:
        return 0;
    }
}

inline int RoutingCode(RoutingOption r)
{
    return r == RoutingOption::PF ? 1 : r == RoutingOption::RR ? 2 : 3;
}

inline int TypeCode(AttackType t)
{
    return t == AttackType::UdmKeyExtraction ? 1 : t == AttackType::PwsAbuse ? 2 : 3;
}

// Packs the 20 header bits as a string, bit 1 first, each field holding
// (code - 1), then reads the string back as a binary number.
inline std::uint32_t PackByString(int key, int routing, int ttl, bool split, int exec, int attackId, int type,
                                  int exit)
{
    auto field = [](int value, int width) {
        std::string s;
        for (int b = width - 1; b >= 0; b--)
            s += ((value >> b) & 1) ? '1' : '0';
        return s;
    };
    std::string bits = field(key - 1, 4) + field(routing - 1, 2) + field(ttl - 1, 3) + (split ? "1" : "0") +
                       field(exec - 1, 3) + field(attackId - 1, 3) + field(type - 1, 2) + field(exit - 1, 2);
    std::uint32_t word = 0;
    for (char c : bits)
        word = word * 2 + (c == '1' ? 1u : 0u);
    return word;
}

// Valid when routing and type codes are not the reserved fourth value.
inline bool WordIsValid(std::uint32_t word)
{
    int routing = static_cast<int>((word >> 14) & 3u) + 1;
    int type = static_cast<int>((word >> 2) & 3u) + 1;
    return routing != 4 && type != 4;
}

// One-decimal percentage of num/den using long double, for comparison with
// exact integer rounding.
inline std::string PercentText(long long num, long long den)
{
    long double pct = 100.0L * static_cast<long double>(num) / static_cast<long double>(den);
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(1);
    s << pct;
    return s.str();
}

// Warshall closure over usable messages: source and target controlled and
// capacity at least `threshold`. Nodes not referenced by any message are not
// in the graph and so reach nothing, not even themselves.
struct Closure
{
    std::set<NodeId> present;
    std::array<std::array<bool, 10>, 10> reach{};

    bool reaches(NodeId a, NodeId b) const
    {
        if (!present.count(a) || !present.count(b))
            return false;
        return a == b || reach[static_cast<int>(a)][static_cast<int>(b)];
    }
};

inline Closure BuildClosure(const c2chain::Environment &env, const std::set<NodeId> &controlled, long long threshold)
{
    Closure c;
    for (const auto &p : env.procedures)
        for (const auto &m : p.messages)
        {
            c.present.insert(m.source);
            c.present.insert(m.target);
        }
    for (const auto &p : env.procedures)
        for (const auto &m : p.messages)
            if (controlled.count(m.source) && controlled.count(m.target) && m.availableSpace >= threshold)
                c.reach[static_cast<int>(m.source)][static_cast<int>(m.target)] = true;
    for (int k = 0; k < 10; k++)
        for (int i = 0; i < 10; i++)
            for (int j = 0; j < 10; j++)
                if (c.reach[i][k] && c.reach[k][j])
                    c.reach[i][j] = true;
    return c;
}

struct FloodOutcome
{
    bool feasible = false;
    bool completes = false;
    std::size_t procedures = 0;
};

// Flooding in piggyback mode as an explicit state machine over bitmasks. Each
// node holds a mask of fragments; each ordered pair remembers which fragments
// both ends know the receiver has. A message from u to v with room for `s`
// fragments takes the lowest unknown backward fragments first, then forward
// ones. Receivers drop what they have seen, terminals keep what they consume.
// The walk stops at completion or when a (state, procedure slot) pair recurs,
// which proves the run never completes. No TTL: with at most five nodes and
// deduplication no copy travels more than four hops.
inline FloodOutcome FloodOracle(const c2chain::Environment &env, const c2chain::Attack &attack)
{
    constexpr long long kHeader = 20;
    FloodOutcome out;
    std::set<NodeId> controlled = env.compromised;
    controlled.insert(attack.entry);
    if (attack.exit)
        controlled.insert(*attack.exit);

    auto closure = BuildClosure(env, controlled, kHeader + 1);
    bool fwdOk = closure.reaches(attack.entry, attack.execution);
    bool bwdOk = !attack.exit || closure.reaches(attack.execution, *attack.exit);
    out.feasible = fwdOk && bwdOk;
    if (!out.feasible)
        return out;

    std::int64_t fragCap = -1;
    for (const auto &p : env.procedures)
        for (const auto &m : p.messages)
            if (controlled.count(m.source) && controlled.count(m.target) && m.availableSpace >= kHeader + 1)
                fragCap = fragCap < 0 ? m.availableSpace : std::min<std::int64_t>(fragCap, m.availableSpace);
    if (fragCap < 0)
        fragCap = 64;
    long long chunk = fragCap - kHeader;
    int nF = static_cast<int>((attack.forwardBits + chunk - 1) / chunk);
    bool backwardNeeded = attack.exit && attack.backwardBits > 0;
    int nB = backwardNeeded ? static_cast<int>((attack.backwardBits + chunk - 1) / chunk) : 0;
    const std::uint64_t allF = nF == 64 ? ~0ull : ((1ull << nF) - 1);
    const std::uint64_t allB = nB == 64 ? ~0ull : ((1ull << nB) - 1);
    NodeId exec = attack.execution;
    NodeId exit = attack.exit.value_or(NodeId::UE);

    // masks indexed by node; pair masks by from*10+to
    std::array<std::uint64_t, 10> heldF{}, heldB{}, seenF{}, seenB{};
    std::array<std::uint64_t, 100> knownF{}, knownB{};
    std::uint64_t gotF = 0, gotB = 0;
    bool executed = false;
    bool done = false;

    auto idx = [](NodeId n) { return static_cast<int>(n); };

    auto startBackward = [&]() {
        executed = true;
        if (!backwardNeeded)
        {
            done = true;
            return;
        }
        if (exec == exit)
        {
            gotB = allB;
            done = true;
            return;
        }
        heldB[idx(exec)] = allB;
        seenB[idx(exec)] = allB;
    };

    if (nF == 0 || attack.entry == exec)
    {
        gotF = allF;
        startBackward();
    }
    else
    {
        heldF[idx(attack.entry)] = allF;
        seenF[idx(attack.entry)] = allF;
    }
    if (done)
    {
        out.completes = true;
        out.procedures = 1;
        return out;
    }

    auto stateKey = [&](std::size_t slot) {
        std::ostringstream s;
        s << slot << '|' << gotF << ',' << gotB << ',' << executed;
        for (int i = 0; i < 10; i++)
            s << '|' << heldF[i] << ',' << heldB[i] << ',' << seenF[i] << ',' << seenB[i];
        for (int i = 0; i < 100; i++)
            if (knownF[i] || knownB[i])
                s << '|' << i << ':' << knownF[i] << ',' << knownB[i];
        return s.str();
    };

    std::set<std::string> visited;
    const std::size_t P = env.procedures.size();
    for (std::size_t k = 1;; k++)
    {
        const auto &proc = env.procedures[(k - 1) % P];
        for (const auto &m : proc.messages)
        {
            if (!controlled.count(m.source) || !controlled.count(m.target) || m.availableSpace < kHeader + 1)
                continue;
            int u = idx(m.source), v = idx(m.target), pair = u * 10 + v, rpair = v * 10 + u;
            long long slots = m.availableSpace / fragCap;
            std::vector<std::pair<bool, int>> picked;
            std::uint64_t candB = heldB[u] & ~knownB[pair];
            std::uint64_t candF = heldF[u] & ~knownF[pair];
            for (int i = 0; i < 64 && static_cast<long long>(picked.size()) < slots; i++)
                if ((candB >> i) & 1u)
                    picked.push_back({true, i});
            for (int i = 0; i < 64 && static_cast<long long>(picked.size()) < slots; i++)
                if ((candF >> i) & 1u)
                    picked.push_back({false, i});
            for (auto [backward, i] : picked)
            {
                std::uint64_t bit = 1ull << i;
                auto &known = backward ? knownB : knownF;
                known[pair] |= bit;
                known[rpair] |= bit;
                auto &seen = backward ? seenB : seenF;
                if (seen[v] & bit)
                    continue;
                seen[v] |= bit;
                NodeId terminal = backward ? exit : exec;
                if (m.target == terminal)
                {
                    if (backward)
                    {
                        gotB |= bit;
                        if (gotB == allB)
                            done = true;
                    }
                    else
                    {
                        gotF |= bit;
                        if (gotF == allF)
                            startBackward();
                    }
                    if (done)
                    {
                        out.completes = true;
                        out.procedures = k;
                        return out;
                    }
                }
                else
                {
                    (backward ? heldB : heldF)[v] |= bit;
                }
            }
        }
        if (!visited.insert(stateKey(k % P)).second)
            return out;
    }
}

// Small random environments for oracle comparison.
struct RandomCase
{
    c2chain::Environment env;
    c2chain::Attack attack;
};

inline RandomCase MakeRandomCase(std::mt19937_64 &rng)
{
    const std::vector<NodeId> pool = {NodeId::UE, NodeId::GNB, NodeId::AMF, NodeId::UDM, NodeId::UPF};
    const std::vector<long long> caps = {16, 21, 24, 32, 44, 48, 64, 96};
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    RandomCase rc;
    std::size_t nodeCount = 2 + pick(4);
    std::vector<NodeId> nodes(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(nodeCount));

    std::size_t procCount = 1 + pick(2);
    std::size_t messageBudget = 1 + pick(6);
    for (std::size_t p = 0; p < procCount; p++)
        rc.env.procedures.push_back({"p" + std::to_string(p), {}});
    for (std::size_t m = 0; m < messageBudget; m++)
    {
        c2chain::ProcedureMessage msg;
        msg.source = nodes[pick(nodes.size())];
        do
            msg.target = nodes[pick(nodes.size())];
        while (msg.target == msg.source);
        msg.availableSpace = caps[pick(caps.size())];
        msg.label = "m" + std::to_string(m);
        rc.env.procedures[pick(procCount)].messages.push_back(msg);
    }
    // an empty procedure is legal but every procedure needs a name
    std::set<NodeId> referenced;
    for (const auto &p : rc.env.procedures)
        for (const auto &m : p.messages)
        {
            referenced.insert(m.source);
            referenced.insert(m.target);
        }
    for (auto n : referenced)
        if (rng() % 2)
            rc.env.compromised.insert(n);

    rc.attack.name = "R";
    rc.attack.entry = nodes[pick(nodes.size())];
    std::vector<NodeId> execs;
    for (auto n : nodes)
        if (ExecCode(n) != 0)
            execs.push_back(n);
    rc.attack.execution = execs[pick(execs.size())];
    std::vector<NodeId> exits;
    for (auto n : nodes)
        if (ExitCode(n) != 0)
            exits.push_back(n);
    rc.attack.forwardBits = 1 + static_cast<long long>(pick(40));
    if (!exits.empty() && rng() % 3 != 0)
    {
        rc.attack.exit = exits[pick(exits.size())];
        rc.attack.backwardBits = 1 + static_cast<long long>(pick(40));
    }
    return rc;
}

} // namespace oracle
