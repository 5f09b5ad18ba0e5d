#include <c2chain/engine.hpp>

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

namespace c2chain
{

using fivegpp::Bits;
using fivegpp::Fragment;
using fivegpp::GppHeader;
using fivegpp::Keyring;

SimConfig MakeSimConfig(const Scenario &scenario, const Attack &attack)
{
    SimConfig config;
    config.env = scenario.env;
    config.attack = attack;
    config.routing = scenario.routing;
    config.keys = scenario.keys;
    return config;
}

namespace
{

constexpr std::uint64_t kPayloadSaltTag = 0x5041594cULL;

const fivegpp::Cipher &CipherFor(bool identity)
{
    return identity ? fivegpp::TestIdentityCipher() : fivegpp::DefaultCipher();
}

Bits PayloadSalt(std::size_t index)
{
    return fivegpp::Concat(fivegpp::BitsFromUint(kPayloadSaltTag, 32), fivegpp::BitsFromUint(index, 32));
}

Bits RandomBits(BitCount count, Rng &rng)
{
    Bits bits(static_cast<std::size_t>(count));
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < bits.size(); i++)
    {
        if (i % 64 == 0)
            word = rng();
        bits[i] = ((word >> (63 - i % 64)) & 1u) != 0;
    }
    return bits;
}

std::string EffectText(const Attack &attack, BitCount bits)
{
    std::ostringstream out;
    switch (attack.type)
    {
    case AttackType::UdmKeyExtraction:
        out << "subscriber key lookup from " << bits << " bit request";
        break;
    case AttackType::PwsAbuse:
        out << "warning broadcast triggered with " << bits << " bit cell id";
        break;
    case AttackType::UeLocalization:
        out << "location query from " << bits << " bit request";
        break;
    }
    return out.str();
}

GppHeader HeaderFor(const SimConfig &config)
{
    const auto &attack = config.attack;
    auto exec = fivegpp::ExecutionCode(attack.execution);
    if (!exec)
        throw Error(ErrorCode::FieldOutOfRange,
                    std::string(ToString(attack.execution)) + " has no execution point code");
    NodeId exit = attack.exit.value_or(NodeId::UE);
    if (!fivegpp::ExitCode(exit))
        throw Error(ErrorCode::FieldOutOfRange, std::string(ToString(exit)) + " has no exit point code");

    GppHeader header;
    header.keyId = config.keyId;
    header.routing = config.routing.option;
    header.ttl = config.ttl;
    header.executionPoint = attack.execution;
    header.attackId = config.attackId;
    header.attackType = attack.type;
    header.exitPoint = exit;
    return header;
}

std::size_t DirIndex(Direction d)
{
    return d == Direction::Forward ? 0 : 1;
}

// Shared state of one run: keyrings, payloads, reassembly stores.
class RunBase
{
  public:
    explicit RunBase(const SimConfig &config)
        : m_config(config), m_cipher(CipherFor(config.identityCipher)),
          m_routing(config.routing.option, config.routing.forwardWeights, config.routing.backwardWeights),
          m_rng(config.seed)
    {
        const auto &attack = config.attack;
        auto violations = ValidateAttack(attack);
        if (!violations.empty())
            throw Error(ErrorCode::InvalidScenario, violations.front().entity + ": " + violations.front().message);
        if (config.maxProcedures < 1)
            throw Error(ErrorCode::InvalidScenario, "max_procedures must be at least 1");
        if (config.ttl < 1 || config.ttl > fivegpp::kMaxTtl)
            throw Error(ErrorCode::FieldOutOfRange, "ttl must be in 1..8");

        m_options.mode = config.mode;
        m_options.threshold = config.threshold;
        m_options.capacityOverride = config.capacityOverride;
        m_options.attackerControlled.insert(attack.entry);
        if (attack.exit)
            m_options.attackerControlled.insert(*attack.exit);
        m_graph = BuildPuppeteerGraph(config.env, m_options);
        m_result.feasibility = Feasible(attack, m_graph);

        for (auto node : ControlledNodes(config.env, m_options))
        {
            auto it = config.keys.find(node);
            std::vector<int> ids = it != config.keys.end() ? it->second : std::vector<int>{config.keyId};
            m_rings.emplace(node, Keyring::Derived(ids, kKeySeed));
        }

        Rng payloadRng(config.seed ^ 0x9e3779b97f4a7c15ULL);
        m_plain[0] = RandomBits(attack.forwardBits, payloadRng);
        m_plain[1] = RandomBits(attack.backwardBits, payloadRng);
        m_header = HeaderFor(config);
    }

  protected:
    const Keyring &ringOf(NodeId node) const
    {
        static const Keyring empty;
        auto it = m_rings.find(node);
        return it == m_rings.end() ? empty : it->second;
    }

    NodeId terminalOf(Direction dir) const
    {
        return dir == Direction::Forward ? m_config.attack.execution : m_config.attack.exit.value_or(NodeId::UE);
    }

    NodeId originOf(Direction dir) const
    {
        return dir == Direction::Forward ? m_config.attack.entry : m_config.attack.execution;
    }

    // Fragments with enciphered payloads, keyed by the sender's ring.
    std::vector<Fragment> makeFragments(Direction dir, BitCount capacity)
    {
        auto &plain = m_plain[DirIndex(dir)];
        auto frags = fivegpp::FragmentPayload(plain, capacity, m_header);
        const auto &key = ringOf(originOf(dir)).at(m_header.keyId);
        for (auto &frag : frags)
            frag.payload = fivegpp::CipherTransform(frag.payload, key, PayloadSalt(frag.index), m_cipher);
        m_frags[DirIndex(dir)] = frags;
        if (dir == Direction::Forward)
            m_result.forwardFragments = frags.size();
        else
            m_result.backwardFragments = frags.size();
        return frags;
    }

    std::uint32_t wordFor(Direction dir, const Fragment &frag) const
    {
        return fivegpp::EncodeHeader(frag.header, ringOf(originOf(dir)), m_cipher,
                                     static_cast<std::uint32_t>(frag.index));
    }

    // Stores a consumed fragment; true once the direction's payload is whole.
    bool consume(Direction dir, std::size_t index)
    {
        auto d = DirIndex(dir);
        m_got[d].emplace(index, m_frags[d].at(index));
        return m_got[d].size() == m_frags[d].size();
    }

    // Deciphers at the terminal and checks the reassembled payload.
    BitCount finishDirection(Direction dir)
    {
        auto d = DirIndex(dir);
        const auto &ring = ringOf(terminalOf(dir));
        std::vector<Fragment> frags;
        for (auto [index, frag] : m_got[d])
        {
            frag.payload = fivegpp::CipherTransform(frag.payload, ring.at(m_header.keyId), PayloadSalt(index), m_cipher);
            frags.push_back(std::move(frag));
        }
        auto whole = fivegpp::Reassemble(frags);
        const auto *bits = std::get_if<Bits>(&whole);
        m_intact[d] = bits != nullptr && *bits == m_plain[d];
        return bits != nullptr ? static_cast<BitCount>(bits->size()) : 0;
    }

    void recordExecution(std::size_t procedure, BitCount bits)
    {
        m_result.bitsConsumedAtExecution = bits;
        m_result.attackExecutedAt = procedure;
        m_result.effects.push_back({procedure, m_config.attack.execution, EffectText(m_config.attack, bits)});
    }

    void recordExit(std::size_t procedure, BitCount bits)
    {
        m_result.bitsConsumedAtExit = bits;
        NodeId exit = terminalOf(Direction::Backward);
        m_result.effects.push_back({procedure, exit, "attack result received, " + std::to_string(bits) + " bit"});
    }

    bool needsBackward() const
    {
        return m_config.attack.exit.has_value() && m_config.attack.backwardBits > 0;
    }

    void complete(std::size_t procedures)
    {
        m_result.completed = true;
        m_result.proceduresUsed = procedures;
        m_result.payloadIntact = m_intact[0] && (!needsBackward() || m_intact[1]);
        m_result.reason = "completed";
    }

    std::vector<TraceHop> &traceOf(Direction dir)
    {
        return dir == Direction::Forward ? m_result.forwardTrace : m_result.backwardTrace;
    }

    const SimConfig &m_config;
    const fivegpp::Cipher &m_cipher;
    RoutingState m_routing;
    Rng m_rng;
    PuppeteerOptions m_options;
    PuppeteerGraph m_graph;
    std::map<NodeId, Keyring> m_rings;
    GppHeader m_header;
    Bits m_plain[2];
    std::vector<Fragment> m_frags[2];
    std::map<std::size_t, Fragment> m_got[2];
    bool m_intact[2] = {true, true};
    SimResult m_result;
};

struct Copy
{
    Direction dir = Direction::Forward;
    std::size_t index = 0;
    std::uint32_t word = 0;
    // source route under RR / EE-RR, empty under flooding
    NodePath route;
    std::size_t hop = 0;
};

// Backward fragments go first: they only exist once the forward payload has
// been consumed, so any forward copy still in flight is spent.
bool CopyBefore(const Copy &a, const Copy &b)
{
    return std::make_pair(a.dir == Direction::Forward, a.index) < std::make_pair(b.dir == Direction::Forward, b.index);
}

class Pb3cRun : public RunBase
{
  public:
    using RunBase::RunBase;

    SimResult run()
    {
        if (!m_result.feasibility.feasible)
        {
            m_result.reason = "infeasible: " + m_result.feasibility.reason;
            return m_result;
        }
        const auto &env = m_config.env;
        indexEdges();
        m_result.fragmentCapacity = fragmentCapacity();

        try
        {
            originate(Direction::Forward, 1);
        }
        catch (const Error &e)
        {
            if (e.code() != ErrorCode::NoPath)
                throw;
            m_result.reason = e.what();
            return m_result;
        }
        if (m_result.completed)
            return m_result;

        std::size_t lastActive = 0;
        for (std::size_t k = 1; k <= m_config.maxProcedures; k++)
        {
            m_procedure = k;
            std::size_t p = (k - 1) % env.procedures.size();
            m_moved = false;
            if (!m_nextProcedure.empty())
            {
                auto &held = m_held[originOf(Direction::Backward)];
                for (auto &copy : m_nextProcedure)
                    insertSorted(held, std::move(copy));
                m_nextProcedure.clear();
                m_moved = true;
            }
            try
            {
                if (runProcedure(p))
                {
                    complete(k);
                    return m_result;
                }
            }
            catch (const Error &e)
            {
                if (e.code() != ErrorCode::NoPath)
                    throw;
                m_result.proceduresUsed = k;
                m_result.reason = e.what();
                return m_result;
            }
            if (m_moved)
                lastActive = k;
            bool idle = m_transit.empty() && m_nextProcedure.empty();
            if (idle && k - lastActive >= env.procedures.size())
            {
                m_result.proceduresUsed = k;
                m_result.reason = "stalled after " + std::to_string(k) + " procedures";
                return m_result;
            }
        }
        m_result.proceduresUsed = m_config.maxProcedures;
        m_result.reason = "timeout after " + std::to_string(m_config.maxProcedures) + " procedures";
        return m_result;
    }

  private:
    struct Transit
    {
        std::size_t channel = 0;
        NodeId to{};
        std::vector<Copy> copies;
    };

    void indexEdges()
    {
        for (const auto &edge : m_graph.edges())
        {
            if (edge.kind == EdgeKind::Direct)
                m_direct[{edge.procedure, edge.message}] = edge;
            else
                m_channels[edge.channel] = edge;
        }
    }

    BitCount fragmentCapacity() const
    {
        if (m_config.capacityOverride)
            return *m_config.capacityOverride;
        std::optional<BitCount> smallest;
        for (const auto &edge : m_graph.edges())
            if (!smallest || edge.capacity < *smallest)
                smallest = edge.capacity;
        return smallest.value_or(kDefaultCapacity);
    }

    static void insertSorted(std::vector<Copy> &held, Copy copy)
    {
        auto at = std::upper_bound(held.begin(), held.end(), copy, CopyBefore);
        held.insert(at, std::move(copy));
    }

    // Puts a direction's fragments at its origin. Returns after recording
    // execution or completion when the origin is the terminal.
    void originate(Direction dir, std::size_t procedure)
    {
        auto origin = originOf(dir);
        auto terminal = terminalOf(dir);
        auto frags = makeFragments(dir, m_result.fragmentCapacity);

        if (frags.empty() || origin == terminal)
        {
            for (const auto &frag : frags)
                consume(dir, frag.index);
            directionDone(dir, procedure);
            return;
        }

        std::vector<NodePath> candidates;
        if (m_config.routing.option != RoutingOption::PF)
            candidates = EnumeratePaths(m_graph, origin, terminal, static_cast<std::size_t>(m_config.ttl));

        std::vector<Copy> copies;
        for (const auto &frag : frags)
        {
            Copy copy{dir, frag.index, wordFor(dir, frag), {}, 0};
            m_routing.markSeen(origin, {m_config.attackId, dir, frag.index});
            if (m_config.routing.option == RoutingOption::PF)
            {
                copies.push_back(std::move(copy));
                continue;
            }
            for (auto &path : SelectPaths(m_routing, origin, m_config.attackId, dir, candidates, m_rng))
            {
                Copy routed = copy;
                routed.route = std::move(path);
                copies.push_back(std::move(routed));
            }
        }

        bool later = dir == Direction::Backward && !m_config.backwardSameProcedure;
        for (auto &copy : copies)
        {
            if (later)
                m_nextProcedure.push_back(std::move(copy));
            else
                insertSorted(m_held[origin], std::move(copy));
        }
    }

    void directionDone(Direction dir, std::size_t procedure)
    {
        auto bits = finishDirection(dir);
        if (dir == Direction::Forward)
        {
            recordExecution(procedure, bits);
            if (!needsBackward())
            {
                complete(procedure);
                return;
            }
            originate(Direction::Backward, procedure);
        }
        else
        {
            recordExit(procedure, bits);
            complete(procedure);
        }
    }

    // Copies at `from` eligible for the next hop to `to`, at most `slots`.
    std::vector<std::size_t> pick(NodeId from, NodeId to, std::size_t slots)
    {
        std::vector<std::size_t> chosen;
        auto it = m_held.find(from);
        if (it == m_held.end() || slots == 0)
            return chosen;
        const auto &known = m_known[{from, to}];
        for (std::size_t i = 0; i < it->second.size() && chosen.size() < slots; i++)
        {
            const auto &copy = it->second[i];
            bool eligible = copy.route.empty() ? !known.contains({copy.dir, copy.index})
                                               : copy.hop + 1 < copy.route.size() && copy.route[copy.hop + 1] == to;
            if (eligible)
                chosen.push_back(i);
        }
        return chosen;
    }

    std::vector<Copy> take(NodeId from, NodeId to, std::size_t slots)
    {
        auto chosen = pick(from, to, slots);
        std::vector<Copy> out;
        if (chosen.empty())
            return out;
        auto &held = m_held[from];
        for (auto i : chosen)
        {
            const auto &copy = held[i];
            m_known[{from, to}].insert({copy.dir, copy.index});
            m_known[{to, from}].insert({copy.dir, copy.index});
            out.push_back(copy);
        }
        // routed copies move on; flooded copies stay for other neighbours
        for (auto i = chosen.rbegin(); i != chosen.rend(); ++i)
            if (!held[*i].route.empty())
                held.erase(held.begin() + static_cast<std::ptrdiff_t>(*i));
        m_moved = true;
        return out;
    }

    // Delivers copies to `to`; true when the attack completes.
    bool deliver(NodeId from, NodeId to, std::vector<Copy> copies, std::size_t message, EdgeKind kind)
    {
        for (auto &copy : copies)
        {
            m_result.fragmentTransmissions++;
            TraceHop hop{m_procedure, message, from, to, copy.index, kind, ""};
            auto action = OnReceive(m_routing, to, Arrival{copy.word, m_config.attackId, copy.dir, copy.index},
                                    ringOf(to), m_cipher);
            if (std::holds_alternative<Consume>(action))
            {
                hop.outcome = "consume";
                traceOf(copy.dir).push_back(hop);
                if (consume(copy.dir, copy.index))
                {
                    directionDone(copy.dir, m_procedure);
                    if (m_result.completed)
                        return true;
                }
            }
            else if (const auto *fwd = std::get_if<Forward>(&action))
            {
                hop.outcome = "forward";
                traceOf(copy.dir).push_back(hop);
                copy.word = fwd->word;
                copy.hop++;
                insertSorted(m_held[to], std::move(copy));
            }
            else
            {
                hop.outcome = std::string("drop:") + ToString(std::get<Drop>(action).reason);
                traceOf(copy.dir).push_back(hop);
            }
        }
        return false;
    }

    std::size_t slotsFor(BitCount capacity) const
    {
        return static_cast<std::size_t>(capacity / m_result.fragmentCapacity);
    }

    bool runProcedure(std::size_t p)
    {
        const auto &env = m_config.env;
        const auto &proc = env.procedures[p];
        for (std::size_t m = 0; m < proc.messages.size(); m++)
        {
            if (auto it = m_direct.find({p, m}); it != m_direct.end())
            {
                const auto &edge = it->second;
                auto copies = take(edge.from, edge.to, slotsFor(edge.capacity));
                if (!copies.empty())
                {
                    m_result.messagesCarryingPayload++;
                    if (deliver(edge.from, edge.to, std::move(copies), m, EdgeKind::Direct))
                        return true;
                }
            }
            for (const auto &[c, edge] : m_channels)
            {
                const auto &channel = env.transientChannels[c];
                if (channel.procedure != proc.name || channel.anchorMessage != m)
                    continue;
                auto copies = take(edge.from, edge.to, slotsFor(edge.capacity));
                if (!copies.empty())
                {
                    m_result.messagesCarryingPayload++;
                    m_transit.push_back({c, edge.to, std::move(copies)});
                }
            }
            for (std::size_t t = 0; t < m_transit.size();)
            {
                const auto &channel = env.transientChannels[m_transit[t].channel];
                if (channel.procedure != proc.name || channel.deliveryMessage != m)
                {
                    t++;
                    continue;
                }
                auto transit = std::move(m_transit[t]);
                m_transit.erase(m_transit.begin() + static_cast<std::ptrdiff_t>(t));
                if (deliver(channel.first, transit.to, std::move(transit.copies), m, EdgeKind::Transient))
                    return true;
            }
        }
        return false;
    }

    std::size_t m_procedure = 1;
    bool m_moved = false;
    std::map<std::pair<std::size_t, std::size_t>, GraphEdge> m_direct;
    std::map<std::size_t, GraphEdge> m_channels;
    std::map<NodeId, std::vector<Copy>> m_held;
    std::map<std::pair<NodeId, NodeId>, std::set<std::pair<Direction, std::size_t>>> m_known;
    std::vector<Transit> m_transit;
    std::vector<Copy> m_nextProcedure;
};

class Im3cRun : public RunBase
{
  public:
    using RunBase::RunBase;

    SimResult run()
    {
        if (!m_result.feasibility.feasible)
        {
            m_result.reason = "infeasible: " + m_result.feasibility.reason;
            return m_result;
        }
        m_result.proceduresUsed = 1;
        if (!send(Direction::Forward, m_result.feasibility.forwardWitness))
            return m_result;
        recordExecution(1, finishDirection(Direction::Forward));
        if (needsBackward())
        {
            if (!send(Direction::Backward, m_result.feasibility.backwardWitness))
                return m_result;
            recordExit(1, finishDirection(Direction::Backward));
        }
        complete(1);
        return m_result;
    }

  private:
    BitCount hopCapacity(NodeId from, NodeId to) const
    {
        BitCount best = 0;
        for (const auto &edge : m_graph.edges())
            if (edge.from == from && edge.to == to)
                best = std::max(best, edge.capacity);
        return best;
    }

    bool send(Direction dir, const NodePath &path)
    {
        if (path.size() - 1 > static_cast<std::size_t>(m_config.ttl))
        {
            m_result.reason = "path " + FormatPath(path) + " exceeds ttl";
            return false;
        }
        BitCount capacity = kDefaultCapacity;
        if (m_config.capacityOverride)
            capacity = *m_config.capacityOverride;
        else if (path.size() > 1)
        {
            capacity = hopCapacity(path[0], path[1]);
            for (std::size_t i = 1; i + 1 < path.size(); i++)
                capacity = std::min(capacity, hopCapacity(path[i], path[i + 1]));
        }
        if (dir == Direction::Forward)
            m_result.fragmentCapacity = capacity;
        auto frags = makeFragments(dir, capacity);

        for (const auto &frag : frags)
        {
            std::uint32_t word = wordFor(dir, frag);
            m_routing.markSeen(path.front(), {m_config.attackId, dir, frag.index});
            bool consumed = path.size() == 1;
            for (std::size_t i = 0; i + 1 < path.size() && !consumed; i++)
            {
                m_result.messagesCarryingPayload++;
                m_result.fragmentTransmissions++;
                TraceHop hop{1, m_sequence++, path[i], path[i + 1], frag.index, EdgeKind::Direct, ""};
                auto action = OnReceive(m_routing, path[i + 1], Arrival{word, m_config.attackId, dir, frag.index},
                                        ringOf(path[i + 1]), m_cipher);
                if (std::holds_alternative<Consume>(action))
                {
                    hop.outcome = "consume";
                    consumed = true;
                }
                else if (const auto *fwd = std::get_if<Forward>(&action))
                {
                    hop.outcome = "forward";
                    word = fwd->word;
                }
                else
                {
                    hop.outcome = std::string("drop:") + ToString(std::get<Drop>(action).reason);
                    traceOf(dir).push_back(hop);
                    m_result.reason = "fragment " + std::to_string(frag.index) + " dropped at " + ToString(path[i + 1]);
                    return false;
                }
                traceOf(dir).push_back(hop);
            }
            if (!consumed)
            {
                m_result.reason = "fragment " + std::to_string(frag.index) + " not consumed on " + FormatPath(path);
                return false;
            }
            consume(dir, frag.index);
        }
        return true;
    }

    std::size_t m_sequence = 0;
};

} // namespace

SimResult Run(const SimConfig &config)
{
    if (config.mode == Mode::IM3C)
        return Im3cRun(config).run();
    if (config.env.procedures.empty())
        throw Error(ErrorCode::InvalidScenario, "environment has no procedures");
    return Pb3cRun(config).run();
}

std::vector<SweepRow> SweepCapacity(const SimConfig &config, const std::vector<BitCount> &bitsRange, unsigned jobs)
{
    std::vector<SweepRow> rows(bitsRange.size());
    auto one = [&](std::size_t i) {
        auto &row = rows[i];
        row.bits = bitsRange[i];
        try
        {
            if (bitsRange[i] < fivegpp::kMinCapacity)
                throw Error(ErrorCode::CapacityTooSmall,
                            "sweep capacity " + std::to_string(bitsRange[i]) + " below 21 bits");
            SimConfig local = config;
            local.capacityOverride = bitsRange[i];
            auto result = Run(local);
            row.completed = result.completed;
            row.procedures = result.proceduresUsed;
            row.messages = result.messagesCarryingPayload;
            if (!result.completed)
                row.error = result.reason;
        }
        catch (const Error &e)
        {
            row.error = std::string(ToString(e.code())) + ": " + e.what();
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(bitsRange.size())));
    if (jobs <= 1)
    {
        for (std::size_t i = 0; i < bitsRange.size(); i++)
            one(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned j = 0; j < jobs; j++)
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < bitsRange.size(); i = next++)
                one(i);
        });
    for (auto &w : workers)
        w.join();
    return rows;
}

std::string SweepCsv(const std::vector<SweepRow> &rows)
{
    std::ostringstream out;
    out << "bits,procedures,messages,completed\n";
    for (const auto &row : rows)
        out << row.bits << ',' << row.procedures << ',' << row.messages << ',' << (row.completed ? "true" : "false")
            << '\n';
    return out.str();
}

namespace
{

constexpr BitCount kSupiBits = 64;
constexpr BitCount kKeyBits = 128;

Bits KeyBits(const fivegpp::Key &key)
{
    Bits bits;
    for (auto byte : key)
    {
        auto part = fivegpp::BitsFromUint(byte, 8);
        bits.insert(bits.end(), part.begin(), part.end());
    }
    return bits;
}

fivegpp::Key KeyFromBits(const Bits &bits, std::size_t offset)
{
    fivegpp::Key key{};
    for (std::size_t i = 0; i < key.size(); i++)
        key[i] = static_cast<std::uint8_t>(
            fivegpp::BitsToUint(Bits(bits.begin() + offset + i * 8, bits.begin() + offset + i * 8 + 8)));
    return key;
}

Bits CarrierSalt(Direction dir, std::size_t index)
{
    return fivegpp::Concat(fivegpp::BitsFromUint(DirIndex(dir), 1), fivegpp::BitsFromUint(index, 32));
}

} // namespace

AttackScript TransientAkaAttack(const Environment &env, const std::vector<std::uint64_t> &targets,
                                const Keyring &attackerKeyring, const SubscriberKeyStore &store,
                                const AkaOptions &options)
{
    const auto &cipher = CipherFor(options.identityCipher);
    const auto &key = attackerKeyring.at(options.keyId);

    AttackScript script;
    script.targets = targets;

    const TransientChannel *forward = nullptr;
    const TransientChannel *backward = nullptr;
    for (const auto &channel : env.transientChannels)
    {
        if (channel.direction == Direction::Forward && forward == nullptr)
            forward = &channel;
        if (channel.direction == Direction::Backward && backward == nullptr)
            backward = &channel;
    }
    if (forward == nullptr || backward == nullptr)
    {
        script.reason = "environment lacks a forward and a backward transient channel";
        return script;
    }
    if (forward->last != backward->first || backward->last != forward->first)
    {
        script.reason = "transient channels do not form a round trip";
        return script;
    }
    NodeId executor = forward->last;
    if (!env.compromised.contains(executor))
    {
        script.reason = std::string(ToString(executor)) + " is not compromised";
        return script;
    }
    if (forward->capacity < kSupiBits)
        throw Error(ErrorCode::CapacityTooSmall, "forward carrier smaller than a SUPI");
    if (backward->capacity < kKeyBits)
        throw Error(ErrorCode::CapacityTooSmall, "backward carrier smaller than one key");
    if (targets.empty())
    {
        script.completed = true;
        script.reason = "completed";
        return script;
    }
    const auto keysPerCarrier = static_cast<std::size_t>(backward->capacity / kKeyBits);
    const auto distinctTargets = std::set<std::uint64_t>(targets.begin(), targets.end()).size();

    struct Pending
    {
        std::uint64_t supi = 0;
        fivegpp::Key key{};
        std::size_t availableFrom = 0;
    };
    std::size_t nextTarget = 0;
    std::size_t extracted = 0;
    std::vector<Pending> pending;
    std::optional<AkaCarrier> forwardInFlight;
    std::optional<AkaCarrier> backwardInFlight;

    for (std::size_t k = 1; k <= options.maxProcedures; k++)
    {
        const auto &proc = env.procedures[(k - 1) % env.procedures.size()];
        for (std::size_t m = 0; m < proc.messages.size(); m++)
        {
            if (proc.name == forward->procedure && forward->anchorMessage == m && nextTarget < targets.size() &&
                !forwardInFlight)
            {
                AkaCarrier carrier;
                carrier.procedure = k;
                carrier.direction = Direction::Forward;
                carrier.supis = {targets[nextTarget]};
                carrier.ciphertext = fivegpp::CipherTransform(
                    fivegpp::BitsFromUint(targets[nextTarget], static_cast<std::size_t>(kSupiBits)), key,
                    CarrierSalt(Direction::Forward, script.forwardCarriers), cipher);
                script.forwardCarriers++;
                nextTarget++;
                forwardInFlight = std::move(carrier);
            }
            if (proc.name == forward->procedure && forward->deliveryMessage == m && forwardInFlight)
            {
                auto plain = fivegpp::CipherTransform(forwardInFlight->ciphertext, key,
                                                      CarrierSalt(Direction::Forward, script.forwardCarriers - 1),
                                                      cipher);
                auto supi = fivegpp::BitsToUint(plain);
                auto it = store.find(supi);
                if (it == store.end())
                    throw Error(ErrorCode::TargetUnknown, "no subscriber key for SUPI " + std::to_string(supi));
                pending.push_back({supi, it->second, options.backwardSameProcedure ? k : k + 1});
                extracted++;
                script.carriers.push_back(std::move(*forwardInFlight));
                forwardInFlight.reset();
            }
            if (proc.name == backward->procedure && backward->anchorMessage == m && !backwardInFlight)
            {
                std::vector<Pending> ready;
                for (const auto &p : pending)
                    if (p.availableFrom <= k && ready.size() < keysPerCarrier)
                        ready.push_back(p);
                bool allExtracted = extracted == targets.size();
                // hold keys back until a carrier fills or nothing more is coming
                if (!ready.empty() && (ready.size() == keysPerCarrier || allExtracted))
                {
                    AkaCarrier carrier;
                    carrier.procedure = k;
                    carrier.direction = Direction::Backward;
                    Bits bits;
                    for (const auto &p : ready)
                    {
                        carrier.supis.push_back(p.supi);
                        auto kb = KeyBits(p.key);
                        bits.insert(bits.end(), kb.begin(), kb.end());
                    }
                    carrier.ciphertext = fivegpp::CipherTransform(
                        bits, key, CarrierSalt(Direction::Backward, script.backwardCarriers), cipher);
                    script.backwardCarriers++;
                    pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(ready.size()));
                    backwardInFlight = std::move(carrier);
                }
            }
            if (proc.name == backward->procedure && backward->deliveryMessage == m && backwardInFlight)
            {
                auto plain = fivegpp::CipherTransform(backwardInFlight->ciphertext, key,
                                                      CarrierSalt(Direction::Backward, script.backwardCarriers - 1),
                                                      cipher);
                for (std::size_t i = 0; i < backwardInFlight->supis.size(); i++)
                    script.recoveredKeys[backwardInFlight->supis[i]] =
                        KeyFromBits(plain, i * static_cast<std::size_t>(kKeyBits));
                script.carriers.push_back(std::move(*backwardInFlight));
                backwardInFlight.reset();
                if (script.recoveredKeys.size() == distinctTargets)
                {
                    script.completed = true;
                    script.proceduresUsed = k;
                    script.reason = "completed";
                    return script;
                }
            }
        }
    }
    script.proceduresUsed = options.maxProcedures;
    script.reason = "timeout after " + std::to_string(options.maxProcedures) + " procedures";
    return script;
}

} // namespace c2chain
