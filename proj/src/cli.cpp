#include <c2chain/cli.hpp>
#include <c2chain/engine.hpp>
#include <c2chain/report.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace c2chain
{

namespace
{

using nlohmann::json;

struct Common
{
    std::string scenario = "builtin:fig3";
    std::string attack = "A1";
    std::string mode = "pb3c";
    std::string routing;
    std::optional<BitCount> capacity;
    std::optional<BitCount> threshold;
    std::uint64_t seed = 1;
    std::size_t maxProcedures = kDefaultMaxProcedures;
    int ttl = fivegpp::kMaxTtl;
    bool backwardNextProcedure = false;
    bool identityCipher = false;
};

void AddScenarioFlags(CLI::App *cmd, Common &c)
{
    cmd->add_option("--scenario", c.scenario, "builtin:<name> or scenario JSON path")->capture_default_str();
    cmd->add_option("--attack", c.attack, "attack name")->capture_default_str();
    cmd->add_option("--mode", c.mode, "pb3c or im3c")->capture_default_str();
    cmd->add_option("--capacity", c.capacity, "per-message capacity override in bits");
    cmd->add_option("--threshold", c.threshold, "minimum edge capacity in bits");
}

void AddRunFlags(CLI::App *cmd, Common &c)
{
    cmd->add_option("--routing", c.routing, "pf, rr or eerr (default: scenario setting)");
    cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--max-procedures", c.maxProcedures, "procedure instance cap")->capture_default_str();
    cmd->add_option("--ttl", c.ttl, "initial TTL, 1..8")->capture_default_str();
    cmd->add_flag("--backward-next-procedure", c.backwardNextProcedure,
                  "start the backward transfer one procedure after execution");
    cmd->add_flag("--identity-cipher", c.identityCipher, "disable encryption");
}

Scenario LoadScenario(const std::string &ref)
{
    auto scenario = ResolveScenario(ref);
    auto violations = ValidateScenario(scenario);
    if (!violations.empty())
    {
        std::string text;
        for (const auto &v : violations)
            text += (text.empty() ? "" : "; ") + v.entity + ": " + v.message;
        throw Error(ErrorCode::InvalidScenario, text);
    }
    return scenario;
}

Attack FindAttack(const Scenario &scenario, const std::string &name)
{
    if (const auto *attack = scenario.findAttack(name))
        return *attack;
    if (const auto *entry = FindCatalogEntry(name))
        return entry->attack;
    throw Error(ErrorCode::InvalidScenario, "unknown attack '" + name + "'");
}

Mode ParseModeOrThrow(const std::string &text)
{
    auto mode = ParseMode(text);
    if (!mode)
        throw Error(ErrorCode::InvalidScenario, "unknown mode '" + text + "'");
    return *mode;
}

RoutingOption ParseRoutingOrThrow(const std::string &text)
{
    auto option = ParseRoutingOption(text);
    if (!option)
        throw Error(ErrorCode::InvalidScenario, "unknown routing option '" + text + "'");
    return *option;
}

template <typename T> T ParseOrThrow(std::optional<T> value, const std::string &what, const std::string &text)
{
    if (!value)
        throw Error(ErrorCode::FieldOutOfRange, "unknown " + what + " '" + text + "'");
    return *value;
}

SimConfig BuildConfig(const Common &c, const Scenario &scenario)
{
    auto config = MakeSimConfig(scenario, FindAttack(scenario, c.attack));
    config.mode = ParseModeOrThrow(c.mode);
    if (!c.routing.empty())
        config.routing.option = ParseRoutingOrThrow(c.routing);
    config.capacityOverride = c.capacity;
    config.threshold = c.threshold;
    config.seed = c.seed;
    config.maxProcedures = c.maxProcedures;
    config.ttl = c.ttl;
    config.backwardSameProcedure = !c.backwardNextProcedure;
    config.identityCipher = c.identityCipher;
    return config;
}

std::string Yes(bool b)
{
    return b ? "yes" : "no";
}

json PathJson(const NodePath &path)
{
    json out = json::array();
    for (auto node : path)
        out.push_back(ToString(node));
    return out;
}

json TraceJson(const std::vector<TraceHop> &trace)
{
    json out = json::array();
    for (const auto &hop : trace)
        out.push_back({{"procedure", hop.procedure},
                       {"message", hop.message},
                       {"from", ToString(hop.from)},
                       {"to", ToString(hop.to)},
                       {"fragment", hop.fragment},
                       {"transient", hop.kind == EdgeKind::Transient},
                       {"outcome", hop.outcome}});
    return out;
}

std::string Hex(std::uint64_t value, int digits)
{
    std::ostringstream s;
    s << "0x" << std::hex << std::setw(digits) << std::setfill('0') << value;
    return s.str();
}

std::string AttackLine(const Attack &a)
{
    std::ostringstream s;
    s << a.name << " (" << ToString(a.type) << ") " << ToString(a.entry) << " -> " << ToString(a.execution) << " -> "
      << (a.exit ? ToString(*a.exit) : "none") << ", forward " << a.forwardBits << " bit, backward "
      << a.backwardBits << " bit";
    return s.str();
}

int CmdFeasibility(const Common &c, bool asJson, std::ostream &out)
{
    auto scenario = LoadScenario(c.scenario);
    auto attack = FindAttack(scenario, c.attack);
    PuppeteerOptions options;
    options.mode = ParseModeOrThrow(c.mode);
    options.threshold = c.threshold;
    options.capacityOverride = c.capacity;
    options.attackerControlled.insert(attack.entry);
    if (attack.exit)
        options.attackerControlled.insert(*attack.exit);
    auto graph = BuildPuppeteerGraph(scenario.env, options);
    auto report = Feasible(attack, graph);

    if (asJson)
    {
        out << json{{"scenario", scenario.name},
                    {"attack", attack.name},
                    {"feasible", report.feasible},
                    {"forward_reachable", report.forwardReachable},
                    {"backward_reachable", report.backwardReachable},
                    {"forward_path", PathJson(report.forwardWitness)},
                    {"backward_path", PathJson(report.backwardWitness)},
                    {"reason", report.reason}}
                   .dump(2)
            << "\n";
    }
    else
    {
        out << "attack: " << AttackLine(attack) << "\n";
        out << "forward: " << (report.forwardReachable ? FormatPath(report.forwardWitness) : "unreachable") << "\n";
        if (attack.exit)
            out << "backward: " << (report.backwardReachable ? FormatPath(report.backwardWitness) : "unreachable")
                << "\n";
        else
            out << "backward: none (no exit point)\n";
        out << "feasible: " << Yes(report.feasible);
        if (!report.feasible)
            out << " (" << report.reason << ")";
        out << "\n";
    }
    return report.feasible ? 0 : 2;
}

std::vector<std::uint64_t> DefaultTargets(const std::vector<std::uint64_t> &given)
{
    if (!given.empty())
        return given;
    return {DemoSubscriberStore().begin()->first};
}

int CmdAka(const Common &c, const Scenario &scenario, const std::vector<std::uint64_t> &targetsIn, bool asJson,
           std::ostream &out)
{
    auto targets = DefaultTargets(targetsIn);
    AkaOptions options;
    options.backwardSameProcedure = !c.backwardNextProcedure;
    options.maxProcedures = c.maxProcedures;
    options.identityCipher = c.identityCipher;
    auto keyring = fivegpp::Keyring::Derived({options.keyId}, kKeySeed);
    auto store = DemoSubscriberStore();
    auto script = TransientAkaAttack(scenario.env, targets, keyring, store, options);

    bool keysMatch = script.completed;
    for (const auto &[supi, key] : script.recoveredKeys)
        keysMatch = keysMatch && store.at(supi) == key;

    if (asJson)
    {
        json carriers = json::array();
        for (const auto &carrier : script.carriers)
            carriers.push_back({{"procedure", carrier.procedure},
                                {"direction", ToString(carrier.direction)},
                                {"bits", carrier.ciphertext.size()},
                                {"ciphertext", fivegpp::BitsToHex(carrier.ciphertext)},
                                {"supis", carrier.supis}});
        out << json{{"scenario", scenario.name},
                    {"attack", c.attack},
                    {"completed", script.completed},
                    {"procedures_used", script.proceduresUsed},
                    {"forward_carriers", script.forwardCarriers},
                    {"backward_carriers", script.backwardCarriers},
                    {"keys_match", keysMatch},
                    {"carriers", carriers},
                    {"reason", script.reason}}
                   .dump(2)
            << "\n";
        return 0;
    }
    out << "scenario: " << scenario.name << "\n";
    out << "attack: " << c.attack << " over transient channels, " << targets.size() << " target(s)\n";
    for (const auto &carrier : script.carriers)
        out << "  procedure " << carrier.procedure << " " << ToString(carrier.direction) << " carrier "
            << carrier.ciphertext.size() << " bit, " << carrier.supis.size() << " SUPI(s)\n";
    out << "forward carriers: " << script.forwardCarriers << ", backward carriers: " << script.backwardCarriers
        << "\n";
    out << "recovered keys match store: " << Yes(keysMatch) << "\n";
    if (script.completed)
        out << "completed: procedures=" << script.proceduresUsed << "\n";
    else
        out << "not completed: " << script.reason << "\n";
    return 0;
}

int CmdSimulate(const Common &c, bool trace, const std::vector<std::uint64_t> &targets, bool asJson,
                std::ostream &out)
{
    auto scenario = LoadScenario(c.scenario);
    if (const auto *entry = FindCatalogEntry(c.attack); entry != nullptr && !entry->framed)
        return CmdAka(c, scenario, targets, asJson, out);

    auto config = BuildConfig(c, scenario);
    auto result = Run(config);

    if (asJson)
    {
        json doc{{"scenario", scenario.name},
                 {"attack", config.attack.name},
                 {"mode", ToString(config.mode)},
                 {"routing", ToString(config.routing.option)},
                 {"seed", config.seed},
                 {"feasible", result.feasibility.feasible},
                 {"completed", result.completed},
                 {"procedures_used", result.proceduresUsed},
                 {"messages_carrying_payload", result.messagesCarryingPayload},
                 {"fragment_transmissions", result.fragmentTransmissions},
                 {"fragment_capacity", result.fragmentCapacity},
                 {"forward_fragments", result.forwardFragments},
                 {"backward_fragments", result.backwardFragments},
                 {"bits_consumed_at_execution", result.bitsConsumedAtExecution},
                 {"bits_consumed_at_exit", result.bitsConsumedAtExit},
                 {"payload_intact", result.payloadIntact},
                 {"reason", result.reason}};
        doc["attack_executed_at"] = result.attackExecutedAt ? json(*result.attackExecutedAt) : json(nullptr);
        json effects = json::array();
        for (const auto &e : result.effects)
            effects.push_back({{"procedure", e.procedure}, {"node", ToString(e.node)}, {"effect", e.description}});
        doc["effects"] = effects;
        doc["forward_path_trace"] = TraceJson(result.forwardTrace);
        doc["backward_path_trace"] = TraceJson(result.backwardTrace);
        out << doc.dump(2) << "\n";
        return 0;
    }

    out << "scenario: " << scenario.name << "\n";
    out << "attack: " << AttackLine(config.attack) << "\n";
    out << "mode: " << ToString(config.mode) << ", routing: " << ToString(config.routing.option) << ", seed "
        << config.seed << "\n";
    out << "feasible: " << Yes(result.feasibility.feasible) << "\n";
    if (result.feasibility.feasible)
    {
        out << "forward path: " << FormatPath(result.feasibility.forwardWitness) << "\n";
        if (!result.feasibility.backwardWitness.empty())
            out << "backward path: " << FormatPath(result.feasibility.backwardWitness) << "\n";
        out << "fragments: forward " << result.forwardFragments << ", backward " << result.backwardFragments
            << " at " << result.fragmentCapacity << " bit\n";
        out << "messages carrying payload: " << result.messagesCarryingPayload << "\n";
    }
    if (trace)
    {
        auto dump = [&](const char *name, const std::vector<TraceHop> &hops) {
            for (const auto &hop : hops)
                out << "  " << name << " p" << hop.procedure << " m" << hop.message << " " << ToString(hop.from)
                    << "->" << ToString(hop.to) << " frag " << hop.fragment
                    << (hop.kind == EdgeKind::Transient ? " transient " : " ") << hop.outcome << "\n";
        };
        dump("fwd", result.forwardTrace);
        dump("bwd", result.backwardTrace);
    }
    for (const auto &effect : result.effects)
        out << "effect: procedure " << effect.procedure << " at " << ToString(effect.node) << ": "
            << effect.description << "\n";
    if (result.completed)
    {
        out << "payload intact: " << Yes(result.payloadIntact) << "\n";
        out << "completed: procedures=" << result.proceduresUsed << "\n";
    }
    else
    {
        out << "not completed: " << result.reason << "\n";
    }
    return 0;
}

std::vector<BitCount> ParseBitsList(const std::string &text)
{
    std::vector<BitCount> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        auto dash = item.find('-');
        try
        {
            if (dash != std::string::npos && dash > 0)
            {
                auto lo = std::stoll(item.substr(0, dash));
                auto hi = std::stoll(item.substr(dash + 1));
                for (auto b = lo; b <= hi; b++)
                    out.push_back(b);
            }
            else
            {
                out.push_back(std::stoll(item));
            }
        }
        catch (const std::logic_error &)
        {
            throw Error(ErrorCode::FieldOutOfRange, "bad bits value '" + item + "'");
        }
    }
    if (out.empty())
        throw Error(ErrorCode::FieldOutOfRange, "empty bits list");
    return out;
}

int CmdSweep(const Common &c, const std::string &bitsText, unsigned jobs, const std::string &csvPath, bool asJson,
             std::ostream &out)
{
    auto scenario = LoadScenario(c.scenario);
    auto config = BuildConfig(c, scenario);
    auto rows = SweepCapacity(config, ParseBitsList(bitsText), jobs);
    auto csv = SweepCsv(rows);
    if (!csvPath.empty())
    {
        std::ofstream file(csvPath, std::ios::binary);
        if (!file)
            throw Error(ErrorCode::InvalidScenario, "cannot write " + csvPath);
        file << csv;
    }
    if (asJson)
    {
        json arr = json::array();
        for (const auto &row : rows)
            arr.push_back({{"bits", row.bits},
                           {"procedures", row.procedures},
                           {"messages", row.messages},
                           {"completed", row.completed},
                           {"error", row.error}});
        out << json{{"scenario", scenario.name}, {"attack", config.attack.name}, {"rows", arr}}.dump(2) << "\n";
    }
    else
    {
        out << csv;
    }
    return 0;
}

int CmdGraph(const Common &c, const std::string &view, const std::string &dotPath, bool asJson, std::ostream &out)
{
    auto scenario = LoadScenario(c.scenario);
    auto attack = FindAttack(scenario, c.attack);
    PuppeteerOptions options;
    options.mode = ParseModeOrThrow(c.mode);
    options.threshold = c.threshold;
    options.capacityOverride = c.capacity;
    options.attackerControlled.insert(attack.entry);
    if (attack.exit)
        options.attackerControlled.insert(*attack.exit);

    PuppeteerGraph graph;
    DotStyle style;
    style.name = scenario.name + "-" + view;
    FeasibilityReport report;
    const FeasibilityReport *reportPtr = nullptr;
    if (view == "full")
    {
        graph = BuildFullGraph(scenario.env);
        style.highlight = scenario.env.compromised;
    }
    else if (view == "puppeteer" || view == "attack")
    {
        graph = BuildPuppeteerGraph(scenario.env, options);
        style.highlight = scenario.env.compromised;
        if (view == "attack")
        {
            report = Feasible(attack, graph);
            reportPtr = &report;
            style.execution = attack.execution;
        }
    }
    else
    {
        throw Error(ErrorCode::InvalidScenario, "unknown view '" + view + "' (full, puppeteer, attack)");
    }

    auto dot = ExportDot(graph, reportPtr, style);
    if (!dotPath.empty())
    {
        std::ofstream file(dotPath, std::ios::binary);
        if (!file)
            throw Error(ErrorCode::InvalidScenario, "cannot write " + dotPath);
        file << dot;
    }
    if (asJson)
    {
        json nodes = json::array();
        for (auto n : graph.nodes())
            nodes.push_back(ToString(n));
        out << json{{"view", view}, {"nodes", nodes}, {"edges", graph.edges().size()}, {"dot", dot}}.dump(2)
            << "\n";
    }
    else if (dotPath.empty())
    {
        out << dot;
    }
    else
    {
        out << "wrote " << dotPath << " (" << graph.nodes().size() << " nodes, " << graph.edges().size()
            << " edges)\n";
    }
    return 0;
}

struct HeaderArgs
{
    int keyId = 1;
    std::string routing = "pf";
    int ttl = fivegpp::kMaxTtl;
    bool split = false;
    std::string exec = "udm";
    int attackId = 1;
    std::string type = "key-ext";
    std::string exit = "ue";
    std::string cipher = "prf";
    std::uint32_t fragment = 0;
    std::string word;
    std::vector<int> keys;
};

const fivegpp::Cipher &CipherNamed(const std::string &name)
{
    if (name == "identity")
        return fivegpp::TestIdentityCipher();
    if (name == "prf")
        return fivegpp::DefaultCipher();
    throw Error(ErrorCode::InvalidScenario, "unknown cipher '" + name + "' (prf, identity)");
}

json HeaderJson(const fivegpp::GppHeader &h)
{
    return {{"key_id", h.keyId},
            {"routing", ToString(h.routing)},
            {"ttl", h.ttl},
            {"split", h.split},
            {"exec", ToString(h.executionPoint)},
            {"attack_id", h.attackId},
            {"type", ToString(h.attackType)},
            {"exit", ToString(h.exitPoint)}};
}

int CmdHeaderEncode(const HeaderArgs &a, bool asJson, std::ostream &out)
{
    fivegpp::GppHeader h;
    h.keyId = a.keyId;
    h.routing = ParseRoutingOrThrow(a.routing);
    h.ttl = a.ttl;
    h.split = a.split;
    h.executionPoint = ParseOrThrow(ParseNodeId(a.exec), "node", a.exec);
    h.attackId = a.attackId;
    h.attackType = ParseOrThrow(ParseAttackType(a.type), "attack type", a.type);
    h.exitPoint = ParseOrThrow(ParseNodeId(a.exit), "node", a.exit);
    auto ring = fivegpp::Keyring::Derived({a.keyId}, kKeySeed);
    auto word = fivegpp::EncodeHeader(h, ring, CipherNamed(a.cipher), a.fragment);
    if (asJson)
        out << json{{"word", Hex(word, 5)}, {"header", HeaderJson(h)}, {"cipher", a.cipher}}.dump(2) << "\n";
    else
        out << Hex(word, 5) << "\n";
    return 0;
}

int CmdHeaderDecode(const HeaderArgs &a, bool asJson, std::ostream &out)
{
    std::uint64_t word = 0;
    try
    {
        std::size_t used = 0;
        word = std::stoull(a.word, &used, 0);
        if (used != a.word.size())
            throw std::invalid_argument(a.word);
    }
    catch (const std::logic_error &)
    {
        throw Error(ErrorCode::FieldOutOfRange, "bad header word '" + a.word + "'");
    }
    if (word > fivegpp::kWordMask)
        throw Error(ErrorCode::FieldOutOfRange, "header word wider than 20 bits");
    auto ids = a.keys.empty() ? std::vector<int>{a.keyId} : a.keys;
    auto ring = fivegpp::Keyring::Derived(ids, kKeySeed);
    auto decoded = fivegpp::DecodeHeader(static_cast<std::uint32_t>(word), ring, CipherNamed(a.cipher), a.fragment);

    if (const auto *h = std::get_if<fivegpp::GppHeader>(&decoded))
    {
        if (asJson)
            out << json{{"word", Hex(word, 5)}, {"decrypted", true}, {"header", HeaderJson(*h)}}.dump(2) << "\n";
        else
            out << "key_id=" << h->keyId << " routing=" << ToString(h->routing) << " ttl=" << h->ttl
                << " split=" << (h->split ? 1 : 0) << " exec=" << ToString(h->executionPoint)
                << " attack_id=" << h->attackId << " type=" << ToString(h->attackType)
                << " exit=" << ToString(h->exitPoint) << "\n";
        return 0;
    }
    const auto &clear = std::get<fivegpp::Undecryptable>(decoded).clear;
    if (asJson)
        out << json{{"word", Hex(word, 5)},
                    {"decrypted", false},
                    {"key_id", clear.keyId},
                    {"routing", ToString(clear.routing)},
                    {"ttl", clear.ttl}}
                   .dump(2)
            << "\n";
    else
        out << "key_id=" << clear.keyId << " routing=" << ToString(clear.routing) << " ttl=" << clear.ttl
            << " (encrypted fields unreadable without key " << clear.keyId << ")\n";
    return 0;
}

int CmdOverhead(bool csv, bool asJson, std::ostream &out)
{
    auto rows = OverheadTable(AttackCatalog());
    if (asJson)
    {
        json arr = json::array();
        for (const auto &row : rows)
        {
            auto tenths = row.ratio.percentTenths();
            arr.push_back({{"attack", row.attackLabel},
                           {"direction", ToString(row.direction)},
                           {"header_bits", row.headerBits},
                           {"payload_bits", row.payloadBits},
                           {"packet_bits", row.totalPacketBits},
                           {"overhead", std::to_string(tenths / 10) + "." + std::to_string(tenths % 10)},
                           {"convention", ToString(row.convention)}});
        }
        out << json{{"rows", arr}, {"max_packet_bits", MaxPacketBits(rows)}}.dump(2) << "\n";
    }
    else if (csv)
    {
        out << OverheadCsv(rows);
    }
    else
    {
        out << FormatOverheadTable(rows);
    }
    return 0;
}

int CmdCatalogDump(const std::string &scenarioRef, bool asJson, std::ostream &out)
{
    json doc;
    if (!scenarioRef.empty())
    {
        doc = ScenarioToJson(LoadScenario(scenarioRef));
    }
    else
    {
        doc["version"] = kCatalogVersion;
        Scenario holder;
        holder.env.procedures = {RegistrationProcedure()};
        for (const auto &entry : AttackCatalog())
            holder.attacks.push_back(entry.attack);
        auto full = ScenarioToJson(holder);
        doc["procedures"] = full["procedures"];
        doc["attacks"] = full["attacks"];
        json params = json::object();
        for (const auto &[name, counts] : SbiParameterTable())
        {
            auto opt = [](const std::optional<int> &v) { return v ? json(*v) : json(nullptr); };
            params[name] = {{"request_required", opt(counts.requestRequired)},
                            {"request_optional", opt(counts.requestOptional)},
                            {"response_required", opt(counts.responseRequired)},
                            {"response_optional", opt(counts.responseOptional)}};
        }
        doc["sbi_parameters"] = params;
        doc["builtin_scenarios"] = BuiltinScenarioNames();
    }
    out << doc.dump(asJson ? -1 : 2) << "\n";
    return 0;
}

} // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Covert command-and-control chaining simulator for 5G core networks", "c2chain"};
    app.require_subcommand(1);
    app.fallthrough();
    bool asJson = false;
    app.add_flag("--json", asJson, "machine-readable output");

    Common common;
    auto *feasibility = app.add_subcommand("feasibility", "check forward and backward reachability");
    AddScenarioFlags(feasibility, common);

    bool trace = false;
    std::vector<std::uint64_t> targets;
    auto *simulate = app.add_subcommand("simulate", "run one attack to completion");
    AddScenarioFlags(simulate, common);
    AddRunFlags(simulate, common);
    simulate->add_flag("--trace", trace, "print every fragment hop");
    simulate->add_option("--target", targets, "SUPI targets for the transient-channel attack");

    std::string bits = "21,32,48,64,96,128";
    unsigned jobs = 1;
    std::string csvPath;
    auto *sweep = app.add_subcommand("sweep", "procedures needed per message capacity");
    AddScenarioFlags(sweep, common);
    AddRunFlags(sweep, common);
    sweep->add_option("--bits", bits, "capacities: comma list and lo-hi ranges")->capture_default_str();
    sweep->add_option("--jobs", jobs, "parallel runs")->capture_default_str();
    sweep->add_option("--csv", csvPath, "also write the CSV to this file");

    std::string view = "puppeteer";
    std::string dotPath;
    auto *graph = app.add_subcommand("graph", "export the network graph as DOT");
    AddScenarioFlags(graph, common);
    graph->add_option("--view", view, "full, puppeteer or attack")->capture_default_str();
    graph->add_option("--dot", dotPath, "write DOT to this file instead of stdout");

    HeaderArgs header;
    auto *headerCmd = app.add_subcommand("header", "encode or decode a 20-bit covert header");
    headerCmd->require_subcommand(1);
    auto *encode = headerCmd->add_subcommand("encode", "pack fields into a header word");
    encode->add_option("--key-id", header.keyId)->capture_default_str();
    encode->add_option("--routing", header.routing)->capture_default_str();
    encode->add_option("--ttl", header.ttl)->capture_default_str();
    encode->add_flag("--split", header.split);
    encode->add_option("--exec", header.exec)->capture_default_str();
    encode->add_option("--attack-id", header.attackId)->capture_default_str();
    encode->add_option("--type", header.type)->capture_default_str();
    encode->add_option("--exit", header.exit)->capture_default_str();
    encode->add_option("--cipher", header.cipher, "prf or identity")->capture_default_str();
    encode->add_option("--fragment", header.fragment, "fragment index mixed into the cipher")->capture_default_str();
    auto *decode = headerCmd->add_subcommand("decode", "unpack a header word");
    decode->add_option("--word", header.word, "header word, e.g. 0x00000")->required();
    decode->add_option("--key-id", header.keyId, "key id held by the decoder")->capture_default_str();
    decode->add_option("--keys", header.keys, "all key ids held by the decoder");
    decode->add_option("--cipher", header.cipher, "prf or identity")->capture_default_str();
    decode->add_option("--fragment", header.fragment)->capture_default_str();

    bool overheadCsv = false;
    auto *overhead = app.add_subcommand("overhead", "header overhead per attack");
    overhead->add_flag("--csv", overheadCsv, "CSV instead of a table");

    std::string dumpScenario;
    auto *dump = app.add_subcommand("catalog-dump", "print the procedure and attack catalog as JSON");
    dump->add_option("--scenario", dumpScenario, "dump a resolved scenario instead");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError &e)
    {
        err << e.what() << "\n\n" << app.help();
        return 1;
    }

    try
    {
        if (*feasibility)
            return CmdFeasibility(common, asJson, out);
        if (*simulate)
            return CmdSimulate(common, trace, targets, asJson, out);
        if (*sweep)
            return CmdSweep(common, bits, jobs, csvPath, asJson, out);
        if (*graph)
            return CmdGraph(common, view, dotPath, asJson, out);
        if (*encode)
            return CmdHeaderEncode(header, asJson, out);
        if (*decode)
            return CmdHeaderDecode(header, asJson, out);
        if (*overhead)
            return CmdOverhead(overheadCsv, asJson, out);
        if (*dump)
            return CmdCatalogDump(dumpScenario, asJson, out);
    }
    catch (const Error &e)
    {
        if (asJson)
            err << json{{"error", ToString(e.code())}, {"message", e.what()}}.dump() << "\n";
        else
            err << "error: " << ToString(e.code()) << ": " << e.what() << "\n";
        return 1;
    }
    catch (const CLI::ParseError &e)
    {
        err << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace c2chain
