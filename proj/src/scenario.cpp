#include <c2chain/scenario.hpp>

#include <fstream>
#include <set>

namespace c2chain
{

using nlohmann::json;

namespace
{

[[noreturn]] void Invalid(const std::string &where, const std::string &what)
{
    throw Error(ErrorCode::InvalidScenario, where + ": " + what);
}

void RejectUnknownKeys(const json &obj, const std::string &where, std::initializer_list<const char *> allowed)
{
    if (!obj.is_object())
        Invalid(where, "expected an object");
    for (const auto &[key, value] : obj.items())
    {
        bool known = false;
        for (const char *name : allowed)
            known = known || key == name;
        if (!known)
            Invalid(where, "unknown key '" + key + "'");
    }
}

const json &Required(const json &obj, const char *key, const std::string &where)
{
    if (!obj.contains(key))
        Invalid(where, std::string("missing key '") + key + "'");
    return obj.at(key);
}

std::string AsString(const json &value, const std::string &where)
{
    if (!value.is_string())
        Invalid(where, "expected a string");
    return value.get<std::string>();
}

std::int64_t AsInt(const json &value, const std::string &where)
{
    if (!value.is_number_integer())
        Invalid(where, "expected an integer");
    return value.get<std::int64_t>();
}

NodeId AsNode(const json &value, const std::string &where)
{
    auto text = AsString(value, where);
    auto node = ParseNodeId(text);
    if (!node)
        Invalid(where, "unknown node '" + text + "'");
    return *node;
}

std::vector<NodeId> AsNodeList(const json &value, const std::string &where)
{
    if (!value.is_array())
        Invalid(where, "expected an array");
    std::vector<NodeId> nodes;
    for (std::size_t i = 0; i < value.size(); i++)
        nodes.push_back(AsNode(value[i], where + "[" + std::to_string(i) + "]"));
    return nodes;
}

std::vector<double> AsWeights(const json &value, const std::string &where)
{
    if (!value.is_array())
        Invalid(where, "expected an array");
    std::vector<double> weights;
    for (const auto &item : value)
    {
        if (!item.is_number())
            Invalid(where, "expected numbers");
        weights.push_back(item.get<double>());
    }
    return weights;
}

std::optional<int> OptionalCount(const json &obj, const char *key, const std::string &where)
{
    if (!obj.contains(key) || obj.at(key).is_null())
        return std::nullopt;
    return static_cast<int>(AsInt(obj.at(key), where + "." + key));
}

ProcedureMessage ParseMessage(const json &obj, const std::string &where)
{
    RejectUnknownKeys(obj, where, {"src", "dst", "bits", "label", "iface", "params"});
    ProcedureMessage msg;
    msg.source = AsNode(Required(obj, "src", where), where + ".src");
    msg.target = AsNode(Required(obj, "dst", where), where + ".dst");
    msg.availableSpace = obj.contains("bits") ? AsInt(obj.at("bits"), where + ".bits") : kDefaultCapacity;
    if (obj.contains("label"))
        msg.label = AsString(obj.at("label"), where + ".label");
    if (obj.contains("iface"))
    {
        auto text = AsString(obj.at("iface"), where + ".iface");
        msg.iface = ParseInterface(text);
        if (!msg.iface)
            Invalid(where + ".iface", "unknown interface '" + text + "'");
    }
    if (obj.contains("params"))
    {
        const auto &p = obj.at("params");
        auto pw = where + ".params";
        RejectUnknownKeys(p, pw, {"request_required", "request_optional", "response_required", "response_optional"});
        ParameterCounts counts;
        counts.requestRequired = OptionalCount(p, "request_required", pw);
        counts.requestOptional = OptionalCount(p, "request_optional", pw);
        counts.responseRequired = OptionalCount(p, "response_required", pw);
        counts.responseOptional = OptionalCount(p, "response_optional", pw);
        msg.params = counts;
    }
    return msg;
}

TransientChannel ParseChannel(const json &obj, const std::string &where)
{
    RejectUnknownKeys(obj, where,
                      {"first", "last", "via", "capacity", "direction", "carrier", "procedure", "anchor", "delivery"});
    TransientChannel channel;
    channel.first = AsNode(Required(obj, "first", where), where + ".first");
    channel.last = AsNode(Required(obj, "last", where), where + ".last");
    if (obj.contains("via"))
        channel.via = AsNodeList(obj.at("via"), where + ".via");
    channel.capacity = AsInt(Required(obj, "capacity", where), where + ".capacity");
    auto direction = AsString(Required(obj, "direction", where), where + ".direction");
    auto parsed = ParseDirection(direction);
    if (!parsed)
        Invalid(where + ".direction", "expected forward or backward");
    channel.direction = *parsed;
    if (obj.contains("carrier"))
        channel.carrier = AsString(obj.at("carrier"), where + ".carrier");
    channel.procedure = AsString(Required(obj, "procedure", where), where + ".procedure");
    auto anchor = AsInt(Required(obj, "anchor", where), where + ".anchor");
    auto delivery = obj.contains("delivery") ? AsInt(obj.at("delivery"), where + ".delivery") : anchor;
    if (anchor < 0 || delivery < 0)
        Invalid(where, "message indices must be non-negative");
    channel.anchorMessage = static_cast<std::size_t>(anchor);
    channel.deliveryMessage = static_cast<std::size_t>(delivery);
    return channel;
}

Attack ParseAttack(const json &obj, const std::string &where)
{
    RejectUnknownKeys(obj, where, {"name", "type", "entry", "execution", "exit", "forward_bits", "backward_bits"});
    Attack attack;
    attack.name = AsString(Required(obj, "name", where), where + ".name");
    auto type = AsString(Required(obj, "type", where), where + ".type");
    auto parsed = ParseAttackType(type);
    if (!parsed)
        Invalid(where + ".type", "unknown attack type '" + type + "'");
    attack.type = *parsed;
    attack.entry = AsNode(Required(obj, "entry", where), where + ".entry");
    attack.execution = AsNode(Required(obj, "execution", where), where + ".execution");
    if (obj.contains("exit") && !obj.at("exit").is_null())
        attack.exit = AsNode(obj.at("exit"), where + ".exit");
    attack.forwardBits = AsInt(Required(obj, "forward_bits", where), where + ".forward_bits");
    attack.backwardBits = obj.contains("backward_bits") ? AsInt(obj.at("backward_bits"), where + ".backward_bits") : 0;
    return attack;
}

json CountToJson(const std::optional<int> &count)
{
    return count ? json(*count) : json(nullptr);
}

} // namespace

const Attack *Scenario::findAttack(std::string_view name) const
{
    for (const auto &attack : attacks)
        if (attack.name == name)
            return &attack;
    return nullptr;
}

Scenario ScenarioFromJson(const json &doc)
{
    RejectUnknownKeys(doc, "scenario",
                      {"name", "version", "nodes", "compromised", "procedures", "transient_channels", "attacks",
                       "routing", "keys"});
    Scenario scenario;
    if (doc.contains("name"))
        scenario.name = AsString(doc.at("name"), "name");
    if (doc.contains("version"))
        scenario.version = AsString(doc.at("version"), "version");
    if (doc.contains("nodes"))
        scenario.nodes = AsNodeList(doc.at("nodes"), "nodes");
    if (doc.contains("compromised"))
    {
        auto nodes = AsNodeList(doc.at("compromised"), "compromised");
        scenario.env.compromised.insert(nodes.begin(), nodes.end());
    }

    const auto &procedures = Required(doc, "procedures", "scenario");
    if (!procedures.is_array())
        Invalid("procedures", "expected an array");
    for (std::size_t i = 0; i < procedures.size(); i++)
    {
        auto where = "procedures[" + std::to_string(i) + "]";
        const auto &obj = procedures[i];
        RejectUnknownKeys(obj, where, {"name", "messages"});
        Procedure proc;
        proc.name = AsString(Required(obj, "name", where), where + ".name");
        const auto &messages = Required(obj, "messages", where);
        if (!messages.is_array())
            Invalid(where + ".messages", "expected an array");
        for (std::size_t j = 0; j < messages.size(); j++)
            proc.messages.push_back(ParseMessage(messages[j], where + ".messages[" + std::to_string(j) + "]"));
        scenario.env.procedures.push_back(std::move(proc));
    }

    if (doc.contains("transient_channels"))
    {
        const auto &channels = doc.at("transient_channels");
        if (!channels.is_array())
            Invalid("transient_channels", "expected an array");
        for (std::size_t i = 0; i < channels.size(); i++)
            scenario.env.transientChannels.push_back(
                ParseChannel(channels[i], "transient_channels[" + std::to_string(i) + "]"));
    }

    if (doc.contains("attacks"))
    {
        const auto &attacks = doc.at("attacks");
        if (!attacks.is_array())
            Invalid("attacks", "expected an array");
        for (std::size_t i = 0; i < attacks.size(); i++)
            scenario.attacks.push_back(ParseAttack(attacks[i], "attacks[" + std::to_string(i) + "]"));
    }

    if (doc.contains("routing"))
    {
        const auto &routing = doc.at("routing");
        RejectUnknownKeys(routing, "routing", {"option", "weights"});
        if (routing.contains("option"))
        {
            auto text = AsString(routing.at("option"), "routing.option");
            auto option = ParseRoutingOption(text);
            if (!option)
                Invalid("routing.option", "unknown routing option '" + text + "'");
            scenario.routing.option = *option;
        }
        if (routing.contains("weights"))
        {
            const auto &weights = routing.at("weights");
            RejectUnknownKeys(weights, "routing.weights", {"forward", "backward"});
            if (weights.contains("forward"))
                scenario.routing.forwardWeights = AsWeights(weights.at("forward"), "routing.weights.forward");
            if (weights.contains("backward"))
                scenario.routing.backwardWeights = AsWeights(weights.at("backward"), "routing.weights.backward");
        }
    }

    if (doc.contains("keys"))
    {
        const auto &keys = doc.at("keys");
        if (!keys.is_object())
            Invalid("keys", "expected an object");
        for (const auto &[name, ids] : keys.items())
        {
            auto node = ParseNodeId(name);
            if (!node)
                Invalid("keys", "unknown node '" + name + "'");
            if (!ids.is_array())
                Invalid("keys." + name, "expected an array");
            std::vector<int> list;
            for (const auto &id : ids)
                list.push_back(static_cast<int>(AsInt(id, "keys." + name)));
            scenario.keys[*node] = list;
        }
    }

    return scenario;
}

json ScenarioToJson(const Scenario &scenario)
{
    json doc = json::object();
    doc["name"] = scenario.name;
    doc["version"] = scenario.version;
    doc["nodes"] = json::array();
    for (auto node : scenario.nodes)
        doc["nodes"].push_back(ToString(node));
    doc["compromised"] = json::array();
    for (auto node : scenario.env.compromised)
        doc["compromised"].push_back(ToString(node));

    doc["procedures"] = json::array();
    for (const auto &proc : scenario.env.procedures)
    {
        json p = {{"name", proc.name}, {"messages", json::array()}};
        for (const auto &msg : proc.messages)
        {
            json m = {{"src", ToString(msg.source)},
                      {"dst", ToString(msg.target)},
                      {"bits", msg.availableSpace},
                      {"label", msg.label}};
            if (msg.iface)
                m["iface"] = ToString(*msg.iface);
            if (msg.params)
            {
                m["params"] = {{"request_required", CountToJson(msg.params->requestRequired)},
                               {"request_optional", CountToJson(msg.params->requestOptional)},
                               {"response_required", CountToJson(msg.params->responseRequired)},
                               {"response_optional", CountToJson(msg.params->responseOptional)}};
            }
            p["messages"].push_back(m);
        }
        doc["procedures"].push_back(p);
    }

    doc["transient_channels"] = json::array();
    for (const auto &channel : scenario.env.transientChannels)
    {
        json via = json::array();
        for (auto node : channel.via)
            via.push_back(ToString(node));
        doc["transient_channels"].push_back({{"first", ToString(channel.first)},
                                             {"last", ToString(channel.last)},
                                             {"via", via},
                                             {"capacity", channel.capacity},
                                             {"direction", ToString(channel.direction)},
                                             {"carrier", channel.carrier},
                                             {"procedure", channel.procedure},
                                             {"anchor", channel.anchorMessage},
                                             {"delivery", channel.deliveryMessage}});
    }

    doc["attacks"] = json::array();
    for (const auto &attack : scenario.attacks)
    {
        doc["attacks"].push_back({{"name", attack.name},
                                  {"type", ToString(attack.type)},
                                  {"entry", ToString(attack.entry)},
                                  {"execution", ToString(attack.execution)},
                                  {"exit", attack.exit ? json(ToString(*attack.exit)) : json(nullptr)},
                                  {"forward_bits", attack.forwardBits},
                                  {"backward_bits", attack.backwardBits}});
    }

    json weights = json::object();
    if (!scenario.routing.forwardWeights.empty())
        weights["forward"] = scenario.routing.forwardWeights;
    if (!scenario.routing.backwardWeights.empty())
        weights["backward"] = scenario.routing.backwardWeights;
    doc["routing"] = {{"option", ToString(scenario.routing.option)}};
    if (!weights.empty())
        doc["routing"]["weights"] = weights;

    if (!scenario.keys.empty())
    {
        doc["keys"] = json::object();
        for (const auto &[node, ids] : scenario.keys)
            doc["keys"][ToString(node)] = ids;
    }
    return doc;
}

Scenario LoadScenarioFile(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::InvalidScenario, "cannot open scenario file '" + path + "'");
    json doc;
    try
    {
        in >> doc;
    }
    catch (const json::parse_error &e)
    {
        throw Error(ErrorCode::InvalidScenario, std::string("malformed JSON: ") + e.what());
    }
    return ScenarioFromJson(doc);
}

std::vector<Violation> ValidateScenario(const Scenario &scenario)
{
    auto violations = ValidateEnvironment(scenario.env);

    if (!scenario.nodes.empty())
    {
        std::set<NodeId> declared(scenario.nodes.begin(), scenario.nodes.end());
        for (auto node : scenario.env.referencedNodes())
            if (!declared.contains(node))
                violations.push_back({ToString(node), "node used but not declared in 'nodes'"});
        for (auto node : scenario.env.compromised)
            if (!declared.contains(node))
                violations.push_back({ToString(node), "compromised node not declared in 'nodes'"});
    }

    std::set<std::string> names;
    for (const auto &attack : scenario.attacks)
    {
        auto more = ValidateAttack(attack);
        violations.insert(violations.end(), more.begin(), more.end());
        if (!names.insert(attack.name).second)
            violations.push_back({"attack " + attack.name, "duplicate attack name"});
    }

    for (const auto &[node, ids] : scenario.keys)
    {
        if (ids.size() > 16)
            violations.push_back({ToString(node), "more than 16 keys"});
        for (int id : ids)
            if (id < 1 || id > 16)
                violations.push_back({ToString(node), "key id " + std::to_string(id) + " outside 1..16"});
    }
    return violations;
}

} // namespace c2chain
