#include <c2chain/catalog.hpp>

#include <algorithm>

namespace c2chain
{

namespace
{

ProcedureMessage Msg(NodeId src, NodeId dst, Interface iface, std::string label)
{
    ProcedureMessage msg;
    msg.source = src;
    msg.target = dst;
    msg.availableSpace = kDefaultCapacity;
    msg.label = std::move(label);
    msg.iface = iface;
    return msg;
}

ProcedureMessage Sbi(NodeId src, NodeId dst, const std::string &operation, const char *kind)
{
    auto msg = Msg(src, dst, Interface::Sbi, operation + " " + kind);
    const auto &table = SbiParameterTable();
    if (auto it = table.find(operation); it != table.end())
        msg.params = it->second;
    return msg;
}

fivegpp::GppHeader Template(NodeId exec, AttackType type, NodeId exit)
{
    fivegpp::GppHeader header;
    header.executionPoint = exec;
    header.attackType = type;
    header.exitPoint = exit;
    return header;
}

std::vector<NodeId> NodesOf(const Environment &env)
{
    auto nodes = env.referencedNodes();
    return {nodes.begin(), nodes.end()};
}

Scenario MakeScenario(std::string name, std::set<NodeId> compromised, const std::vector<std::string> &attackNames)
{
    Scenario scenario;
    scenario.name = std::move(name);
    scenario.version = kCatalogVersion;
    scenario.env.procedures.push_back(RegistrationProcedure());
    scenario.env.compromised = std::move(compromised);
    for (const auto &attackName : attackNames)
        scenario.attacks.push_back(FindCatalogEntry(attackName)->attack);
    scenario.nodes = NodesOf(scenario.env);
    return scenario;
}

} // namespace

const char *ToString(OverheadConvention convention)
{
    return convention == OverheadConvention::HeaderOverPayload ? "header/payload" : "header/(header+payload)";
}

const std::map<std::string, ParameterCounts> &SbiParameterTable()
{
    static const std::map<std::string, ParameterCounts> table = {
        {"Nudm_UECM_Registration", {7, 2, 1, std::nullopt}},
        {"Nudm_SDM_Get", {3, 1, 1, std::nullopt}},
        {"Nudm_SDM_Subscribe", {2, 1, std::nullopt, std::nullopt}},
        {"Npcf_AMPolicyControl_Create", {11, std::nullopt, 2, 5}},
        {"Nsmf_PDUSession_Create", {12, 6, 10, 6}},
        {"Nudm_SDM_Info", {3, 1, 1, std::nullopt}},
    };
    return table;
}

// Catalog v1 message order. Indices are referenced by the AKA transient
// channels below; changing the order is a catalog version bump.
Procedure RegistrationProcedure()
{
    using enum NodeId;
    Procedure proc;
    proc.name = kRegistrationName;
    proc.messages = {
        // (a) registration request
        Msg(UE, GNB, Interface::Uu, "RRCSetupRequest"),
        Msg(GNB, UE, Interface::Uu, "RRCSetup"),
        Msg(UE, GNB, Interface::Uu, "RRCSetupComplete [RegistrationRequest]"),
        Msg(GNB, AMF, Interface::N2, "InitialUEMessage [RegistrationRequest]"),
        // identity sub-procedure
        Msg(AMF, UE, Interface::N1, "IdentityRequest"),
        Msg(UE, AMF, Interface::N1, "IdentityResponse"),
        // AKA sub-procedure
        Sbi(AMF, AUSF, "Nausf_UEAuthentication_Authenticate", "Request"),
        Sbi(AUSF, UDM, "Nudm_UEAuthentication_Get", "Request"),
        Sbi(UDM, AUSF, "Nudm_UEAuthentication_Get", "Response"),
        Sbi(AUSF, AMF, "Nausf_UEAuthentication_Authenticate", "Response"),
        Msg(AMF, UE, Interface::N1, "AuthenticationRequest"),
        Msg(UE, AMF, Interface::N1, "AuthenticationResponse"),
        Sbi(AMF, AUSF, "Nausf_UEAuthentication_Authenticate", "Request [RES*]"),
        Sbi(AUSF, UDM, "Nudm_UEAuthentication_ResultConfirmation", "Request"),
        Sbi(UDM, AUSF, "Nudm_UEAuthentication_ResultConfirmation", "Response"),
        Sbi(AUSF, AMF, "Nausf_UEAuthentication_Authenticate", "Response [RES*]"),
        // SMC sub-procedure
        Msg(AMF, UE, Interface::N1, "SecurityModeCommand"),
        Msg(UE, AMF, Interface::N1, "SecurityModeComplete"),
        // (b) UDM registration
        Sbi(AMF, UDM, "Nudm_UECM_Registration", "Request"),
        Sbi(UDM, AMF, "Nudm_UECM_Registration", "Response"),
        // (c) AM policy association
        Sbi(AMF, PCF, "Npcf_AMPolicyControl_Create", "Request"),
        Sbi(PCF, AMF, "Npcf_AMPolicyControl_Create", "Response"),
        // (d) session management and N4 u-plane configuration
        Sbi(AMF, SMF, "Nsmf_PDUSession_Create", "Request"),
        Msg(SMF, UPF, Interface::N4, "PFCP Session Establishment Request"),
        Msg(UPF, SMF, Interface::N4, "PFCP Session Establishment Response"),
        Sbi(SMF, AMF, "Nsmf_PDUSession_Create", "Response"),
        // (e) subscription data
        Sbi(AMF, UDM, "Nudm_SDM_Get", "Request"),
        Sbi(UDM, AMF, "Nudm_SDM_Get", "Response"),
        Sbi(AMF, UDM, "Nudm_SDM_Subscribe", "Request"),
        Sbi(UDM, AMF, "Nudm_SDM_Subscribe", "Response"),
        // (f) registration accept
        Msg(AMF, UE, Interface::N1, "RegistrationAccept"),
        Msg(AMF, GNB, Interface::N2, "InitialContextSetupRequest"),
        Msg(GNB, AMF, Interface::N2, "InitialContextSetupResponse"),
        // (g) policy update
        Sbi(AMF, PCF, "Npcf_AMPolicyControl_Update", "Request"),
        Sbi(PCF, AMF, "Npcf_AMPolicyControl_Update", "Response"),
        // (h) registration complete
        Msg(UE, AMF, Interface::N1, "RegistrationComplete"),
        Sbi(AMF, UDM, "Nudm_SDM_Info", "Request"),
        Sbi(UDM, AMF, "Nudm_SDM_Info", "Response"),
    };
    return proc;
}

std::vector<AttackCatalogEntry> AttackCatalog()
{
    using enum NodeId;
    std::vector<AttackCatalogEntry> entries;

    AttackCatalogEntry a1;
    a1.attack = {"A1", AttackType::UdmKeyExtraction, UE, UDM, UE, 128, 192};
    a1.headerTemplate = Template(UDM, AttackType::UdmKeyExtraction, UE);
    a1.notes = "target SUPI + exit SUPI forward; long-term key + exit SUPI backward";
    entries.push_back(a1);

    AttackCatalogEntry a1v4;
    a1v4.attack = {"A1-IPv4", AttackType::UdmKeyExtraction, UE, UDM, UPF, 64 + 32, 128 + 32};
    a1v4.headerTemplate = Template(UDM, AttackType::UdmKeyExtraction, UPF);
    a1v4.notes = "target SUPI + IPv4 exit address forward; key + address backward";
    a1v4.backwardConvention = OverheadConvention::HeaderOverTotal;
    entries.push_back(a1v4);

    AttackCatalogEntry a1v6;
    a1v6.attack = {"A1-IPv6", AttackType::UdmKeyExtraction, UE, UDM, UPF, 64 + 128, 128 + 128};
    a1v6.headerTemplate = Template(UDM, AttackType::UdmKeyExtraction, UPF);
    a1v6.notes = "target SUPI + IPv6 exit address forward; key + address backward";
    a1v6.backwardConvention = OverheadConvention::HeaderOverTotal;
    entries.push_back(a1v6);

    AttackCatalogEntry a2;
    a2.attack = {"A2", AttackType::UeLocalization, UPF, AMF, UE, 96, 112};
    a2.headerTemplate = Template(AMF, AttackType::UeLocalization, UE);
    a2.notes = "AMF queries the localization service on behalf of the attacker";
    entries.push_back(a2);

    AttackCatalogEntry a3;
    a3.attack = {"A3", AttackType::PwsAbuse, UE, GNB, std::nullopt, 32, 0};
    a3.headerTemplate = Template(GNB, AttackType::PwsAbuse, UE);
    a3.notes = "target cell id (22-32 bit); no exit";
    a3.forwardBitsMin = 22;
    entries.push_back(a3);

    AttackCatalogEntry aka;
    aka.attack = {"A1-AKA", AttackType::UdmKeyExtraction, UE, UDM, UE, 64, 128};
    aka.headerTemplate = Template(UDM, AttackType::UdmKeyExtraction, UE);
    aka.notes = "encrypted target SUPI in the SUCI MAC tag; encrypted key in RAND+AUTN";
    aka.framed = false;
    entries.push_back(aka);

    return entries;
}

const AttackCatalogEntry *FindCatalogEntry(std::string_view name)
{
    static const auto catalog = AttackCatalog();
    for (const auto &entry : catalog)
        if (entry.attack.name == name)
            return &entry;
    return nullptr;
}

std::vector<std::string> SweepAttackNames()
{
    return {"A1", "A1-IPv4", "A1-IPv6", "A2", "A3"};
}

std::vector<TransientChannel> AkaTransientChannels()
{
    using enum NodeId;
    TransientChannel forward;
    forward.first = UE;
    forward.last = UDM;
    forward.via = {GNB, AMF, AUSF};
    forward.capacity = 64;
    forward.direction = Direction::Forward;
    forward.carrier = "SUCI MAC tag";
    forward.procedure = kRegistrationName;
    forward.anchorMessage = 2;   // RRCSetupComplete [RegistrationRequest]
    forward.deliveryMessage = 7; // Nudm_UEAuthentication_Get Request

    TransientChannel backward;
    backward.first = UDM;
    backward.last = UE;
    backward.via = {AUSF, AMF, GNB};
    backward.capacity = 128 + 128;
    backward.direction = Direction::Backward;
    backward.carrier = "RAND+AUTN";
    backward.procedure = kRegistrationName;
    backward.anchorMessage = 8;    // Nudm_UEAuthentication_Get Response
    backward.deliveryMessage = 10; // AuthenticationRequest

    return {forward, backward};
}

SubscriberKeyStore DemoSubscriberStore()
{
    SubscriberKeyStore store;
    for (std::uint64_t i = 1; i <= 8; i++)
    {
        std::uint64_t supi = 0x0010100000000000ULL + i;
        store[supi] = fivegpp::DeriveKey(static_cast<int>(i), 0x4b4559ULL);
    }
    return store;
}

std::vector<std::string> BuiltinScenarioNames()
{
    return {"fig3", "fig4", "aka"};
}

Scenario BuiltinScenario(std::string_view name)
{
    using enum NodeId;
    if (name == "fig3")
        return MakeScenario("fig3", {AMF, AUSF, UDM, SMF}, SweepAttackNames());
    if (name == "fig4")
        return MakeScenario("fig4", {AMF, UDM, SMF, GNB, AUSF}, SweepAttackNames());
    if (name == "aka")
    {
        auto scenario = MakeScenario("aka", {UDM}, {"A1-AKA", "A1"});
        scenario.env.transientChannels = AkaTransientChannels();
        scenario.nodes = NodesOf(scenario.env);
        return scenario;
    }
    throw Error(ErrorCode::InvalidScenario, "unknown builtin scenario '" + std::string(name) + "'");
}

Scenario ResolveScenario(const std::string &ref)
{
    constexpr std::string_view prefix = "builtin:";
    if (ref.starts_with(prefix))
        return BuiltinScenario(std::string_view(ref).substr(prefix.size()));
    return LoadScenarioFile(ref);
}

} // namespace c2chain
