#include <c2chain/catalog.hpp>
#include <c2chain/netgraph.hpp>

#include <doctest.h>

using namespace c2chain;

namespace
{

std::size_t IndexOfLabel(const Procedure &proc, const std::string &needle)
{
    for (std::size_t i = 0; i < proc.messages.size(); i++)
        if (proc.messages[i].label.find(needle) != std::string::npos)
            return i;
    return proc.messages.size();
}

} // namespace

TEST_CASE("registration procedure covers the eight core components")
{
    auto proc = RegistrationProcedure();
    CHECK(proc.name == kRegistrationName);
    Environment env;
    env.procedures = {proc};
    CHECK(env.referencedNodes() == std::set<NodeId>{NodeId::UE, NodeId::GNB, NodeId::AMF, NodeId::SMF,
                                                    NodeId::PCF, NodeId::UPF, NodeId::AUSF, NodeId::UDM});
    for (const auto &msg : proc.messages)
        CHECK(msg.availableSpace == 64);
}

TEST_CASE("SBI messages carry their parameter counts")
{
    auto proc = RegistrationProcedure();
    const auto &table = SbiParameterTable();
    CHECK(table.at("Nsmf_PDUSession_Create").requestRequired == 12);
    CHECK(table.at("Nsmf_PDUSession_Create").requestOptional == 6);
    CHECK(table.at("Npcf_AMPolicyControl_Create").requestOptional == std::nullopt);
    std::size_t annotated = 0;
    for (const auto &msg : proc.messages)
        for (const auto &[name, counts] : table)
            if (msg.label.rfind(name, 0) == 0)
            {
                REQUIRE(msg.params.has_value());
                CHECK(*msg.params == counts);
                annotated++;
            }
    CHECK(annotated >= table.size());
}

TEST_CASE("registration ordering")
{
    auto proc = RegistrationProcedure();
    auto aka = IndexOfLabel(proc, "UEAuthentication");
    auto uecm = IndexOfLabel(proc, "UECM_Registration");
    auto pfcp = IndexOfLabel(proc, "PFCP");
    auto pdu = IndexOfLabel(proc, "PDUSession_Create");
    REQUIRE(aka < proc.messages.size());
    REQUIRE(uecm < proc.messages.size());
    CHECK(aka < uecm);
    CHECK(pdu < pfcp);
    CHECK(proc.messages.front().source == NodeId::UE);
}

TEST_CASE("attack catalog sizes")
{
    auto a1 = FindCatalogEntry("A1");
    REQUIRE(a1 != nullptr);
    CHECK(a1->attack.forwardBits == 128);
    CHECK(a1->attack.backwardBits == 192);
    CHECK(a1->attack.exit == NodeId::UE);

    auto a3 = FindCatalogEntry("A3");
    REQUIRE(a3 != nullptr);
    CHECK_FALSE(a3->attack.exit.has_value());
    CHECK(a3->attack.backwardBits == 0);
    CHECK(a3->attack.execution == NodeId::GNB);
    CHECK(a3->forwardBitsMin == 22);

    auto v4 = FindCatalogEntry("A1-IPv4");
    REQUIRE(v4 != nullptr);
    CHECK(v4->attack.forwardBits == 64 + 32);
    CHECK(v4->attack.exit == NodeId::UPF);
    CHECK(v4->backwardConvention == OverheadConvention::HeaderOverTotal);

    auto a2 = FindCatalogEntry("A2");
    REQUIRE(a2 != nullptr);
    CHECK(a2->attack.entry == NodeId::UPF);
    CHECK(a2->attack.execution == NodeId::AMF);

    CHECK(FindCatalogEntry("nothing") == nullptr);
    for (const auto &entry : AttackCatalog())
        CHECK(ValidateAttack(entry.attack).empty());
}

TEST_CASE("AKA transient channels")
{
    auto channels = AkaTransientChannels();
    REQUIRE(channels.size() == 2);
    const auto &fwd = channels[0];
    const auto &bwd = channels[1];
    CHECK(fwd.direction == Direction::Forward);
    CHECK(fwd.capacity == 64);
    CHECK(fwd.first == NodeId::UE);
    CHECK(fwd.last == NodeId::UDM);
    CHECK(bwd.direction == Direction::Backward);
    CHECK(bwd.capacity == 256);
    CHECK(bwd.capacity / 128 == 2);
    CHECK(bwd.first == NodeId::UDM);
    CHECK(bwd.last == NodeId::UE);

    auto aka = BuiltinScenario("aka");
    CHECK(aka.env.compromised == std::set<NodeId>{NodeId::UDM});
    PuppeteerOptions options;
    options.attackerControlled = {NodeId::UE};
    auto graph = BuildPuppeteerGraph(aka.env, options);
    REQUIRE(graph.edges().size() == 2);
    CHECK(graph.hasEdge(NodeId::UE, NodeId::UDM));
    CHECK(graph.hasEdge(NodeId::UDM, NodeId::UE));
}

TEST_CASE("demo subscriber store")
{
    auto store = DemoSubscriberStore();
    CHECK(store.size() == 8);
    CHECK(store.count(0x0010100000000001ULL) == 1);
    CHECK(store.at(0x0010100000000001ULL) != store.at(0x0010100000000002ULL));
}

TEST_CASE("builtin scenarios resolve by name")
{
    CHECK(BuiltinScenarioNames() == std::vector<std::string>{"fig3", "fig4", "aka"});
    auto fig3 = ResolveScenario("builtin:fig3");
    CHECK(fig3.env.compromised ==
          std::set<NodeId>{NodeId::AMF, NodeId::AUSF, NodeId::UDM, NodeId::SMF});
    auto fig4 = ResolveScenario("builtin:fig4");
    CHECK(fig4.env.compromised.count(NodeId::GNB) == 1);
    for (const auto &name : SweepAttackNames())
        CHECK(fig4.findAttack(name) != nullptr);
}
