#include "oracles.hpp"

#include <c2chain/catalog.hpp>
#include <c2chain/netgraph.hpp>

#include <doctest.h>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/graphviz.hpp>

#include <functional>
#include <random>

using namespace c2chain;

namespace
{

Environment Registration(std::set<NodeId> compromised)
{
    Environment env;
    env.procedures = {RegistrationProcedure()};
    env.compromised = std::move(compromised);
    return env;
}

std::set<std::pair<NodeId, NodeId>> Pairs(const PuppeteerGraph &g)
{
    std::set<std::pair<NodeId, NodeId>> out;
    for (const auto &e : g.edges())
        out.insert({e.from, e.to});
    return out;
}

// Counts vertices and edges after parsing with Boost's DOT reader; throws on
// a syntax error.
std::pair<std::size_t, std::size_t> ParseDot(const std::string &dot)
{
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS,
                                        boost::property<boost::vertex_name_t, std::string>,
                                        boost::property<boost::edge_name_t, std::string>>;
    Graph g;
    boost::dynamic_properties dp(boost::ignore_other_properties);
    dp.property("node_id", boost::get(boost::vertex_name, g));
    dp.property("label", boost::get(boost::edge_name, g));
    std::istringstream in(dot);
    if (!boost::read_graphviz(in, g, dp, "node_id"))
        throw std::runtime_error("read_graphviz failed");
    return {boost::num_vertices(g), boost::num_edges(g)};
}

Attack A1()
{
    return FindCatalogEntry("A1")->attack;
}

} // namespace

TEST_CASE("full graph spans every message")
{
    auto g = BuildFullGraph(Registration({}));
    CHECK(g.nodes().size() == 8);
    CHECK(g.edges().size() == RegistrationProcedure().messages.size());
    CHECK(BuildFullGraph(Environment{}).nodes().empty());
}

TEST_CASE("puppeteer graph keeps edges between controlled nodes")
{
    PuppeteerOptions options;
    auto env = Registration({NodeId::UE, NodeId::AMF, NodeId::AUSF, NodeId::UDM, NodeId::SMF});
    auto g = BuildPuppeteerGraph(env, options);

    // independent filter over the message list
    std::set<std::pair<NodeId, NodeId>> expected;
    for (const auto &m : RegistrationProcedure().messages)
        if (env.compromised.count(m.source) && env.compromised.count(m.target) && m.availableSpace >= 21)
            expected.insert({m.source, m.target});
    CHECK(Pairs(g) == expected);
    for (auto [a, b] : std::vector<std::pair<NodeId, NodeId>>{
             {NodeId::UE, NodeId::AMF}, {NodeId::AMF, NodeId::AUSF}, {NodeId::AMF, NodeId::UDM}, {NodeId::AMF, NodeId::SMF}})
    {
        CHECK(g.hasEdge(a, b));
        CHECK(g.hasEdge(b, a));
    }
    CHECK_FALSE(g.contains(NodeId::GNB));
    CHECK_FALSE(g.contains(NodeId::UPF));

    CHECK(BuildPuppeteerGraph(Registration({}), options).edges().empty());
}

TEST_CASE("threshold and capacity override filter edges")
{
    auto env = Registration({NodeId::UE, NodeId::AMF, NodeId::UDM});
    PuppeteerOptions options;
    options.capacityOverride = 20;
    CHECK(BuildPuppeteerGraph(env, options).edges().empty());
    options.mode = Mode::IM3C;
    CHECK_FALSE(BuildPuppeteerGraph(env, options).edges().empty());
    options.mode = Mode::PB3C;
    options.capacityOverride.reset();
    options.threshold = 65;
    CHECK(BuildPuppeteerGraph(env, options).edges().empty());
}

TEST_CASE("adding a compromised node never removes an edge")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; trial++)
    {
        std::set<NodeId> base;
        for (auto n : kAllNodes)
            if (rng() % 2)
                base.insert(n);
        auto more = base;
        more.insert(kAllNodes[rng() % std::size(kAllNodes)]);
        auto g1 = Pairs(BuildPuppeteerGraph(Registration(base), {}));
        auto g2 = Pairs(BuildPuppeteerGraph(Registration(more), {}));
        for (const auto &p : g1)
            CHECK(g2.count(p) == 1);
    }
}

TEST_CASE("feasibility on the registration scenario")
{
    auto fig3 = BuiltinScenario("fig3");
    PuppeteerOptions options;
    options.attackerControlled = {NodeId::UE};
    auto g = BuildPuppeteerGraph(fig3.env, options);
    auto r = Feasible(A1(), g);
    CHECK(r.feasible);
    CHECK(r.forwardWitness == NodePath{NodeId::UE, NodeId::AMF, NodeId::UDM});
    CHECK(r.backwardWitness == NodePath{NodeId::UDM, NodeId::AMF, NodeId::UE});

    auto a3 = FindCatalogEntry("A3")->attack;
    auto g3 = BuildPuppeteerGraph(Registration({NodeId::UE, NodeId::GNB}), options);
    auto r3 = Feasible(a3, g3);
    CHECK(r3.feasible);
    CHECK(r3.backwardWitness.empty());

    auto a2 = FindCatalogEntry("A2")->attack;
    PuppeteerOptions a2opts;
    a2opts.attackerControlled = {NodeId::UPF, NodeId::UE};
    auto r2 = Feasible(a2, BuildPuppeteerGraph(Registration({NodeId::GNB}), a2opts));
    CHECK_FALSE(r2.feasible);
    CHECK_FALSE(r2.reason.empty());
}

TEST_CASE("feasibility agrees with transitive closure on random environments")
{
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 300; trial++)
    {
        auto rc = oracle::MakeRandomCase(rng);
        PuppeteerOptions options;
        options.attackerControlled = {rc.attack.entry};
        if (rc.attack.exit)
            options.attackerControlled.insert(*rc.attack.exit);
        auto g = BuildPuppeteerGraph(rc.env, options);
        auto report = Feasible(rc.attack, g);
        auto controlled = rc.env.compromised;
        controlled.insert(options.attackerControlled.begin(), options.attackerControlled.end());
        auto closure = oracle::BuildClosure(rc.env, controlled, 21);
        bool fwd = closure.reaches(rc.attack.entry, rc.attack.execution);
        bool bwd = !rc.attack.exit || closure.reaches(rc.attack.execution, *rc.attack.exit);
        CHECK(report.forwardReachable == fwd);
        CHECK(report.backwardReachable == bwd);
        CHECK(report.feasible == (fwd && bwd));
        if (report.forwardReachable)
        {
            CHECK(report.forwardWitness.front() == rc.attack.entry);
            CHECK(report.forwardWitness.back() == rc.attack.execution);
            for (std::size_t i = 1; i < report.forwardWitness.size(); i++)
                CHECK(g.hasEdge(report.forwardWitness[i - 1], report.forwardWitness[i]));
        }
    }
}

TEST_CASE("shortest path is minimum hop with lexicographic tie break")
{
    PuppeteerGraph g;
    auto add = [&](NodeId a, NodeId b) {
        GraphEdge e;
        e.from = a;
        e.to = b;
        e.capacity = 64;
        g.addEdge(e);
    };
    add(NodeId::UE, NodeId::SMF);
    add(NodeId::SMF, NodeId::UDM);
    add(NodeId::UE, NodeId::AMF);
    add(NodeId::AMF, NodeId::UDM);
    add(NodeId::UE, NodeId::GNB);
    add(NodeId::GNB, NodeId::AUSF);
    add(NodeId::AUSF, NodeId::UDM);
    CHECK(ShortestPath(g, NodeId::UE, NodeId::UDM) == NodePath{NodeId::UE, NodeId::AMF, NodeId::UDM});
    CHECK(ShortestPath(g, NodeId::UE, NodeId::UE) == NodePath{NodeId::UE});
    CHECK_FALSE(ShortestPath(g, NodeId::UDM, NodeId::UE).has_value());

    auto all = EnumeratePaths(g, NodeId::UE, NodeId::UDM, 3);
    CHECK(all.size() == 3);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(EnumeratePaths(g, NodeId::UE, NodeId::UDM, 2).size() == 2);
    CHECK(EnumeratePaths(g, NodeId::UE, NodeId::UE, 3) == std::vector<NodePath>{{NodeId::UE}});
    CHECK(EnumeratePaths(g, NodeId::UDM, NodeId::UE, 5).empty());
}

TEST_CASE("enumerated paths match a brute-force search")
{
    // every node sequence of distinct nodes up to maxLen hops, kept when each
    // hop has an edge
    auto brute = [](const PuppeteerGraph &g, NodeId from, NodeId to, std::size_t maxLen) {
        std::vector<NodePath> out;
        std::vector<NodeId> nodes(g.nodes().begin(), g.nodes().end());
        std::function<void(NodePath &)> extend = [&](NodePath &p) {
            if (p.back() == to)
            {
                out.push_back(p);
                return;
            }
            if (p.size() - 1 == maxLen)
                return;
            for (auto n : nodes)
                if (std::find(p.begin(), p.end(), n) == p.end() && g.hasEdge(p.back(), n))
                {
                    p.push_back(n);
                    extend(p);
                    p.pop_back();
                }
        };
        if (g.contains(from) && g.contains(to))
        {
            NodePath p{from};
            extend(p);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto fig3 = BuiltinScenario("fig3");
    PuppeteerOptions options;
    options.attackerControlled = {NodeId::UE};
    auto g = BuildPuppeteerGraph(fig3.env, options);
    for (std::size_t len = 1; len <= 5; len++)
        for (auto a : g.nodes())
            for (auto b : g.nodes())
                CHECK(EnumeratePaths(g, a, b, len) == brute(g, a, b, len));
    auto paths = EnumeratePaths(g, NodeId::UE, NodeId::UDM, 2);
    CHECK(paths == std::vector<NodePath>{{NodeId::UE, NodeId::AMF, NodeId::UDM}});
    CHECK(EnumeratePaths(g, NodeId::UE, NodeId::GNB, 4).empty());
}

TEST_CASE("DOT export colours attack paths and parses")
{
    auto fig3 = BuiltinScenario("fig3");
    PuppeteerOptions options;
    options.attackerControlled = {NodeId::UE};
    auto g = BuildPuppeteerGraph(fig3.env, options);
    auto r = Feasible(A1(), g);
    DotStyle style;
    style.highlight = {NodeId::UE};
    style.execution = NodeId::UDM;
    auto dot = ExportDot(g, &r, style);
    CHECK(dot.find("\"AMF\" -> \"UE\"") == std::string::npos);
    CHECK(dot.find("\"UE\" -> \"AMF\" [label=") != std::string::npos);
    auto ueAmf = dot.substr(dot.find("\"UE\" -> \"AMF\""));
    ueAmf = ueAmf.substr(0, ueAmf.find('\n'));
    CHECK(ueAmf.find("color=purple") != std::string::npos);
    CHECK(ueAmf.find("dir=both") != std::string::npos);
    CHECK(dot.find("shape=doublecircle") != std::string::npos);
    CHECK(dot.find("fillcolor=orange") != std::string::npos);
    CHECK(dot.find("color=gray") != std::string::npos);

    auto [vertices, edges] = ParseDot(dot);
    CHECK(vertices == g.nodes().size());
    CHECK(edges > 0);

    PuppeteerGraph isolated;
    isolated.addNode(NodeId::UE);
    isolated.addNode(NodeId::UDM);
    auto plain = ExportDot(isolated);
    CHECK(ParseDot(plain) == std::pair<std::size_t, std::size_t>{2, 0});

    auto full = ExportDot(BuildFullGraph(fig3.env));
    CHECK(ParseDot(full).first == 8);
    CHECK(full.find("msgs") != std::string::npos);
}

TEST_CASE("transient edges are dashed")
{
    auto aka = BuiltinScenario("aka");
    PuppeteerOptions options;
    options.attackerControlled = {NodeId::UE};
    auto g = BuildPuppeteerGraph(aka.env, options);
    auto dot = ExportDot(g);
    CHECK(dot.find("style=dashed") != std::string::npos);
    CHECK(ParseDot(dot).second == 2);
    CHECK(FormatPath({NodeId::UE, NodeId::AMF, NodeId::UDM}) == "UE->AMF->UDM");
}
