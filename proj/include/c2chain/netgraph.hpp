#pragma once

#include <c2chain/core_model.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace c2chain
{

enum class EdgeKind : std::uint8_t
{
    Direct,
    Transient,
};

struct GraphEdge
{
    NodeId from{};
    NodeId to{};
    EdgeKind kind = EdgeKind::Direct;
    // procedure index into Environment::procedures
    std::size_t procedure = 0;
    // message index for direct edges, anchor index for transient edges
    std::size_t message = 0;
    // index into Environment::transientChannels for transient edges
    std::size_t channel = 0;
    BitCount capacity = 0;
    std::string label;

    bool operator==(const GraphEdge &) const = default;
};

// Directed multigraph: network functions as nodes, messages (or transient
// channels) as edges.
class PuppeteerGraph
{
  public:
    void addNode(NodeId node)
    {
        m_nodes.insert(node);
    }
    void addEdge(GraphEdge edge);

    const std::set<NodeId> &nodes() const
    {
        return m_nodes;
    }
    const std::vector<GraphEdge> &edges() const
    {
        return m_edges;
    }
    bool contains(NodeId node) const
    {
        return m_nodes.contains(node);
    }

    // Distinct successors, ascending.
    std::set<NodeId> successors(NodeId node) const;
    bool hasEdge(NodeId from, NodeId to) const;

  private:
    std::set<NodeId> m_nodes;
    std::vector<GraphEdge> m_edges;
};

inline constexpr BitCount kPb3cThreshold = 21;
inline constexpr BitCount kIm3cThreshold = 1;

BitCount DefaultThreshold(Mode mode);

// Every message, ignoring compromise.
PuppeteerGraph BuildFullGraph(const Environment &env);

struct PuppeteerOptions
{
    Mode mode = Mode::PB3C;
    std::optional<BitCount> threshold;
    std::optional<BitCount> capacityOverride;
    // attack endpoints under attacker control in addition to env.compromised
    std::set<NodeId> attackerControlled;
};

// Edges between controlled nodes whose capacity reaches the threshold, plus
// transient channels whose first and last nodes are controlled.
PuppeteerGraph BuildPuppeteerGraph(const Environment &env, const PuppeteerOptions &options = {});

std::set<NodeId> ControlledNodes(const Environment &env, const PuppeteerOptions &options);

using NodePath = std::vector<NodeId>;

struct FeasibilityReport
{
    bool forwardReachable = false;
    bool backwardReachable = false;
    bool feasible = false;
    NodePath forwardWitness;
    NodePath backwardWitness;
    std::string reason;

    bool operator==(const FeasibilityReport &) const = default;
};

// Breadth-first search with ascending neighbor order, so witnesses are
// minimum-hop and lexicographically smallest among those.
std::optional<NodePath> ShortestPath(const PuppeteerGraph &graph, NodeId from, NodeId to);

FeasibilityReport Feasible(const Attack &attack, const PuppeteerGraph &graph);

// Simple paths of at most maxLen hops, lexicographic by node sequence.
std::vector<NodePath> EnumeratePaths(const PuppeteerGraph &graph, NodeId from, NodeId to, std::size_t maxLen);

struct DotStyle
{
    std::string name = "puppeteer";
    std::set<NodeId> highlight;
    std::optional<NodeId> execution;
};

std::string ExportDot(const PuppeteerGraph &graph, const FeasibilityReport *report = nullptr,
                      const DotStyle &style = {});

std::string FormatPath(const NodePath &path);

} // namespace c2chain
