#include <c2chain/netgraph.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace c2chain
{

void PuppeteerGraph::addEdge(GraphEdge edge)
{
    m_nodes.insert(edge.from);
    m_nodes.insert(edge.to);
    m_edges.push_back(std::move(edge));
}

std::set<NodeId> PuppeteerGraph::successors(NodeId node) const
{
    std::set<NodeId> out;
    for (const auto &edge : m_edges)
        if (edge.from == node)
            out.insert(edge.to);
    return out;
}

bool PuppeteerGraph::hasEdge(NodeId from, NodeId to) const
{
    return std::any_of(m_edges.begin(), m_edges.end(),
                       [&](const GraphEdge &e) { return e.from == from && e.to == to; });
}

BitCount DefaultThreshold(Mode mode)
{
    return mode == Mode::PB3C ? kPb3cThreshold : kIm3cThreshold;
}

PuppeteerGraph BuildFullGraph(const Environment &env)
{
    PuppeteerGraph graph;
    for (std::size_t p = 0; p < env.procedures.size(); p++)
    {
        const auto &proc = env.procedures[p];
        for (std::size_t m = 0; m < proc.messages.size(); m++)
        {
            const auto &msg = proc.messages[m];
            GraphEdge edge;
            edge.from = msg.source;
            edge.to = msg.target;
            edge.procedure = p;
            edge.message = m;
            edge.capacity = msg.availableSpace;
            edge.label = msg.label;
            graph.addEdge(std::move(edge));
        }
    }
    return graph;
}

std::set<NodeId> ControlledNodes(const Environment &env, const PuppeteerOptions &options)
{
    auto controlled = env.compromised;
    controlled.insert(options.attackerControlled.begin(), options.attackerControlled.end());
    return controlled;
}

PuppeteerGraph BuildPuppeteerGraph(const Environment &env, const PuppeteerOptions &options)
{
    auto threshold = options.threshold.value_or(DefaultThreshold(options.mode));
    auto controlled = ControlledNodes(env, options);
    auto referenced = env.referencedNodes();

    PuppeteerGraph graph;
    for (auto node : controlled)
        if (referenced.contains(node))
            graph.addNode(node);

    for (std::size_t p = 0; p < env.procedures.size(); p++)
    {
        const auto &proc = env.procedures[p];
        for (std::size_t m = 0; m < proc.messages.size(); m++)
        {
            const auto &msg = proc.messages[m];
            if (!controlled.contains(msg.source) || !controlled.contains(msg.target))
                continue;
            auto capacity = CapacityOf(msg, options.capacityOverride);
            if (capacity < threshold)
                continue;
            GraphEdge edge;
            edge.from = msg.source;
            edge.to = msg.target;
            edge.procedure = p;
            edge.message = m;
            edge.capacity = capacity;
            edge.label = msg.label;
            graph.addEdge(std::move(edge));
        }
    }

    for (std::size_t c = 0; c < env.transientChannels.size(); c++)
    {
        const auto &channel = env.transientChannels[c];
        if (!controlled.contains(channel.first) || !controlled.contains(channel.last))
            continue;
        if (channel.capacity < threshold)
            continue;
        GraphEdge edge;
        edge.from = channel.first;
        edge.to = channel.last;
        edge.kind = EdgeKind::Transient;
        for (std::size_t p = 0; p < env.procedures.size(); p++)
            if (env.procedures[p].name == channel.procedure)
                edge.procedure = p;
        edge.message = channel.anchorMessage;
        edge.channel = c;
        edge.capacity = channel.capacity;
        edge.label = channel.carrier;
        graph.addEdge(std::move(edge));
    }
    return graph;
}

std::optional<NodePath> ShortestPath(const PuppeteerGraph &graph, NodeId from, NodeId to)
{
    if (!graph.contains(from) || !graph.contains(to))
        return std::nullopt;
    if (from == to)
        return NodePath{from};

    std::map<NodeId, NodeId> parent;
    std::deque<NodeId> queue{from};
    std::set<NodeId> visited{from};
    while (!queue.empty())
    {
        auto node = queue.front();
        queue.pop_front();
        for (auto next : graph.successors(node))
        {
            if (!visited.insert(next).second)
                continue;
            parent[next] = node;
            if (next == to)
            {
                NodePath path{to};
                while (path.back() != from)
                    path.push_back(parent.at(path.back()));
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(next);
        }
    }
    return std::nullopt;
}

FeasibilityReport Feasible(const Attack &attack, const PuppeteerGraph &graph)
{
    FeasibilityReport report;
    if (auto path = ShortestPath(graph, attack.entry, attack.execution))
    {
        report.forwardReachable = true;
        report.forwardWitness = std::move(*path);
    }
    if (!attack.exit.has_value())
    {
        report.backwardReachable = true;
    }
    else if (auto path = ShortestPath(graph, attack.execution, *attack.exit))
    {
        report.backwardReachable = true;
        report.backwardWitness = std::move(*path);
    }
    report.feasible = report.forwardReachable && report.backwardReachable;

    if (!report.forwardReachable)
        report.reason = std::string("no forward path ") + ToString(attack.entry) + " -> " + ToString(attack.execution);
    else if (!report.backwardReachable)
        report.reason =
            std::string("no backward path ") + ToString(attack.execution) + " -> " + ToString(*attack.exit);
    return report;
}

namespace
{

void CollectPaths(const PuppeteerGraph &graph, NodeId to, std::size_t maxLen, NodePath &current,
                  std::vector<NodePath> &out)
{
    auto node = current.back();
    if (node == to)
    {
        out.push_back(current);
        return;
    }
    if (current.size() - 1 >= maxLen)
        return;
    for (auto next : graph.successors(node))
    {
        if (std::find(current.begin(), current.end(), next) != current.end())
            continue;
        current.push_back(next);
        CollectPaths(graph, to, maxLen, current, out);
        current.pop_back();
    }
}

std::string Quote(NodeId node)
{
    return std::string("\"") + ToString(node) + "\"";
}

std::set<std::pair<NodeId, NodeId>> PathPairs(const NodePath &path)
{
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t i = 1; i < path.size(); i++)
        pairs.insert({path[i - 1], path[i]});
    return pairs;
}

} // namespace

std::vector<NodePath> EnumeratePaths(const PuppeteerGraph &graph, NodeId from, NodeId to, std::size_t maxLen)
{
    std::vector<NodePath> out;
    if (!graph.contains(from) || !graph.contains(to))
        return out;
    NodePath current{from};
    CollectPaths(graph, to, maxLen, current, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::string ExportDot(const PuppeteerGraph &graph, const FeasibilityReport *report, const DotStyle &style)
{
    struct PairInfo
    {
        std::size_t count = 0;
        BitCount minCapacity = 0;
        BitCount maxCapacity = 0;
        bool transient = false;
    };
    std::map<std::pair<NodeId, NodeId>, PairInfo> pairs;
    for (const auto &edge : graph.edges())
    {
        auto &info = pairs[{edge.from, edge.to}];
        if (info.count == 0)
            info.minCapacity = info.maxCapacity = edge.capacity;
        info.count++;
        info.minCapacity = std::min(info.minCapacity, edge.capacity);
        info.maxCapacity = std::max(info.maxCapacity, edge.capacity);
        info.transient = info.transient || edge.kind == EdgeKind::Transient;
    }

    std::set<std::pair<NodeId, NodeId>> forward, backward;
    if (report != nullptr)
    {
        forward = PathPairs(report->forwardWitness);
        backward = PathPairs(report->backwardWitness);
    }

    auto colorOf = [&](const std::pair<NodeId, NodeId> &pair) -> std::string {
        bool fwd = forward.contains(pair);
        bool bwd = backward.contains(pair);
        if (fwd && bwd)
            return "purple";
        if (fwd)
            return "red";
        if (bwd)
            return "blue";
        return report != nullptr ? "gray" : "black";
    };

    auto label = [](const PairInfo &info) {
        std::ostringstream out;
        out << info.count << (info.count == 1 ? " msg" : " msgs") << ", ";
        if (info.minCapacity == info.maxCapacity)
            out << info.minCapacity << " bit";
        else
            out << info.minCapacity << "-" << info.maxCapacity << " bit";
        return out.str();
    };

    std::ostringstream out;
    out << "digraph \"" << style.name << "\" {\n";
    out << "  node [shape=ellipse];\n";
    for (auto node : graph.nodes())
    {
        out << "  " << Quote(node);
        std::vector<std::string> attrs;
        if (style.highlight.contains(node))
            attrs.push_back("style=filled, fillcolor=orange");
        if (style.execution == node)
            attrs.push_back("shape=doublecircle");
        if (!attrs.empty())
        {
            out << " [";
            for (std::size_t i = 0; i < attrs.size(); i++)
                out << (i ? ", " : "") << attrs[i];
            out << "]";
        }
        out << ";\n";
    }

    std::set<std::pair<NodeId, NodeId>> emitted;
    for (const auto &[pair, info] : pairs)
    {
        if (emitted.contains(pair))
            continue;
        auto reverse = std::make_pair(pair.second, pair.first);
        auto color = colorOf(pair);
        auto it = pairs.find(reverse);
        bool merged = false;
        if (it != pairs.end() && !emitted.contains(reverse))
        {
            auto reverseColor = colorOf(reverse);
            auto onPath = [](const std::string &c) { return c != "gray" && c != "black"; };
            // both directions of the pair are on an attack path
            if (onPath(color) && onPath(reverseColor))
            {
                out << "  " << Quote(pair.first) << " -> " << Quote(pair.second) << " [label=\"" << label(info)
                    << " / " << label(it->second) << "\", color=purple, dir=both";
                if (info.transient || it->second.transient)
                    out << ", style=dashed";
                out << "];\n";
                emitted.insert(reverse);
                merged = true;
            }
        }
        if (!merged)
        {
            out << "  " << Quote(pair.first) << " -> " << Quote(pair.second) << " [label=\"" << label(info)
                << "\", color=" << color;
            if (info.transient)
                out << ", style=dashed";
            out << "];\n";
        }
        emitted.insert(pair);
    }
    out << "}\n";
    return out.str();
}

std::string FormatPath(const NodePath &path)
{
    std::string out;
    for (std::size_t i = 0; i < path.size(); i++)
    {
        if (i)
            out += "->";
        out += ToString(path[i]);
    }
    return out;
}

} // namespace c2chain
