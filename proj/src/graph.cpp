#include "landmap/graph.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace landmap {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

} // namespace

LabeledGraph LabeledGraph::build(VertexId vertex_count, const std::vector<EdgeSpec>& edges,
                                 unsigned declared_max_degree) {
    if (vertex_count == 0) fail("graph: vertex_count must be positive");

    LabeledGraph g;
    g.adjacency_.resize(vertex_count);

    std::set<std::pair<VertexId, VertexId>> seen;
    for (const EdgeSpec& e : edges) {
        if (e.u >= vertex_count || e.v >= vertex_count)
            fail("graph: edge endpoint out of range: (" + std::to_string(e.u) + "," +
                 std::to_string(e.v) + ")");
        if (e.u == e.v) fail("graph: self-loop at vertex " + std::to_string(e.u));
        if (e.label_u.empty() || e.label_v.empty())
            fail("graph: empty label on edge (" + std::to_string(e.u) + "," +
                 std::to_string(e.v) + ")");
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second)
            fail("graph: duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");

        g.adjacency_[e.u].push_back({e.label_u, e.v, e.label_v});
        g.adjacency_[e.v].push_back({e.label_v, e.u, e.label_u});
        EdgeSpec canon = e;
        if (canon.u > canon.v) {
            std::swap(canon.u, canon.v);
            std::swap(canon.label_u, canon.label_v);
        }
        g.edges_.push_back(canon);
        g.alphabet_.insert(e.label_u);
        g.alphabet_.insert(e.label_v);
    }
    std::sort(g.edges_.begin(), g.edges_.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });

    for (VertexId v = 0; v < vertex_count; ++v) {
        auto& arcs = g.adjacency_[v];
        std::unordered_set<std::string> labels;
        for (const Arc& a : arcs)
            if (!labels.insert(a.label).second)
                fail("graph: duplicate label '" + a.label + "' at vertex " + std::to_string(v));
        g.max_degree_ = std::max<unsigned>(g.max_degree_, static_cast<unsigned>(arcs.size()));
    }
    if (declared_max_degree != 0) {
        if (g.max_degree_ > declared_max_degree)
            fail("graph: degree " + std::to_string(g.max_degree_) + " exceeds bound " +
                 std::to_string(declared_max_degree));
        g.max_degree_ = declared_max_degree;
    }

    // connectivity
    std::vector<char> visited(vertex_count, 0);
    std::deque<VertexId> frontier{0};
    visited[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        VertexId v = frontier.front();
        frontier.pop_front();
        for (const Arc& a : g.adjacency_[v])
            if (!visited[a.to]) {
                visited[a.to] = 1;
                ++reached;
                frontier.push_back(a.to);
            }
    }
    if (reached != vertex_count) fail("graph: not connected");

    return g;
}

unsigned LabeledGraph::degree(VertexId v) const {
    return static_cast<unsigned>(adjacency_.at(v).size());
}

const std::vector<LabeledGraph::Arc>& LabeledGraph::arcs(VertexId v) const {
    return adjacency_.at(v);
}

std::vector<std::string> LabeledGraph::labels_at(VertexId v) const {
    std::vector<std::string> out;
    out.reserve(adjacency_.at(v).size());
    for (const Arc& a : adjacency_[v]) out.push_back(a.label);
    return out;
}

std::optional<VertexId> LabeledGraph::neighbor(VertexId v, const std::string& l) const {
    for (const Arc& a : adjacency_.at(v))
        if (a.label == l) return a.to;
    return std::nullopt;
}

LabeledGraph::Replay LabeledGraph::replay(VertexId from, const std::vector<std::string>& labels) const {
    VertexId at = from;
    std::size_t executed = 0;
    for (const std::string& l : labels) {
        auto next = neighbor(at, l);
        if (!next) return {at, executed, false};
        at = *next;
        ++executed;
    }
    return {at, executed, true};
}

std::vector<unsigned> LabeledGraph::bfs_distances(VertexId from) const {
    constexpr unsigned kUnreached = ~0u;
    std::vector<unsigned> dist(vertex_count(), kUnreached);
    dist[from] = 0;
    std::deque<VertexId> frontier{from};
    while (!frontier.empty()) {
        VertexId v = frontier.front();
        frontier.pop_front();
        for (const Arc& a : adjacency_[v])
            if (dist[a.to] == kUnreached) {
                dist[a.to] = dist[v] + 1;
                frontier.push_back(a.to);
            }
    }
    return dist;
}

std::vector<std::string> LabeledGraph::oracle_shortest_path(VertexId u, VertexId v) const {
    if (u >= vertex_count() || v >= vertex_count()) fail("oracle_shortest_path: vertex out of range");
    if (u == v) return {};
    // BFS back from v so the path can be read off forward from u.
    std::vector<unsigned> dist = bfs_distances(v);
    std::vector<std::string> labels;
    VertexId at = u;
    while (at != v) {
        for (const Arc& a : adjacency_[at]) {
            if (dist[a.to] + 1 == dist[at]) {
                labels.push_back(a.label);
                at = a.to;
                break;
            }
        }
    }
    return labels;
}

LandmarkPartition LandmarkPartition::build(VertexId vertex_count,
                                           std::vector<std::vector<VertexId>> classes,
                                           std::vector<std::string> names) {
    if (classes.size() != names.size()) fail("partition: classes/names size mismatch");
    LandmarkPartition p;
    p.class_of.assign(vertex_count, -1);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c].empty()) fail("partition: empty class '" + names[c] + "'");
        std::sort(classes[c].begin(), classes[c].end());
        for (VertexId v : classes[c]) {
            if (v >= vertex_count) fail("partition: vertex out of range in class '" + names[c] + "'");
            if (p.class_of[v] != -1) fail("partition: vertex " + std::to_string(v) + " in two classes");
            p.class_of[v] = static_cast<int>(c);
        }
    }
    for (VertexId v = 0; v < vertex_count; ++v)
        if (p.class_of[v] == -1) fail("partition: vertex " + std::to_string(v) + " unclassified");
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) fail("partition: duplicate class name");
    for (const std::string& n : names)
        if (n.empty()) fail("partition: empty class name");
    p.classes = std::move(classes);
    p.class_names = std::move(names);
    return p;
}

int LandmarkPartition::class_index(const std::string& name) const {
    for (std::size_t c = 0; c < class_names.size(); ++c)
        if (class_names[c] == name) return static_cast<int>(c);
    return -1;
}

std::vector<VertexId> LandmarkPartition::landmarks() const {
    std::vector<VertexId> out;
    for (const auto& cls : classes)
        if (cls.size() == 1) out.push_back(cls[0]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexId> LandmarkPartition::indistinguishable() const {
    std::vector<VertexId> out;
    for (const auto& cls : classes)
        if (cls.size() > 1) out.insert(out.end(), cls.begin(), cls.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> LandmarkPartition::landmark_names() const {
    std::vector<std::string> out;
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (classes[c].size() == 1) out.push_back(class_names[c]);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<VertexId> LandmarkPartition::landmark_vertex(const std::string& name) const {
    int c = class_index(name);
    if (c < 0 || classes[c].size() != 1) return std::nullopt;
    return classes[c][0];
}

unsigned landmark_parameter(const LabeledGraph& graph, const LandmarkPartition& partition) {
    std::vector<VertexId> d = partition.landmarks();
    std::vector<VertexId> i = partition.indistinguishable();
    if (i.empty()) return 0;
    if (d.empty()) fail("landmark_parameter: no landmarks but indistinguishable vertices exist");

    // multi-source BFS from all landmarks
    constexpr unsigned kUnreached = ~0u;
    std::vector<unsigned> dist(graph.vertex_count(), kUnreached);
    std::deque<VertexId> frontier;
    for (VertexId v : d) {
        dist[v] = 0;
        frontier.push_back(v);
    }
    while (!frontier.empty()) {
        VertexId v = frontier.front();
        frontier.pop_front();
        for (const auto& a : graph.arcs(v))
            if (dist[a.to] == kUnreached) {
                dist[a.to] = dist[v] + 1;
                frontier.push_back(a.to);
            }
    }
    unsigned r = 0;
    for (VertexId v : i) r = std::max(r, dist[v]);
    return r;
}

std::string world_to_json(const World& world) {
    nlohmann::json j;
    j["vertices"] = world.graph.vertex_count();
    nlohmann::json edges = nlohmann::json::array();
    for (const EdgeSpec& e : world.graph.edges()) {
        edges.push_back({{"u", e.u}, {"v", e.v}, {"label_u", e.label_u}, {"label_v", e.label_v}});
    }
    j["edges"] = std::move(edges);
    j["classes"] = world.partition.classes;
    nlohmann::json meta = world.meta;
    meta["class_names"] = world.partition.class_names;
    j["meta"] = std::move(meta);
    return j.dump(2) + "\n";
}

World world_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(std::string("world file: ") + e.what());
    }
    for (const char* field : {"vertices", "edges", "classes"})
        if (!j.contains(field)) fail(std::string("world file: missing field '") + field + "'");
    if (!j["vertices"].is_number_unsigned()) fail("world file: field 'vertices' must be a count");

    VertexId n = j["vertices"].get<VertexId>();
    std::vector<EdgeSpec> edges;
    for (const auto& e : j["edges"]) {
        for (const char* field : {"u", "v", "label_u", "label_v"})
            if (!e.contains(field)) fail(std::string("world file: edge missing field '") + field + "'");
        edges.push_back({e["u"].get<VertexId>(), e["v"].get<VertexId>(),
                         e["label_u"].get<std::string>(), e["label_v"].get<std::string>()});
    }

    std::vector<std::vector<VertexId>> classes;
    for (const auto& cls : j["classes"]) classes.push_back(cls.get<std::vector<VertexId>>());

    nlohmann::json meta = j.value("meta", nlohmann::json::object());
    std::vector<std::string> names;
    if (meta.contains("class_names")) {
        names = meta["class_names"].get<std::vector<std::string>>();
        if (names.size() != classes.size()) fail("world file: field 'class_names' length mismatch");
    } else {
        for (const auto& cls : classes) {
            if (cls.size() == 1)
                names.push_back("L" + std::to_string(cls[0]));
            else
                names.push_back("I" + std::to_string(names.size()));
        }
    }

    World w{LabeledGraph::build(n, edges, meta.value("max_degree", 0u)),
            LandmarkPartition::build(n, std::move(classes), std::move(names)), meta};
    return w;
}

std::string world_to_dot(const World& world) {
    std::ostringstream os;
    os << "graph world {\n";
    os << "  node [shape=circle];\n";
    for (VertexId v = 0; v < world.graph.vertex_count(); ++v) {
        os << "  " << v << " [label=\"" << v << "\\n"
           << world.partition.class_names[world.partition.class_of[v]] << "\"";
        if (world.partition.is_landmark(v)) os << " shape=doublecircle";
        os << "];\n";
    }
    for (const EdgeSpec& e : world.graph.edges())
        os << "  " << e.u << " -- " << e.v << " [label=\"" << e.label_u << "/" << e.label_v
           << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace landmap
