#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace landmap {

using VertexId = std::uint32_t;

struct EdgeSpec {
    VertexId u = 0;
    VertexId v = 0;
    std::string label_u; // label of this edge at u
    std::string label_v; // label of this edge at v
};

// Undirected, connected, bounded-degree graph with per-vertex edge labels.
// Labels at a vertex are pairwise distinct and never empty; an absent label
// is the null result, not a stored value. Immutable once built.
class LabeledGraph {
public:
    struct Arc {
        std::string label;   // label of the edge at the source vertex
        VertexId to;
        std::string reverse; // label of the same edge at `to`
    };

    static LabeledGraph build(VertexId vertex_count, const std::vector<EdgeSpec>& edges,
                              unsigned declared_max_degree = 0);

    VertexId vertex_count() const { return static_cast<VertexId>(adjacency_.size()); }
    std::size_t edge_count() const { return edges_.size(); }
    unsigned max_degree() const { return max_degree_; }
    const std::vector<EdgeSpec>& edges() const { return edges_; }
    const std::set<std::string>& label_alphabet() const { return alphabet_; }

    unsigned degree(VertexId v) const;
    const std::vector<Arc>& arcs(VertexId v) const;
    std::vector<std::string> labels_at(VertexId v) const;

    // Deterministic movement: the vertex across the edge labeled `l` at `v`,
    // or nothing when no such edge exists.
    std::optional<VertexId> neighbor(VertexId v, const std::string& l) const;

    // Deterministic replay of a label sequence; stops at the first label that
    // is absent at the current vertex.
    struct Replay {
        VertexId end;
        std::size_t executed;
        bool completed;
    };
    Replay replay(VertexId from, const std::vector<std::string>& labels) const;

    std::vector<unsigned> bfs_distances(VertexId from) const;

    // Shortest label sequence from u to v; empty when u == v.
    std::vector<std::string> oracle_shortest_path(VertexId u, VertexId v) const;

private:
    LabeledGraph() = default;
    std::vector<std::vector<Arc>> adjacency_;
    std::vector<EdgeSpec> edges_;
    std::set<std::string> alphabet_;
    unsigned max_degree_ = 0;
};

// Recognition partition: some number of singleton classes (landmarks) plus
// classes of mutually indistinguishable vertices.
struct LandmarkPartition {
    std::vector<std::vector<VertexId>> classes; // each sorted; disjoint; cover V
    std::vector<std::string> class_names;       // unique, parallel to classes
    std::vector<int> class_of;                  // vertex -> class index

    static LandmarkPartition build(VertexId vertex_count,
                                   std::vector<std::vector<VertexId>> classes,
                                   std::vector<std::string> names);

    bool is_landmark_class(int c) const { return classes[c].size() == 1; }
    bool is_landmark(VertexId v) const { return is_landmark_class(class_of[v]); }
    int class_index(const std::string& name) const; // -1 when unknown

    std::vector<VertexId> landmarks() const;         // D, sorted
    std::vector<VertexId> indistinguishable() const; // I, sorted
    std::vector<std::string> landmark_names() const; // sorted
    // vertex behind a singleton class name; nothing for non-singletons
    std::optional<VertexId> landmark_vertex(const std::string& name) const;
};

// Landmark distribution parameter r: max distance from any vertex in I to its
// nearest landmark; 0 when I is empty.
unsigned landmark_parameter(const LabeledGraph& graph, const LandmarkPartition& partition);

// Ground-truth world: the graph, its recognition partition, and generator
// metadata. This is what world files store.
struct World {
    LabeledGraph graph;
    LandmarkPartition partition;
    nlohmann::json meta = nlohmann::json::object();

    unsigned achieved_r() const { return landmark_parameter(graph, partition); }
};

std::string world_to_json(const World& world);
World world_from_json(const std::string& text);
std::string world_to_dot(const World& world);

} // namespace landmap
