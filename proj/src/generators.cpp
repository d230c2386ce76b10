#include "landmap/generators.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "landmap/rng.hpp"

namespace landmap {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

// Build the standard landmark-graph partition: one singleton class per
// landmark (named after its vertex) plus a single class of everything else.
LandmarkPartition plan_partition(VertexId n, std::vector<VertexId> landmarks) {
    std::sort(landmarks.begin(), landmarks.end());
    landmarks.erase(std::unique(landmarks.begin(), landmarks.end()), landmarks.end());
    std::vector<std::vector<VertexId>> classes;
    std::vector<std::string> names;
    std::set<VertexId> mark(landmarks.begin(), landmarks.end());
    for (VertexId v : landmarks) {
        classes.push_back({v});
        names.push_back("L" + std::to_string(v));
    }
    std::vector<VertexId> rest;
    for (VertexId v = 0; v < n; ++v)
        if (!mark.count(v)) rest.push_back(v);
    if (!rest.empty()) {
        classes.push_back(std::move(rest));
        names.push_back("I");
    }
    return LandmarkPartition::build(n, std::move(classes), std::move(names));
}

std::vector<VertexId> resolve_landmarks(const LabeledGraph& graph, const LandmarkPlan& plan,
                                        Rng& rng) {
    const VertexId n = graph.vertex_count();
    switch (plan.kind) {
        case LandmarkPlan::Kind::All: {
            std::vector<VertexId> all(n);
            for (VertexId v = 0; v < n; ++v) all[v] = v;
            return all;
        }
        case LandmarkPlan::Kind::Explicit: {
            for (VertexId v : plan.explicit_ids)
                if (v >= n) fail("landmark plan: explicit vertex out of range");
            if (plan.explicit_ids.empty()) fail("landmark plan: explicit set empty");
            return plan.explicit_ids;
        }
        case LandmarkPlan::Kind::Count: break;
    }
    if (plan.count == 0 || plan.count > n) fail("landmark plan: count out of range");
    if (plan.count == n && plan.target_r && *plan.target_r != 0)
        fail("landmark plan: all vertices landmarks forces r = 0");

    // rejection-sample landmark sets until the achieved r matches the target
    const int kMaxTries = 20000;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        std::vector<VertexId> pool(n);
        for (VertexId v = 0; v < n; ++v) pool[v] = v;
        for (unsigned i = 0; i < plan.count; ++i) {
            std::size_t j = i + rng.index(pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        std::vector<VertexId> picked(pool.begin(), pool.begin() + plan.count);
        if (!plan.target_r) return picked;
        LandmarkPartition p = plan_partition(n, picked);
        if (landmark_parameter(graph, p) == *plan.target_r) return picked;
    }
    fail("landmark plan: no placement of " + std::to_string(plan.count) +
         " landmarks achieves r = " + std::to_string(*plan.target_r));
}

unsigned graph_diameter(const LabeledGraph& g) {
    unsigned best = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto dist = g.bfs_distances(v);
        for (unsigned d : dist) best = std::max(best, d);
    }
    return best;
}

} // namespace

LandmarkPlan LandmarkPlan::explicit_set(std::vector<VertexId> ids) {
    LandmarkPlan p;
    p.kind = Kind::Explicit;
    p.explicit_ids = std::move(ids);
    return p;
}

LandmarkPlan LandmarkPlan::with_count(unsigned count, std::optional<unsigned> target_r) {
    LandmarkPlan p;
    p.kind = Kind::Count;
    p.count = count;
    p.target_r = target_r;
    return p;
}

World gen_grid(unsigned width, unsigned height, const LandmarkPlan& plan, std::uint64_t seed) {
    if (width < 2 || height < 2) fail("gen_grid: width and height must be >= 2");
    const VertexId n = width * height;
    auto id = [width](unsigned x, unsigned y) { return VertexId(y * width + x); };

    std::vector<EdgeSpec> edges;
    for (unsigned y = 0; y < height; ++y)
        for (unsigned x = 0; x < width; ++x) {
            if (x + 1 < width) edges.push_back({id(x, y), id(x + 1, y), "E", "W"});
            if (y + 1 < height) edges.push_back({id(x, y), id(x, y + 1), "N", "S"});
        }
    LabeledGraph graph = LabeledGraph::build(n, edges, 4);

    if (plan.kind == LandmarkPlan::Kind::Count && plan.target_r &&
        *plan.target_r > graph_diameter(graph))
        fail("gen_grid: target r exceeds grid diameter");

    Rng rng = Rng::substream(seed, "gen_grid");
    std::vector<VertexId> landmarks = resolve_landmarks(graph, plan, rng);
    LandmarkPartition partition = plan_partition(n, landmarks);

    World w{std::move(graph), std::move(partition)};
    w.meta = {{"kind", "grid"}, {"width", width}, {"height", height},
              {"seed", seed}, {"max_degree", 4}, {"achieved_r", w.achieved_r()}};
    return w;
}

CorridorLayout CorridorLayout::from_json(const nlohmann::json& j) {
    if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
        fail("corridor layout: missing field 'segments'");
    CorridorLayout layout;
    for (const auto& s : j["segments"]) {
        if (!s.contains("from") || !s.contains("to"))
            fail("corridor layout: segment missing field 'from'/'to'");
        auto from = s["from"].get<std::vector<int>>();
        auto to = s["to"].get<std::vector<int>>();
        if (from.size() != 2 || to.size() != 2)
            fail("corridor layout: segment endpoints must be [x, y]");
        layout.segments.push_back({from[0], from[1], to[0], to[1]});
    }
    return layout;
}

World gen_building(const CorridorLayout& layout, std::uint64_t seed) {
    using Point = std::pair<int, int>;
    struct Seg {
        Point a, b;
        bool horizontal;
    };
    std::vector<Seg> segs;
    for (const auto& s : layout.segments) {
        if (s.x0 == s.x1 && s.y0 == s.y1) fail("gen_building: zero-length segment");
        if (s.x0 != s.x1 && s.y0 != s.y1) fail("gen_building: segment not axis-aligned");
        Seg seg{{s.x0, s.y0}, {s.x1, s.y1}, s.y0 == s.y1};
        if (seg.a > seg.b) std::swap(seg.a, seg.b);
        segs.push_back(seg);
    }

    // junction points: endpoints plus any point of one segment lying on another
    std::set<Point> points;
    auto on_segment = [](const Seg& s, const Point& p) {
        if (s.horizontal)
            return p.second == s.a.second && p.first >= s.a.first && p.first <= s.b.first;
        return p.first == s.a.first && p.second >= s.a.second && p.second <= s.b.second;
    };
    for (const Seg& s : segs) {
        points.insert(s.a);
        points.insert(s.b);
    }
    for (const Seg& h : segs)
        for (const Seg& v : segs) {
            if (!h.horizontal || v.horizontal) continue;
            Point cross{v.a.first, h.a.second};
            if (on_segment(h, cross) && on_segment(v, cross)) points.insert(cross);
        }

    std::map<Point, VertexId> index;
    for (const Point& p : points) index.emplace(p, VertexId(index.size()));

    std::set<std::pair<VertexId, VertexId>> seen;
    std::vector<EdgeSpec> edges;
    for (const Seg& s : segs) {
        std::vector<Point> on;
        for (const Point& p : points)
            if (on_segment(s, p)) on.push_back(p);
        std::sort(on.begin(), on.end(), [&](const Point& a, const Point& b) {
            return s.horizontal ? a.first < b.first : a.second < b.second;
        });
        for (std::size_t i = 0; i + 1 < on.size(); ++i) {
            VertexId u = index[on[i]], v = index[on[i + 1]];
            auto key = std::minmax(u, v);
            if (!seen.insert(key).second) continue; // overlapping segments share a piece
            if (s.horizontal)
                edges.push_back({u, v, "E", "W"});
            else
                edges.push_back({u, v, "N", "S"});
        }
    }

    LabeledGraph graph = LabeledGraph::build(VertexId(index.size()), edges, 4);

    // classify junctions by the set of incident directions
    std::vector<std::string> type_of(graph.vertex_count());
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
        std::set<std::string> dirs;
        for (const auto& a : graph.arcs(v)) dirs.insert(a.label);
        switch (dirs.size()) {
            case 1: type_of[v] = "end"; break;
            case 2:
                type_of[v] = (dirs == std::set<std::string>{"E", "W"} ||
                              dirs == std::set<std::string>{"N", "S"})
                                 ? "hall"
                                 : "L";
                break;
            case 3: type_of[v] = "T"; break;
            default: type_of[v] = "+"; break;
        }
    }
    std::map<std::string, std::vector<VertexId>> by_type;
    for (VertexId v = 0; v < graph.vertex_count(); ++v) by_type[type_of[v]].push_back(v);

    std::vector<std::vector<VertexId>> classes;
    std::vector<std::string> names;
    for (auto& [type, members] : by_type) {
        classes.push_back(std::move(members));
        names.push_back(type);
    }
    LandmarkPartition partition =
        LandmarkPartition::build(graph.vertex_count(), std::move(classes), std::move(names));

    World w{std::move(graph), std::move(partition)};
    nlohmann::json coords = nlohmann::json::array();
    for (const Point& p : points) coords.push_back({p.first, p.second});
    w.meta = {{"kind", "building"}, {"seed", seed}, {"coords", std::move(coords)},
              {"achieved_r", w.achieved_r()}};
    return w;
}

World gen_random_landmark_graph(unsigned vertex_count, unsigned max_degree,
                                unsigned landmark_count, std::optional<unsigned> target_r,
                                std::uint64_t seed) {
    if (vertex_count < 2) fail("gen_random: need at least 2 vertices");
    if (max_degree < 2) fail("gen_random: max_degree must be >= 2");
    if (landmark_count == 0 || landmark_count > vertex_count)
        fail("gen_random: landmark_count out of range");

    Rng rng = Rng::substream(seed, "gen_random");

    // random spanning tree under the degree cap: attach each vertex to a
    // uniformly chosen earlier vertex that still has capacity
    std::vector<unsigned> degree(vertex_count, 0);
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (VertexId v = 1; v < vertex_count; ++v) {
        std::vector<VertexId> open;
        for (VertexId u = 0; u < v; ++u)
            if (degree[u] < max_degree) open.push_back(u);
        if (open.empty()) fail("gen_random: degree cap too tight for a spanning tree");
        VertexId u = open[rng.index(open.size())];
        pairs.emplace_back(u, v);
        ++degree[u];
        ++degree[v];
    }

    // extra edges, keeping the cap and simplicity
    std::set<std::pair<VertexId, VertexId>> have(pairs.begin(), pairs.end());
    unsigned extra_budget = vertex_count / 2;
    for (unsigned tries = 0; tries < vertex_count * 4 && extra_budget > 0; ++tries) {
        VertexId u = VertexId(rng.index(vertex_count));
        VertexId v = VertexId(rng.index(vertex_count));
        if (u == v) continue;
        auto key = std::minmax(u, v);
        if (have.count({key.first, key.second})) continue;
        if (degree[u] >= max_degree || degree[v] >= max_degree) continue;
        have.insert({key.first, key.second});
        pairs.emplace_back(key.first, key.second);
        ++degree[u];
        ++degree[v];
        --extra_budget;
    }

    // per-vertex integer labels in edge insertion order
    std::vector<unsigned> next_label(vertex_count, 0);
    std::vector<EdgeSpec> edges;
    for (auto [u, v] : pairs)
        edges.push_back({u, v, std::to_string(next_label[u]++), std::to_string(next_label[v]++)});

    LabeledGraph graph = LabeledGraph::build(vertex_count, edges, max_degree);

    if (target_r && *target_r > graph_diameter(graph))
        fail("gen_random: target r exceeds graph diameter");
    if (landmark_count == vertex_count && target_r && *target_r != 0)
        fail("gen_random: all vertices landmarks forces r = 0");

    LandmarkPlan plan = LandmarkPlan::with_count(landmark_count, target_r);
    std::vector<VertexId> landmarks = resolve_landmarks(graph, plan, rng);
    LandmarkPartition partition = plan_partition(vertex_count, landmarks);

    World w{std::move(graph), std::move(partition)};
    w.meta = {{"kind", "random"}, {"seed", seed}, {"max_degree", max_degree},
              {"achieved_r", w.achieved_r()}};
    return w;
}

GeneratorSpec GeneratorSpec::from_json(const nlohmann::json& j) {
    GeneratorSpec spec;
    std::string kind = j.value("kind", "");
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (kind == "grid") {
        spec.kind = Kind::Grid;
        for (const char* field : {"width", "height"})
            if (!j.contains(field)) fail(std::string("generator: missing field '") + field + "'");
        spec.width = j["width"].get<unsigned>();
        spec.height = j["height"].get<unsigned>();
    } else if (kind == "building") {
        spec.kind = Kind::Building;
        if (!j.contains("layout")) fail("generator: missing field 'layout'");
        spec.layout = CorridorLayout::from_json(j["layout"]);
    } else if (kind == "random") {
        spec.kind = Kind::Random;
        for (const char* field : {"vertices", "max_degree", "landmark_count"})
            if (!j.contains(field)) fail(std::string("generator: missing field '") + field + "'");
        spec.vertex_count = j["vertices"].get<unsigned>();
        spec.max_degree = j["max_degree"].get<unsigned>();
        spec.landmark_count = j["landmark_count"].get<unsigned>();
        if (j.contains("target_r") && !j["target_r"].is_null())
            spec.target_r = j["target_r"].get<unsigned>();
    } else if (kind == "load") {
        spec.kind = Kind::Load;
        if (!j.contains("path")) fail("generator: missing field 'path'");
        spec.path = j["path"].get<std::string>();
    } else {
        fail("generator: field 'kind' must be grid|building|random|load");
    }

    if (spec.kind == Kind::Grid || spec.kind == Kind::Random) {
        if (j.contains("landmarks")) {
            const auto& plan = j["landmarks"];
            if (plan.is_string() && plan.get<std::string>() == "all") {
                spec.plan = LandmarkPlan::all();
            } else if (plan.is_object() && plan.contains("explicit")) {
                spec.plan = LandmarkPlan::explicit_set(plan["explicit"].get<std::vector<VertexId>>());
            } else if (plan.is_object() && plan.contains("count")) {
                std::optional<unsigned> target;
                if (plan.contains("target_r") && !plan["target_r"].is_null())
                    target = plan["target_r"].get<unsigned>();
                spec.plan = LandmarkPlan::with_count(plan["count"].get<unsigned>(), target);
            } else {
                fail("generator: field 'landmarks' must be \"all\" or {explicit}|{count,target_r}");
            }
        } else if (spec.kind == Kind::Random) {
            spec.plan = LandmarkPlan::with_count(spec.landmark_count, spec.target_r);
        }
    }
    return spec;
}

nlohmann::json GeneratorSpec::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    switch (kind) {
        case Kind::Grid: {
            j["kind"] = "grid";
            j["width"] = width;
            j["height"] = height;
            switch (plan.kind) {
                case LandmarkPlan::Kind::All: j["landmarks"] = "all"; break;
                case LandmarkPlan::Kind::Explicit:
                    j["landmarks"] = {{"explicit", plan.explicit_ids}};
                    break;
                case LandmarkPlan::Kind::Count:
                    j["landmarks"] = {{"count", plan.count}};
                    if (plan.target_r) j["landmarks"]["target_r"] = *plan.target_r;
                    break;
            }
            break;
        }
        case Kind::Building: {
            j["kind"] = "building";
            nlohmann::json segs = nlohmann::json::array();
            for (const auto& s : layout.segments)
                segs.push_back({{"from", {s.x0, s.y0}}, {"to", {s.x1, s.y1}}});
            j["layout"] = {{"segments", std::move(segs)}};
            break;
        }
        case Kind::Random: {
            j["kind"] = "random";
            j["vertices"] = vertex_count;
            j["max_degree"] = max_degree;
            j["landmark_count"] = landmark_count;
            if (target_r) j["target_r"] = *target_r;
            break;
        }
        case Kind::Load: {
            j["kind"] = "load";
            j["path"] = path;
            break;
        }
    }
    return j;
}

World generate_world(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::Grid:
            return gen_grid(spec.width, spec.height, spec.plan, spec.seed);
        case GeneratorSpec::Kind::Building:
            return gen_building(spec.layout, spec.seed);
        case GeneratorSpec::Kind::Random:
            return gen_random_landmark_graph(spec.vertex_count, spec.max_degree,
                                             spec.landmark_count, spec.target_r, spec.seed);
        case GeneratorSpec::Kind::Load: {
            std::ifstream in(spec.path);
            if (!in) fail("generator: cannot open world file '" + spec.path + "'");
            std::ostringstream buf;
            buf << in.rdbuf();
            return world_from_json(buf.str());
        }
    }
    fail("generator: unknown kind");
}

} // namespace landmap
