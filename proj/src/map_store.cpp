#include "landmap/map_store.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace landmap {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

bool route_order(const Route& a, const Route& b) {
    return std::tie(a.from, a.to) != std::tie(b.from, b.to)
               ? std::tie(a.from, a.to) < std::tie(b.from, b.to)
               : (a.length() != b.length() ? a.length() < b.length() : a.labels < b.labels);
}

} // namespace

LearnedMap::LearnedMap(std::vector<std::string> landmarks, std::vector<Route> routes,
                       nlohmann::json params_used, Provenance provenance)
    : params_used_(std::move(params_used)), provenance_(provenance) {
    std::sort(landmarks.begin(), landmarks.end());
    landmarks.erase(std::unique(landmarks.begin(), landmarks.end()), landmarks.end());
    landmarks_ = std::move(landmarks);

    std::sort(routes.begin(), routes.end(), route_order);
    routes.erase(std::unique(routes.begin(), routes.end()), routes.end());
    for (Route& r : routes) {
        if (!has_landmark(r.from) || !has_landmark(r.to))
            fail("map: route endpoint '" + r.from + "'->'" + r.to + "' not a landmark");
        if (r.labels.empty()) fail("map: empty route");
        routes_[{r.from, r.to}].push_back(std::move(r));
    }
}

const std::vector<Route>& LearnedMap::routes_between(const std::string& from,
                                                     const std::string& to) const {
    static const std::vector<Route> kNone;
    auto it = routes_.find({from, to});
    return it == routes_.end() ? kNone : it->second;
}

std::vector<Route> LearnedMap::all_routes() const {
    std::vector<Route> out;
    for (const auto& [key, list] : routes_) out.insert(out.end(), list.begin(), list.end());
    return out;
}

bool LearnedMap::has_landmark(const std::string& name) const {
    return std::binary_search(landmarks_.begin(), landmarks_.end(), name);
}

bool operator==(const LearnedMap& a, const LearnedMap& b) {
    return a.landmarks_ == b.landmarks_ && a.routes_ == b.routes_ &&
           a.params_used_ == b.params_used_ && a.provenance_ == b.provenance_;
}

std::optional<QueryAnswer> global_path_query(const LearnedMap& map, const std::string& u,
                                             const std::string& v) {
    if (!map.has_landmark(u)) fail("query: unknown landmark '" + u + "'");
    if (!map.has_landmark(v)) fail("query: unknown landmark '" + v + "'");
    if (u == v) return QueryAnswer{{u}, {}, 0};

    // Dijkstra over the landmark route graph, weight = route length. The
    // (distance, name) ordering makes tie-breaks deterministic.
    const std::size_t kInf = ~std::size_t(0);
    std::map<std::string, std::size_t> dist;
    std::map<std::string, std::string> prev;
    for (const std::string& l : map.landmarks()) dist[l] = kInf;
    dist[u] = 0;
    std::set<std::pair<std::size_t, std::string>> queue{{0, u}};
    while (!queue.empty()) {
        auto [d, at] = *queue.begin();
        queue.erase(queue.begin());
        if (at == v) break;
        for (const std::string& next : map.landmarks()) {
            const auto& routes = map.routes_between(at, next);
            if (routes.empty()) continue;
            std::size_t nd = d + routes.front().length(); // shortest stored route
            if (nd < dist[next]) {
                queue.erase({dist[next], next});
                dist[next] = nd;
                prev[next] = at;
                queue.insert({nd, next});
            }
        }
    }
    if (dist[v] == kInf) return std::nullopt;

    QueryAnswer answer;
    for (std::string at = v; ; at = prev[at]) {
        answer.waypoints.push_back(at);
        if (at == u) break;
    }
    std::reverse(answer.waypoints.begin(), answer.waypoints.end());
    for (std::size_t i = 0; i + 1 < answer.waypoints.size(); ++i) {
        const Route& r = map.routes_between(answer.waypoints[i], answer.waypoints[i + 1]).front();
        answer.labels.insert(answer.labels.end(), r.labels.begin(), r.labels.end());
    }
    answer.length = answer.labels.size();
    return answer;
}

std::optional<double> stretch_ratio(const LearnedMap& map, const World& world,
                                    const std::string& u, const std::string& v) {
    if (u == v) return std::nullopt;
    auto answer = global_path_query(map, u, v);
    if (!answer) return std::nullopt;
    auto from = world.partition.landmark_vertex(u);
    auto to = world.partition.landmark_vertex(v);
    if (!from || !to) fail("stretch_ratio: landmark not in world partition");
    std::size_t oracle = world.graph.oracle_shortest_path(*from, *to).size();
    return double(answer->length) / double(oracle);
}

double stretch_bound(int c) {
    if (c <= 2) fail("stretch_bound: c must be an integer > 2");
    return double(c) / double(c - 2);
}

std::string serialize_map(const LearnedMap& map) {
    nlohmann::json j;
    j["landmarks"] = map.landmarks();
    nlohmann::json routes = nlohmann::json::array();
    for (const Route& r : map.all_routes())
        routes.push_back({{"from", r.from}, {"to", r.to}, {"labels", r.labels},
                          {"length", r.length()}});
    j["routes"] = std::move(routes);
    j["params_used"] = map.params_used();
    j["provenance"] = {{"seed", map.provenance().seed},
                       {"steps_identify", map.provenance().steps_identify},
                       {"steps_select", map.provenance().steps_select},
                       {"steps_filter", map.provenance().steps_filter}};
    return j.dump(2) + "\n";
}

LearnedMap deserialize_map(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(std::string("map file: ") + e.what());
    }
    for (const char* field : {"landmarks", "routes", "params_used", "provenance"})
        if (!j.contains(field)) fail(std::string("map file: missing field '") + field + "'");

    std::vector<Route> routes;
    for (const auto& r : j["routes"]) {
        for (const char* field : {"from", "to", "labels"})
            if (!r.contains(field)) fail(std::string("map file: route missing field '") + field + "'");
        Route route{r["from"].get<std::string>(), r["to"].get<std::string>(),
                    r["labels"].get<std::vector<std::string>>()};
        if (r.contains("length") && r["length"].get<std::size_t>() != route.length())
            fail("map file: route length disagrees with labels");
        routes.push_back(std::move(route));
    }
    const auto& p = j["provenance"];
    Provenance prov{p.value("seed", std::uint64_t(0)), p.value("steps_identify", std::uint64_t(0)),
                    p.value("steps_select", std::uint64_t(0)),
                    p.value("steps_filter", std::uint64_t(0))};
    return LearnedMap(j["landmarks"].get<std::vector<std::string>>(), std::move(routes),
                      j["params_used"], prov);
}

std::string map_to_dot(const LearnedMap& map) {
    std::ostringstream os;
    os << "digraph routes {\n";
    for (const std::string& l : map.landmarks()) os << "  \"" << l << "\";\n";
    for (const Route& r : map.all_routes())
        os << "  \"" << r.from << "\" -> \"" << r.to << "\" [label=\"" << r.length() << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace landmap
