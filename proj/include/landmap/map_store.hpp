#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "landmap/graph.hpp"

namespace landmap {

// A learned route: a direction sequence claimed to lead between two
// landmarks. Stored directed; the reverse direction has its own labels.
struct Route {
    std::string from;
    std::string to;
    std::vector<std::string> labels;

    std::size_t length() const { return labels.size(); }
    friend bool operator==(const Route&, const Route&) = default;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::uint64_t steps_identify = 0;
    std::uint64_t steps_select = 0;
    std::uint64_t steps_filter = 0;

    std::uint64_t total() const { return steps_identify + steps_select + steps_filter; }
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

class LearnedMap {
public:
    LearnedMap() = default;
    LearnedMap(std::vector<std::string> landmarks, std::vector<Route> routes,
               nlohmann::json params_used, Provenance provenance);

    const std::vector<std::string>& landmarks() const { return landmarks_; }
    // sorted by length then labels; no duplicate label sequences per pair
    const std::vector<Route>& routes_between(const std::string& from, const std::string& to) const;
    std::vector<Route> all_routes() const;
    const nlohmann::json& params_used() const { return params_used_; }
    const Provenance& provenance() const { return provenance_; }
    bool has_landmark(const std::string& name) const;

    friend bool operator==(const LearnedMap& a, const LearnedMap& b);

private:
    std::vector<std::string> landmarks_; // sorted
    std::map<std::pair<std::string, std::string>, std::vector<Route>> routes_;
    nlohmann::json params_used_;
    Provenance provenance_;
};

struct QueryAnswer {
    std::vector<std::string> waypoints; // landmark names, begins with u, ends with v
    std::vector<std::string> labels;    // concatenated route directions
    std::size_t length = 0;
};

// Shortest composition of stored routes between two known landmarks; nothing
// when the route graph does not connect them. Throws on unknown landmarks.
std::optional<QueryAnswer> global_path_query(const LearnedMap& map, const std::string& u,
                                             const std::string& v);

// Answered-length / true-shortest-length; nothing when u == v.
std::optional<double> stretch_ratio(const LearnedMap& map, const World& world,
                                    const std::string& u, const std::string& v);

// c/(c-2) for the exploration stretch parameter c > 2.
double stretch_bound(int c);

std::string serialize_map(const LearnedMap& map);
LearnedMap deserialize_map(const std::string& text);
std::string map_to_dot(const LearnedMap& map);

} // namespace landmap
