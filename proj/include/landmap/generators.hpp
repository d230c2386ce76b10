#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landmap/graph.hpp"

namespace landmap {

// Which vertices become landmarks (singleton classes). Everything else goes
// into one indistinguishable class, except for building worlds which class
// junctions by type.
struct LandmarkPlan {
    enum class Kind { All, Explicit, Count };
    Kind kind = Kind::All;
    std::vector<VertexId> explicit_ids;   // Kind::Explicit
    unsigned count = 0;                   // Kind::Count
    std::optional<unsigned> target_r;     // Kind::Count: required achieved r

    static LandmarkPlan all() { return {}; }
    static LandmarkPlan explicit_set(std::vector<VertexId> ids);
    static LandmarkPlan with_count(unsigned count, std::optional<unsigned> target_r = std::nullopt);
};

// Axis-aligned corridor layout; junctions are induced where segments meet.
struct CorridorLayout {
    struct Segment {
        int x0, y0, x1, y1;
    };
    std::vector<Segment> segments;

    static CorridorLayout from_json(const nlohmann::json& j);
};

struct GeneratorSpec {
    enum class Kind { Grid, Building, Random, Load };
    Kind kind = Kind::Grid;
    // grid
    unsigned width = 0, height = 0;
    LandmarkPlan plan;
    // building
    CorridorLayout layout;
    // random
    unsigned vertex_count = 0, max_degree = 0, landmark_count = 0;
    std::optional<unsigned> target_r;
    // load
    std::string path;

    std::uint64_t seed = 0;

    static GeneratorSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

World gen_grid(unsigned width, unsigned height, const LandmarkPlan& plan, std::uint64_t seed);
World gen_building(const CorridorLayout& layout, std::uint64_t seed);
World gen_random_landmark_graph(unsigned vertex_count, unsigned max_degree,
                                unsigned landmark_count, std::optional<unsigned> target_r,
                                std::uint64_t seed);

// Dispatch on the spec; Kind::Load reads a world file from spec.path.
World generate_world(const GeneratorSpec& spec);

} // namespace landmap
