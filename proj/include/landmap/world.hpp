#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landmap/graph.hpp"
#include "landmap/rng.hpp"

namespace landmap {

// Probabilistic movement: the intended edge is traversed with probability
// alpha; the remaining mass is spread over the other incident edges,
// uniformly unless a custom spread is installed. At degree-1 vertices the
// intended move always succeeds.
struct MovementModel {
    double alpha = 1.0;
    // Optional override: full per-arc distribution for (vertex, intended arc).
    // Must sum to 1 with probability >= alpha on the intended arc.
    std::function<std::vector<double>(const LabeledGraph&, VertexId, std::size_t)> custom_spread;

    void validate() const;
    std::vector<double> arc_distribution(const LabeledGraph& g, VertexId v,
                                         std::size_t intended_arc) const;
};

struct SensorSuite {
    double gamma = 1.0;            // traversal-guess accuracy, > 1/2
    bool reverse_certainty = false; // entry labels observed on arrival

    void validate() const;
};

struct TraceEvent {
    std::uint64_t step;
    std::string intended;
    std::string traversed_label; // ground truth: label at the departure vertex
    std::string arrived_class;
    bool landmark;
    std::optional<std::string> entry_label;
};

struct RobotState {
    VertexId position = 0;
    Rng rng;
    std::uint64_t step_count = 0;
    bool trace_enabled = false;
    std::vector<TraceEvent> trace;

    RobotState(VertexId start, Rng stream) : position(start), rng(std::move(stream)) {}
};

// What the robot is allowed to see after a move.
struct Observation {
    int arrived_class = -1;
    bool is_landmark = false;
    std::optional<std::string> entry_label; // present iff reverse certainty
};

struct StepRecord {
    std::string intended;
    bool executed = false;
    std::string traversed_label; // ground truth
    VertexId arrived = 0;        // ground truth
    Observation observation;
};

struct TraversalRecord {
    std::vector<std::string> attempted;
    std::vector<std::string> actually_traversed; // ground truth labels taken
    std::vector<StepRecord> steps;
    bool completed = false;
    VertexId end_vertex = 0;
};

int sense_class(const RobotState& state, const LandmarkPartition& partition);
bool is_landmark(const RobotState& state, const LandmarkPartition& partition);

Observation attempt_move(const LabeledGraph& graph, const LandmarkPartition& partition,
                         const MovementModel& model, const SensorSuite& sensors,
                         RobotState& state, const std::string& intended);

// gamma-accurate binary judgment of whether the attempted labels were the
// labels actually traversed; symmetric error on both answers.
bool guess_traversal(RobotState& state, const SensorSuite& sensors,
                     std::span<const std::string> attempted,
                     std::span<const std::string> actually_traversed);

// Runs the labels in order; a step whose label is absent at the robot's
// actual position is recorded as unexecuted and aborts the sequence.
TraversalRecord run_instruction_sequence(const LabeledGraph& graph,
                                         const LandmarkPartition& partition,
                                         const MovementModel& model, const SensorSuite& sensors,
                                         RobotState& state, std::span<const std::string> labels);

std::string trace_to_ndjson(const RobotState& state);

// The learner's interface to the world: sensing, moving, and the traversal
// guess. Ground-truth accessors exist for evaluation harnesses and tests;
// learner code only uses the robot-visible surface.
class Sim {
public:
    Sim(const World& world, MovementModel model, SensorSuite sensors, std::uint64_t seed,
        std::string stream_name, VertexId start = 0);

    // robot-visible
    int class_here() const { return sense_class(robot_, world_->partition); }
    const std::string& class_name(int c) const { return world_->partition.class_names.at(c); }
    bool landmark_here() const { return is_landmark(robot_, world_->partition); }
    const std::vector<LabeledGraph::Arc>& arcs_here() const {
        return world_->graph.arcs(robot_.position);
    }
    Observation attempt(const std::string& intended);
    // Runs a sequence and keeps it as "last traversal" for guess_last().
    struct SequenceOutcome {
        bool completed = false;
        int end_class = -1;
        bool end_landmark = false;
        std::vector<Observation> observations;
    };
    SequenceOutcome run_sequence(std::span<const std::string> labels);
    bool guess_last(); // precondition: last run_sequence completed
    // Random walk until the current class equals `target_class`. The budget
    // is a bug net; connected worlds hit any class long before it.
    void walk_until_class(int target_class, std::uint64_t step_budget = 1'000'000'000);
    std::uint64_t steps() const { return robot_.step_count; }
    int known_max_degree() const { return static_cast<int>(world_->graph.max_degree()); }

    // evaluation-only ground truth
    const World& ground_truth() const { return *world_; }
    const TraversalRecord& last_traversal() const { return last_; }
    RobotState& robot() { return robot_; }
    const MovementModel& movement() const { return model_; }
    const SensorSuite& sensors() const { return sensors_; }

private:
    const World* world_;
    MovementModel model_;
    SensorSuite sensors_;
    RobotState robot_;
    TraversalRecord last_;
};

} // namespace landmap
