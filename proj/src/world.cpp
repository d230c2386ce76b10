#include "landmap/world.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace landmap {

void MovementModel::validate() const {
    if (!(alpha > 0.5) || !(alpha <= 1.0))
        throw std::invalid_argument("movement: alpha must be in (0.5, 1]");
}

void SensorSuite::validate() const {
    if (!(gamma > 0.5) || !(gamma <= 1.0))
        throw std::invalid_argument("sensors: gamma must be in (0.5, 1]");
}

std::vector<double> MovementModel::arc_distribution(const LabeledGraph& g, VertexId v,
                                                    std::size_t intended_arc) const {
    const std::size_t deg = g.arcs(v).size();
    if (custom_spread) {
        std::vector<double> probs = custom_spread(g, v, intended_arc);
        if (probs.size() != deg)
            throw std::invalid_argument("movement: custom spread arity mismatch");
        double sum = 0.0;
        for (double p : probs) sum += p;
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("movement: custom spread must sum to 1");
        if (probs[intended_arc] + 1e-12 < alpha)
            throw std::invalid_argument("movement: custom spread underweights intended edge");
        return probs;
    }
    std::vector<double> probs(deg, deg > 1 ? (1.0 - alpha) / double(deg - 1) : 0.0);
    probs[intended_arc] = deg > 1 ? alpha : 1.0;
    return probs;
}

int sense_class(const RobotState& state, const LandmarkPartition& partition) {
    return partition.class_of[state.position];
}

bool is_landmark(const RobotState& state, const LandmarkPartition& partition) {
    return partition.is_landmark(state.position);
}

Observation attempt_move(const LabeledGraph& graph, const LandmarkPartition& partition,
                         const MovementModel& model, const SensorSuite& sensors,
                         RobotState& state, const std::string& intended) {
    const auto& arcs = graph.arcs(state.position);
    std::size_t intended_arc = arcs.size();
    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (arcs[i].label == intended) {
            intended_arc = i;
            break;
        }
    if (intended_arc == arcs.size())
        throw std::invalid_argument("attempt_move: label '" + intended + "' not present at vertex " +
                                    std::to_string(state.position));

    std::size_t taken = intended_arc;
    if (arcs.size() > 1 && model.alpha < 1.0) {
        if (model.custom_spread) {
            taken = state.rng.discrete(model.arc_distribution(graph, state.position, intended_arc));
        } else if (!state.rng.bernoulli(model.alpha)) {
            // uniform over the other arcs
            std::size_t k = state.rng.index(arcs.size() - 1);
            taken = k < intended_arc ? k : k + 1;
        }
    }

    const LabeledGraph::Arc& arc = arcs[taken];
    state.position = arc.to;
    ++state.step_count;

    Observation obs;
    obs.arrived_class = partition.class_of[state.position];
    obs.is_landmark = partition.is_landmark(state.position);
    if (sensors.reverse_certainty) obs.entry_label = arc.reverse;

    if (state.trace_enabled) {
        state.trace.push_back({state.step_count, intended, arc.label,
                               partition.class_names[obs.arrived_class], obs.is_landmark,
                               obs.entry_label});
    }
    return obs;
}

bool guess_traversal(RobotState& state, const SensorSuite& sensors,
                     std::span<const std::string> attempted,
                     std::span<const std::string> actually_traversed) {
    bool truth = attempted.size() == actually_traversed.size() &&
                 std::equal(attempted.begin(), attempted.end(), actually_traversed.begin());
    return state.rng.bernoulli(sensors.gamma) ? truth : !truth;
}

namespace {

// No parallel edges, so (from, to) identifies the arc taken.
const LabeledGraph::Arc& arc_between(const LabeledGraph& graph, VertexId from, VertexId to) {
    for (const auto& a : graph.arcs(from))
        if (a.to == to) return a;
    throw std::logic_error("arc_between: vertices not adjacent");
}

} // namespace

TraversalRecord run_instruction_sequence(const LabeledGraph& graph,
                                         const LandmarkPartition& partition,
                                         const MovementModel& model, const SensorSuite& sensors,
                                         RobotState& state, std::span<const std::string> labels) {
    TraversalRecord rec;
    rec.attempted.assign(labels.begin(), labels.end());
    rec.completed = true;
    for (const std::string& l : labels) {
        StepRecord step;
        step.intended = l;
        if (!graph.neighbor(state.position, l)) {
            // unexecutable from the robot's actual position: abort
            rec.steps.push_back(std::move(step));
            rec.completed = false;
            break;
        }
        VertexId before = state.position;
        step.observation = attempt_move(graph, partition, model, sensors, state, l);
        step.executed = true;
        step.arrived = state.position;
        step.traversed_label = arc_between(graph, before, state.position).label;
        rec.actually_traversed.push_back(step.traversed_label);
        rec.steps.push_back(std::move(step));
    }
    rec.end_vertex = state.position;
    return rec;
}

std::string trace_to_ndjson(const RobotState& state) {
    std::ostringstream os;
    for (const TraceEvent& e : state.trace) {
        nlohmann::json j{{"step", e.step},
                         {"intended", e.intended},
                         {"traversed_label", e.traversed_label},
                         {"arrived_class", e.arrived_class},
                         {"landmark", e.landmark}};
        j["entry_label"] = e.entry_label ? nlohmann::json(*e.entry_label) : nlohmann::json();
        os << j.dump() << "\n";
    }
    return os.str();
}

Sim::Sim(const World& world, MovementModel model, SensorSuite sensors, std::uint64_t seed,
         std::string stream_name, VertexId start)
    : world_(&world),
      model_(std::move(model)),
      sensors_(sensors),
      robot_(start, Rng::substream(seed, stream_name)) {
    model_.validate();
    sensors_.validate();
    if (start >= world.graph.vertex_count())
        throw std::invalid_argument("sim: start vertex out of range");
}

Observation Sim::attempt(const std::string& intended) {
    return attempt_move(world_->graph, world_->partition, model_, sensors_, robot_, intended);
}

Sim::SequenceOutcome Sim::run_sequence(std::span<const std::string> labels) {
    // Tracks ground truth internally so guess_last() can answer; the outcome
    // handed back contains only robot-visible data.
    last_ = TraversalRecord{};
    last_.attempted.assign(labels.begin(), labels.end());
    last_.completed = true;

    SequenceOutcome out;
    for (const std::string& l : labels) {
        const auto& arcs = world_->graph.arcs(robot_.position);
        bool present = false;
        for (const auto& a : arcs)
            if (a.label == l) {
                present = true;
                break;
            }
        if (!present) {
            last_.completed = false;
            break;
        }
        VertexId before = robot_.position;
        Observation obs = attempt(l);
        last_.actually_traversed.push_back(arc_between(world_->graph, before, robot_.position).label);
        out.observations.push_back(obs);
    }
    last_.end_vertex = robot_.position;
    out.completed = last_.completed;
    out.end_class = class_here();
    out.end_landmark = landmark_here();
    return out;
}

bool Sim::guess_last() {
    if (!last_.completed)
        throw std::logic_error("guess_last: last traversal did not complete");
    return guess_traversal(robot_, sensors_, last_.attempted, last_.actually_traversed);
}

void Sim::walk_until_class(int target_class, std::uint64_t step_budget) {
    std::uint64_t used = 0;
    while (class_here() != target_class) {
        if (used++ >= step_budget)
            throw std::runtime_error("walk_until_class: step budget exhausted");
        const auto& arcs = arcs_here();
        attempt(arcs[robot_.rng.index(arcs.size())].label);
    }
}

} // namespace landmap
