#include "landmap/learner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace landmap {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw std::invalid_argument(what); }

} // namespace

void LearnParams::validate() const {
    if (!(delta_g > 0.0 && delta_g < 1.0)) config_error("learn: delta_g must be in (0, 1)");
    if (c <= 2) config_error("learn: c must be an integer > 2");
    if (!(alpha > 0.5 && alpha <= 1.0)) config_error("learn: alpha must be in (0.5, 1]");
    if (!(gamma > 0.5 && gamma <= 1.0)) config_error("learn: gamma must be in (0.5, 1]");
    if (d < 1) config_error("learn: d must be >= 1");
    if (m < 1) config_error("learn: m must be >= 1");
    if (vertex_bound < 2) config_error("learn: vertex_bound must be >= 2");
    if (edge_bound < 1) config_error("learn: edge_bound must be >= 1");
    if (exploration_length && *exploration_length < 1)
        config_error("learn: exploration_length must be >= 1");
}

nlohmann::json LearnParams::to_json() const {
    nlohmann::json j{{"delta_g", delta_g}, {"c", c},         {"r", r},
                     {"d", d},             {"alpha", alpha}, {"gamma", gamma},
                     {"m", m},             {"seed", seed},   {"reverse_certainty", reverse_certainty},
                     {"vertex_bound", vertex_bound},         {"edge_bound", edge_bound}};
    if (exploration_length) j["exploration_length"] = *exploration_length;
    return j;
}

LearnParams LearnParams::from_json(const nlohmann::json& j) {
    LearnParams p;
    if (!j.contains("delta_g")) config_error("learn: missing field 'delta_g'");
    p.delta_g = j["delta_g"].get<double>();
    p.c = j.value("c", 4);
    p.r = j.value("r", 0u);
    p.d = j.value("d", 1u);
    if (!j.contains("alpha")) config_error("learn: missing field 'alpha'");
    p.alpha = j["alpha"].get<double>();
    if (!j.contains("gamma")) config_error("learn: missing field 'gamma'");
    p.gamma = j["gamma"].get<double>();
    p.m = j.value("m", 1u);
    p.seed = j.value("seed", std::uint64_t(0));
    p.reverse_certainty = j.value("reverse_certainty", false);
    if (j.contains("exploration_length") && !j["exploration_length"].is_null())
        p.exploration_length = j["exploration_length"].get<unsigned>();
    p.vertex_bound = j.value("vertex_bound", 2u);
    p.edge_bound = j.value("edge_bound", 1u);
    return p;
}

std::uint64_t identification_walk_length(unsigned edge_bound, unsigned vertex_bound,
                                         double delta_i) {
    if (vertex_bound < 2 || edge_bound < 1)
        config_error("identification_walk_length: bounds out of range");
    if (!(delta_i > 0.0 && delta_i < 1.0))
        config_error("identification_walk_length: delta_i must be in (0, 1)");
    std::uint64_t segment = 2ULL * edge_bound * (vertex_bound - 1);
    auto segments = static_cast<std::uint64_t>(std::ceil(std::log2(1.0 / delta_i) - 1e-12));
    return segment * std::max<std::uint64_t>(segments, 1);
}

bool selection_inequality_holds(double alpha, unsigned d, unsigned r, double delta_s,
                                long long n) {
    if (r == 0) return true; // no paths of length 0 to record
    if (n <= 0) return false;
    double q = std::pow(alpha / double(d), double(r)); // P(attempt and traverse a given path)
    if (q >= 1.0) return true;
    double miss_all = std::pow(1.0 - q, double(n));
    double recorded = 1.0 - miss_all;
    if (recorded <= 0.0) return false;
    double paths = std::pow(double(d), double(r));
    return paths * std::log(recorded) >= std::log1p(-delta_s);
}

long long num_selection_attempts(double alpha, unsigned d, unsigned r, double delta_s) {
    if (!(alpha > 0.5 && alpha <= 1.0)) config_error("selection: alpha must be in (0.5, 1]");
    if (d < 1) config_error("selection: d must be >= 1");
    if (!(delta_s > 0.0 && delta_s < 1.0)) config_error("selection: delta_s must be in (0, 1)");
    if (r == 0) return 0;

    double q = std::pow(alpha / double(d), double(r));
    long long n = 1;
    if (q < 1.0) {
        double paths = std::pow(double(d), double(r));
        double per_path = std::pow(1.0 - delta_s, 1.0 / paths);
        n = static_cast<long long>(std::ceil(std::log(1.0 - per_path) / std::log(1.0 - q) - 1e-9));
        if (n < 1) n = 1;
    }
    // pin to the exact least solution regardless of rounding
    while (!selection_inequality_holds(alpha, d, r, delta_s, n)) ++n;
    while (n > 1 && selection_inequality_holds(alpha, d, r, delta_s, n - 1)) --n;
    return n;
}

long long num_filter_traversals(double gamma, double delta_f_local) {
    if (!(gamma > 0.5 && gamma <= 1.0)) config_error("filter: gamma must be in (0.5, 1]");
    if (!(delta_f_local > 0.0 && delta_f_local < 1.0))
        config_error("filter: delta_f_local must be in (0, 1)");
    double margin = 2.0 * gamma - 1.0;
    return static_cast<long long>(std::ceil(1.0 / (delta_f_local * margin * margin) - 1e-9));
}

long long num_reverse_experiments(double alpha, unsigned k, double delta_f_local) {
    if (!(alpha > 0.5 && alpha <= 1.0)) config_error("reverse filter: alpha must be in (0.5, 1]");
    if (k < 1) config_error("reverse filter: path length must be >= 1");
    if (!(delta_f_local > 0.0 && delta_f_local < 1.0))
        config_error("reverse filter: delta_f_local must be in (0, 1)");
    double gap = std::pow(alpha, double(k - 1)) * (2.0 * alpha - 1.0);
    return static_cast<long long>(std::ceil(1.0 / (delta_f_local * gap * gap) - 1e-9));
}

std::vector<int> identify_landmarks(Sim& world, const LearnParams& params) {
    std::uint64_t length =
        identification_walk_length(params.edge_bound, params.vertex_bound, params.delta_i());
    std::vector<int> found;
    auto note = [&](int cls, bool landmark) {
        if (landmark) found.push_back(cls);
    };
    note(world.class_here(), world.landmark_here());
    for (std::uint64_t s = 0; s < length; ++s) {
        const auto& arcs = world.arcs_here();
        Observation obs = world.attempt(arcs[world.robot().rng.index(arcs.size())].label);
        note(obs.arrived_class, obs.is_landmark);
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

std::vector<CandidatePath> select_candidates(Sim& world, int start_class,
                                             const LearnParams& params) {
    const unsigned length = params.exploration();
    const long long attempts =
        num_selection_attempts(params.alpha, params.d, length, params.delta_s());

    std::map<std::pair<int, std::vector<std::string>>, CandidatePath> merged;
    std::vector<std::string> out;
    std::vector<std::string> in;
    std::vector<int> classes;

    for (long long a = 0; a < attempts; ++a) {
        world.walk_until_class(start_class);
        out.clear();
        in.clear();
        classes.clear();
        for (unsigned step = 0; step < length; ++step) {
            const auto& arcs = world.arcs_here();
            const std::string& direction = arcs[world.robot().rng.index(arcs.size())].label;
            out.push_back(direction);
            Observation obs = world.attempt(direction);
            if (obs.entry_label) in.push_back(*obs.entry_label);
            if (obs.is_landmark && obs.arrived_class != start_class) {
                CandidatePath c;
                c.start_class = start_class;
                c.end_class = obs.arrived_class;
                c.out_labels = out;
                c.in_labels = in;
                c.observed_classes = classes; // intermediate sightings only
                merged.emplace(std::make_pair(c.end_class, c.out_labels), std::move(c));
            }
            classes.push_back(obs.arrived_class);
        }
    }

    std::vector<CandidatePath> result;
    result.reserve(merged.size());
    for (auto& [key, c] : merged) result.push_back(std::move(c));
    return result;
}

FilterOutcome filter_candidate(Sim& world, const CandidatePath& candidate, long long n) {
    FilterOutcome out;
    out.trials = n;
    for (long long i = 0; i < n; ++i) {
        world.walk_until_class(candidate.start_class);
        Sim::SequenceOutcome run = world.run_sequence(candidate.out_labels);
        // aborted runs and runs ending at the wrong class count as negatives
        if (run.completed && run.end_class == candidate.end_class && world.guess_last())
            ++out.positives;
    }
    out.accepted = 2 * out.positives > n; // strictly more than n/2
    return out;
}

std::vector<CandidatePath> filter_candidates(Sim& world,
                                             const std::vector<CandidatePath>& candidates,
                                             const LearnParams& params) {
    if (candidates.empty()) return {};
    double delta_f_local = params.delta_f() / double(candidates.size());
    std::vector<CandidatePath> accepted;
    for (const CandidatePath& c : candidates) {
        bool keep;
        if (params.reverse_certainty) {
            long long n =
                num_reverse_experiments(params.alpha, unsigned(c.length()), delta_f_local);
            keep = filter_with_reverse_certainty(world, c, n, params.alpha);
        } else {
            long long n = num_filter_traversals(params.gamma, delta_f_local);
            keep = filter_candidate(world, c, n).accepted;
        }
        if (keep) accepted.push_back(c);
    }
    return accepted;
}

ReverseFilterOutcome reverse_filter_experiment(Sim& world, const CandidatePath& candidate,
                                               long long n, double alpha) {
    if (candidate.in_labels.size() != candidate.length())
        throw std::invalid_argument("reverse filter: candidate has no certain return path");
    const std::size_t k = candidate.length();

    std::vector<std::string> back(candidate.in_labels.rbegin(), candidate.in_labels.rend());

    ReverseFilterOutcome out;
    out.trials = n;
    out.threshold = double(n) *
                    (std::pow(alpha, double(k)) + std::pow(alpha, double(k - 1)) * (1.0 - alpha)) /
                    2.0;

    for (long long i = 0; i < n; ++i) {
        world.walk_until_class(candidate.end_class);
        Sim::SequenceOutcome run = world.run_sequence(back);
        if (!run.completed) continue;
        // hit: entry labels spell the out sequence in reverse
        bool hit = true;
        for (std::size_t t = 0; t < k && hit; ++t) {
            const auto& entry = run.observations[t].entry_label;
            hit = entry && *entry == candidate.out_labels[k - 1 - t];
        }
        if (hit) ++out.hits;
    }
    out.accepted = double(out.hits) > out.threshold;
    return out;
}

bool filter_with_reverse_certainty(Sim& world, const CandidatePath& candidate, long long n,
                                   double alpha) {
    return reverse_filter_experiment(world, candidate, n, alpha).accepted;
}

LocalResult learn_local(Sim& world, int landmark_class, const LearnParams& params) {
    LocalResult result;
    result.landmark_class = landmark_class;

    std::uint64_t mark = world.steps();
    result.candidates = select_candidates(world, landmark_class, params);
    result.steps_select = world.steps() - mark;

    mark = world.steps();
    result.accepted = filter_candidates(world, result.candidates, params);
    result.steps_filter = world.steps() - mark;
    return result;
}

LearnedMap learn_global(Sim& world, const LearnParams& params) {
    params.validate();

    Provenance prov;
    prov.seed = params.seed;

    std::uint64_t mark = world.steps();
    std::vector<int> landmark_classes = identify_landmarks(world, params);
    prov.steps_identify = world.steps() - mark;

    std::vector<std::string> landmark_names;
    std::vector<Route> routes;
    for (int cls : landmark_classes) {
        world.walk_until_class(cls);
        LocalResult local = learn_local(world, cls, params);
        prov.steps_select += local.steps_select;
        prov.steps_filter += local.steps_filter;
        landmark_names.push_back(world.class_name(cls));
        for (const CandidatePath& c : local.accepted)
            routes.push_back({world.class_name(c.start_class), world.class_name(c.end_class),
                              c.out_labels});
    }
    return LearnedMap(std::move(landmark_names), std::move(routes), params.to_json(), prov);
}

} // namespace landmap
