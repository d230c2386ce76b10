#include "landmap/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace landmap {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (!j.contains("generator")) fail("experiment: missing field 'generator'");
    if (!j.contains("learn")) fail("experiment: missing field 'learn'");
    if (!j.contains("trials")) fail("experiment: missing field 'trials'");
    cfg.seed = j.value("seed", std::uint64_t(0));
    nlohmann::json gen = j["generator"];
    if (!gen.contains("seed")) gen["seed"] = cfg.seed;
    cfg.generator = GeneratorSpec::from_json(gen);
    cfg.learn = j["learn"];
    cfg.trials = j["trials"].get<unsigned>();
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        cfg.outputs.csv = o.value("csv", true);
        cfg.outputs.map = o.value("map", true);
        cfg.outputs.dot = o.value("dot", false);
        cfg.outputs.traces = o.value("traces", false);
    }
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"generator", generator.to_json()},
            {"learn", learn},
            {"trials", trials},
            {"seed", seed},
            {"outputs",
             {{"csv", outputs.csv},
              {"map", outputs.map},
              {"dot", outputs.dot},
              {"traces", outputs.traces}}}};
}

LearnParams resolve_params(const nlohmann::json& learn_json, const World& world,
                           std::uint64_t seed) {
    nlohmann::json j = learn_json;
    if (!j.contains("r")) j["r"] = world.achieved_r();
    if (!j.contains("d")) j["d"] = world.graph.max_degree();
    if (!j.contains("vertex_bound")) j["vertex_bound"] = world.graph.vertex_count();
    if (!j.contains("edge_bound")) j["edge_bound"] = world.graph.edge_count();
    if (!j.contains("m")) j["m"] = j["vertex_bound"];
    if (!j.contains("seed")) j["seed"] = seed;
    LearnParams params = LearnParams::from_json(j);
    params.validate();
    return params;
}

std::size_t TrialReport::answered_count() const {
    std::size_t n = 0;
    for (const auto& q : queries) n += q.answered;
    return n;
}

std::size_t TrialReport::valid_count() const {
    std::size_t n = 0;
    for (const auto& q : queries) n += q.valid;
    return n;
}

double TrialReport::max_stretch() const {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& q : queries)
        if (q.stretch && (!(best == best) || *q.stretch > best)) best = *q.stretch;
    return best;
}

CampaignReport run_pac_campaign(const ExperimentConfig& config) {
    // One world per campaign: the guarantee under test is over the learner's
    // randomness for a fixed graph.
    World world = generate_world(config.generator);
    LearnParams params = resolve_params(config.learn, world, config.seed);

    CampaignReport report;
    report.trials = config.trials;
    report.target_rate = 1.0 - params.delta_g;
    report.world_json = world_to_json(world);
    report.world_dot = world_to_dot(world);

    const std::vector<std::string> landmarks = world.partition.landmark_names();
    const double bound = stretch_bound(params.c);

    for (unsigned t = 0; t < config.trials; ++t) {
        Sim sim(world, MovementModel{params.alpha, {}},
                SensorSuite{params.gamma, params.reverse_certainty}, config.seed,
                "trial/" + std::to_string(t));
        if (config.outputs.traces && t == 0) sim.robot().trace_enabled = true;

        LearnedMap map = learn_global(sim, params);

        TrialReport trial;
        trial.index = t;
        trial.steps_identify = map.provenance().steps_identify;
        trial.steps_select = map.provenance().steps_select;
        trial.steps_filter = map.provenance().steps_filter;
        trial.pass = true;

        for (const std::string& u : landmarks)
            for (const std::string& v : landmarks) {
                if (u == v) continue;
                QueryResult q;
                q.u = u;
                q.v = v;
                std::optional<QueryAnswer> answer;
                if (map.has_landmark(u) && map.has_landmark(v))
                    answer = global_path_query(map, u, v);
                if (answer) {
                    q.answered = true;
                    VertexId from = *world.partition.landmark_vertex(u);
                    VertexId to = *world.partition.landmark_vertex(v);
                    auto replay = world.graph.replay(from, answer->labels);
                    q.valid = replay.completed && replay.end == to;
                    if (q.valid) {
                        std::size_t oracle = world.graph.bfs_distances(from)[to];
                        q.stretch = double(answer->length) / double(oracle);
                    }
                }
                trial.pass = trial.pass && q.valid && q.stretch && *q.stretch <= bound + 1e-9;
                trial.queries.push_back(std::move(q));
            }

        if (trial.pass) ++report.successes;
        if (t == 0) {
            report.first_map_json = serialize_map(map);
            if (config.outputs.traces) report.first_trace_ndjson = trace_to_ndjson(sim.robot());
        }
        report.reports.push_back(std::move(trial));
    }

    if (config.trials > 0) {
        report.success_fraction = double(report.successes) / double(config.trials);
        report.confidence = stats::clopper_pearson(report.successes, config.trials);
        report.fail_threshold =
            stats::lower_tail_threshold(config.trials, report.target_rate, 0.025);
        report.passed = static_cast<long long>(report.successes) > report.fail_threshold;
    }
    return report;
}

std::string campaign_csv(const CampaignReport& report) {
    std::string out =
        "trial,queries,answered,valid,max_stretch,steps_identify,steps_select,steps_filter,pass\n";
    for (const TrialReport& t : report.reports) {
        double ms = t.max_stretch();
        char buf[256];
        std::snprintf(buf, sizeof buf, "%u,%zu,%zu,%zu,%s,%llu,%llu,%llu,%d\n", t.index,
                      t.queries.size(), t.answered_count(), t.valid_count(),
                      ms == ms ? format_double(ms).c_str() : "nan",
                      static_cast<unsigned long long>(t.steps_identify),
                      static_cast<unsigned long long>(t.steps_select),
                      static_cast<unsigned long long>(t.steps_filter), t.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

std::string campaign_summary(const CampaignReport& report) {
    std::ostringstream os;
    os << "trials: " << report.trials << "\n";
    os << "successes: " << report.successes << " (" << format_double(report.success_fraction)
       << ")\n";
    os << "exact 95% CI: [" << format_double(report.confidence.lo) << ", "
       << format_double(report.confidence.hi) << "]\n";
    os << "target rate: " << format_double(report.target_rate) << ", fail at <= "
       << report.fail_threshold << " successes\n";
    os << (report.passed ? "ACCEPT" : "REJECT") << "\n";
    return os.str();
}

bool SuiteReport::all_pass() const {
    for (const SuiteCheck& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string SuiteReport::text() const {
    std::ostringstream os;
    for (const SuiteCheck& c : checks)
        os << (c.pass ? "PASS " : "FAIL ") << c.name << ": observed " << format_double(c.observed)
           << " vs bound " << format_double(c.bound) << (c.detail.empty() ? "" : " (" + c.detail + ")")
           << "\n";
    return os.str();
}

SuiteReport run_bound_suite(std::uint64_t seed, int repetitions) {
    SuiteReport report;

    // the displayed selection inequality, by direct substitution
    {
        long long n = num_selection_attempts(0.9, 4, 1, 0.1);
        bool at = selection_inequality_holds(0.9, 4, 1, 0.1, n);
        bool below = selection_inequality_holds(0.9, 4, 1, 0.1, n - 1);
        SuiteCheck check{"selection n=15 tight", double(n), 15.0, n == 15 && at && !below,
                         "holds(n) and not holds(n-1)"};
        report.checks.push_back(check);
    }

    World world = gen_grid(3, 3, LandmarkPlan::all(), seed);
    const int center_class = world.partition.class_of[4];

    // all four length-1 paths from the center recorded within n attempts
    {
        LearnParams params;
        params.delta_g = 0.3; // delta_s = 0.3 / (3 * m=1) = 0.1
        params.m = 1;
        params.r = 1;
        params.d = 4;
        params.alpha = 0.9;
        params.gamma = 0.9;
        params.vertex_bound = 9;
        params.edge_bound = 12;
        params.validate();

        int all_recorded = 0;
        for (int rep = 0; rep < repetitions; ++rep) {
            Sim sim(world, MovementModel{params.alpha, {}}, SensorSuite{params.gamma, false}, seed,
                    "bounds/select/" + std::to_string(rep), 4);
            auto candidates = select_candidates(sim, center_class, params);
            int found = 0;
            for (const auto& arc : world.graph.arcs(4)) {
                int want = world.partition.class_of[arc.to];
                for (const auto& c : candidates)
                    if (c.end_class == want && c.out_labels == std::vector<std::string>{arc.label}) {
                        ++found;
                        break;
                    }
            }
            if (found == 4) ++all_recorded;
        }
        double rate = double(all_recorded) / double(repetitions);
        double sigma = std::sqrt(0.9 * 0.1 / double(repetitions));
        report.checks.push_back({"selection all-paths-recorded rate", rate, 0.9 - 3 * sigma,
                                 rate >= 0.9 - 3 * sigma,
                                 "alpha=0.9 d=4 r=1 delta_s=0.1 n=15"});
    }

    // recording probability per attempt is exactly (1/d)^r when alpha = 1
    {
        const long long attempts = 20000;
        Sim sim(world, MovementModel{1.0, {}}, SensorSuite{0.9, false}, seed, "bounds/exact", 4);
        const std::string target = world.graph.arcs(4)[0].label;
        long long recorded = 0;
        for (long long i = 0; i < attempts; ++i) {
            sim.walk_until_class(center_class);
            const auto& arcs = sim.arcs_here();
            const std::string& dir = arcs[sim.robot().rng.index(arcs.size())].label;
            Observation obs = sim.attempt(dir);
            if (dir == target && obs.is_landmark) ++recorded;
        }
        double rate = double(recorded) / double(attempts);
        double sigma = std::sqrt(0.25 * 0.75 / double(attempts));
        report.checks.push_back({"recording rate at alpha=1", rate, 0.25,
                                 std::abs(rate - 0.25) <= 3 * sigma, "expect (1/d)^r = 1/4"});
    }

    // majority-vote filter accepts a true path at gamma = 0.75, n = 40
    {
        long long n = num_filter_traversals(0.75, 0.1);
        const auto& arc = world.graph.arcs(4)[0];
        CandidatePath true_path;
        true_path.start_class = center_class;
        true_path.end_class = world.partition.class_of[arc.to];
        true_path.out_labels = {arc.label};

        int accepted = 0;
        for (int rep = 0; rep < repetitions; ++rep) {
            Sim sim(world, MovementModel{1.0, {}}, SensorSuite{0.75, false}, seed,
                    "bounds/filter/" + std::to_string(rep), 4);
            if (filter_candidate(sim, true_path, n).accepted) ++accepted;
        }
        double rate = double(accepted) / double(repetitions);
        double sigma = std::sqrt(0.9 * 0.1 / double(repetitions));
        report.checks.push_back({"filter true-path accept rate", rate, 0.9 - 3 * sigma,
                                 n == 40 && rate >= 0.9 - 3 * sigma,
                                 "gamma=0.75 delta_f_local=0.1 n=40"});
    }

    return report;
}

SuiteReport run_separation_suite(double alpha, const std::vector<unsigned>& lengths,
                                 long long experiments, unsigned planted, std::uint64_t seed) {
    SuiteReport report;

    // consistently labeled cycle: every entry label reveals the move
    // direction, so hit rates equal the closed forms exactly
    const unsigned size = 12;
    std::vector<EdgeSpec> edges;
    for (unsigned i = 0; i < size; ++i)
        edges.push_back({i, (i + 1) % size, "cw", "ccw"});
    std::vector<std::vector<VertexId>> classes;
    std::vector<std::string> names;
    for (unsigned i = 0; i < size; ++i) {
        classes.push_back({i});
        names.push_back("L" + std::to_string(i));
    }
    World world{LabeledGraph::build(size, edges, 2),
                LandmarkPartition::build(size, classes, names)};

    auto plant = [&](unsigned k, bool real) {
        CandidatePath c;
        c.start_class = world.partition.class_of[0];
        c.end_class = world.partition.class_of[k];
        c.out_labels.assign(k, "cw");
        c.in_labels.assign(k, "ccw");
        for (unsigned j = 1; j < k; ++j) c.observed_classes.push_back(world.partition.class_of[j]);
        if (!real) c.out_labels[k / 2] = "ccw"; // single recording error
        // oracle check of the plant
        auto replay = world.graph.replay(0, c.out_labels);
        bool is_path = replay.completed && replay.end == k;
        if (is_path != real) throw std::logic_error("separation: bad plant");
        return c;
    };

    for (unsigned k : lengths) {
        double p_real = std::pow(alpha, double(k));
        double p_false = std::pow(alpha, double(k - 1)) * (1.0 - alpha);

        Sim sim_r(world, MovementModel{alpha, {}}, SensorSuite{0.9, true}, seed,
                  "separation/real/" + std::to_string(k));
        auto real = reverse_filter_experiment(sim_r, plant(k, true), experiments, alpha);

        Sim sim_f(world, MovementModel{alpha, {}}, SensorSuite{0.9, true}, seed,
                  "separation/false/" + std::to_string(k));
        auto fake = reverse_filter_experiment(sim_f, plant(k, false), experiments, alpha);

        double sig_r = std::sqrt(double(experiments) * p_real * (1 - p_real));
        double sig_f = std::sqrt(double(experiments) * p_false * (1 - p_false));
        report.checks.push_back({"real hits k=" + std::to_string(k), double(real.hits),
                                 p_real * double(experiments),
                                 std::abs(double(real.hits) - p_real * double(experiments)) <=
                                     3 * sig_r,
                                 "within 3 sigma; accepted=" + std::to_string(real.accepted)});
        report.checks.push_back({"false hits k=" + std::to_string(k), double(fake.hits),
                                 p_false * double(experiments) + 3 * sig_f,
                                 double(fake.hits) <= p_false * double(experiments) + 3 * sig_f,
                                 "at most closed form + 3 sigma; accepted=" +
                                     std::to_string(fake.accepted)});
    }

    // midpoint-threshold classification over planted candidates
    if (planted > 0 && !lengths.empty()) {
        unsigned k = lengths.back();
        unsigned correct = 0;
        for (unsigned i = 0; i < planted; ++i) {
            bool real = i % 2 == 0;
            Sim sim(world, MovementModel{alpha, {}}, SensorSuite{0.9, true}, seed,
                    "separation/classify/" + std::to_string(i));
            bool accepted = filter_with_reverse_certainty(sim, plant(k, real), experiments, alpha);
            if (accepted == real) ++correct;
        }
        double accuracy = double(correct) / double(planted);
        report.checks.push_back({"midpoint classification accuracy", accuracy, 1.0,
                                 accuracy == 1.0,
                                 std::to_string(planted) + " planted candidates, k=" +
                                     std::to_string(k)});
    }

    return report;
}

} // namespace landmap
