#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landmap/generators.hpp"
#include "landmap/learner.hpp"
#include "landmap/map_store.hpp"
#include "landmap/stats.hpp"

namespace landmap {

struct OutputsSpec {
    bool csv = true;
    bool map = true;
    bool dot = false;
    bool traces = false;
};

// Fully determines every byte of campaign output.
struct ExperimentConfig {
    GeneratorSpec generator;
    nlohmann::json learn = nlohmann::json::object(); // LearnParams fields; world-derived defaults
    unsigned trials = 0;
    std::uint64_t seed = 0;
    OutputsSpec outputs;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Fills r, d, m and the size bounds from the world unless the config pinned
// them explicitly.
LearnParams resolve_params(const nlohmann::json& learn_json, const World& world,
                           std::uint64_t seed);

struct QueryResult {
    std::string u;
    std::string v;
    bool answered = false;
    bool valid = false;                // oracle-checked deterministic replay
    std::optional<double> stretch;     // present iff valid
};

struct TrialReport {
    unsigned index = 0;
    std::vector<QueryResult> queries;
    std::uint64_t steps_identify = 0;
    std::uint64_t steps_select = 0;
    std::uint64_t steps_filter = 0;
    bool pass = false;

    std::size_t answered_count() const;
    std::size_t valid_count() const;
    double max_stretch() const; // NaN when no query is valid
};

struct CampaignReport {
    unsigned trials = 0;
    std::vector<TrialReport> reports;
    unsigned successes = 0;
    double success_fraction = 0.0;
    stats::Interval confidence;        // exact 95% binomial interval
    double target_rate = 0.0;          // 1 - delta_g
    long long fail_threshold = -1;     // successes at or below this fail
    bool passed = true;
    std::string first_map_json;        // learned map of trial 0
    std::string first_trace_ndjson;    // only when outputs.traces
    std::string world_json;
    std::string world_dot;
};

CampaignReport run_pac_campaign(const ExperimentConfig& config);
std::string campaign_csv(const CampaignReport& report);
std::string campaign_summary(const CampaignReport& report);

// --- bound verification ------------------------------------------------------

struct SuiteCheck {
    std::string name;
    double observed = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::vector<SuiteCheck> checks;
    bool all_pass() const;
    std::string text() const;
};

// Empirical verification of the selection and filtering experiment counts on
// seeded Monte Carlo worlds.
SuiteReport run_bound_suite(std::uint64_t seed, int repetitions = 500);

// Hit-rate separation of the reverse-certainty filter on a cycle world where
// the closed forms are exact.
SuiteReport run_separation_suite(double alpha, const std::vector<unsigned>& lengths,
                                 long long experiments, unsigned planted, std::uint64_t seed);

} // namespace landmap
