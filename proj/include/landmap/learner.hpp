#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landmap/map_store.hpp"
#include "landmap/world.hpp"

namespace landmap {

// Everything the learner is allowed to know up front: failure budgets, the
// movement/sensing accuracies, the degree bound, the landmark distribution
// parameter, and size bounds on the world.
struct LearnParams {
    double delta_g = 0.1;  // global failure budget
    int c = 4;             // stretch parameter, integer > 2
    unsigned r = 0;        // landmark distribution parameter
    unsigned d = 1;        // known maximum degree
    double alpha = 1.0;
    double gamma = 1.0;
    unsigned m = 1;        // longest answer length the map must support
    bool reverse_certainty = false;
    std::optional<unsigned> exploration_length; // defaults to r (1 when r = 0)
    unsigned vertex_bound = 1;
    unsigned edge_bound = 1;
    std::uint64_t seed = 0;

    void validate() const;

    // local budget per landmark and its three-way phase split
    double delta_l() const { return delta_g / double(m); }
    double delta_i() const { return delta_l() / 3.0; }
    double delta_s() const { return delta_l() / 3.0; }
    double delta_f() const { return delta_l() / 3.0; }

    unsigned exploration() const {
        return exploration_length ? *exploration_length : (r == 0 ? 1 : r);
    }

    nlohmann::json to_json() const;
    static LearnParams from_json(const nlohmann::json& j);
};

// A recorded direction sequence between two landmark sightings, pending
// verification: out labels are what the robot attempted, classes are what it
// saw along the way, in labels (reverse certainty only) are the certain
// entry labels of the edges actually traversed.
struct CandidatePath {
    int start_class = -1;
    int end_class = -1;
    std::vector<std::string> out_labels;
    std::vector<std::string> in_labels;  // empty unless reverse certainty
    std::vector<int> observed_classes;   // intermediate classes, size k-1

    std::size_t length() const { return out_labels.size(); }
    friend bool operator==(const CandidatePath&, const CandidatePath&) = default;
};

// --- phase sizing -----------------------------------------------------------

// Random-walk length that covers the world in every one of
// ceil(log2(1/delta_i)) segments of 2*E*(V-1) steps with probability
// >= 1 - delta_i overall.
std::uint64_t identification_walk_length(unsigned edge_bound, unsigned vertex_bound,
                                         double delta_i);

// Least n with [1 - [1 - (alpha/d)^r]^n]^(d^r) >= 1 - delta_s; 0 when r = 0.
long long num_selection_attempts(double alpha, unsigned d, unsigned r, double delta_s);
bool selection_inequality_holds(double alpha, unsigned d, unsigned r, double delta_s,
                                long long n);

// ceil(1 / (delta_f_local * (2*gamma - 1)^2)) traversal-and-guess experiments.
long long num_filter_traversals(double gamma, double delta_f_local);

// Experiment count for the reverse-certainty filter: Chebyshev sizing against
// the hit-rate separation alpha^k - alpha^(k-1)*(1-alpha).
long long num_reverse_experiments(double alpha, unsigned k, double delta_f_local);

// --- the three phases -------------------------------------------------------

// Random walk; returns the sorted class ids of every landmark observed.
std::vector<int> identify_landmarks(Sim& world, const LearnParams& params);

// Coin-flipping exploration walks from a landmark; every landmark sighting
// records the attempted prefix as a candidate. Duplicates merged.
std::vector<CandidatePath> select_candidates(Sim& world, int start_class,
                                             const LearnParams& params);

struct FilterOutcome {
    long long positives = 0;
    long long trials = 0;
    bool accepted = false;
};

// Majority vote over n traversal-and-guess experiments; a positive answer is
// a completed traversal that ended at the recorded landmark with a positive
// guess. Acceptance needs strictly more than n/2 positives.
FilterOutcome filter_candidate(Sim& world, const CandidatePath& candidate, long long n);
std::vector<CandidatePath> filter_candidates(Sim& world,
                                             const std::vector<CandidatePath>& candidates,
                                             const LearnParams& params);

struct ReverseFilterOutcome {
    long long hits = 0;
    long long trials = 0;
    double threshold = 0.0;
    bool accepted = false;
};

// Retraces the certain return path n times and counts experiments whose
// entry labels spell the recorded out sequence backwards; accepts above the
// midpoint of the two expected hit rates.
ReverseFilterOutcome reverse_filter_experiment(Sim& world, const CandidatePath& candidate,
                                               long long n, double alpha);
bool filter_with_reverse_certainty(Sim& world, const CandidatePath& candidate, long long n,
                                   double alpha);

// --- composition ------------------------------------------------------------

struct LocalResult {
    int landmark_class = -1;
    std::vector<CandidatePath> candidates;
    std::vector<CandidatePath> accepted;
    std::uint64_t steps_select = 0;
    std::uint64_t steps_filter = 0;
};

LocalResult learn_local(Sim& world, int landmark_class, const LearnParams& params);

LearnedMap learn_global(Sim& world, const LearnParams& params);

} // namespace landmap
