#pragma once

#include "fppcm/weights.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace fppcm {

// Integer offspring/root law used by the branching process.
struct OffspringDist {
    std::string name;
    std::function<std::uint64_t(std::mt19937_64&)> sample;
};

OffspringDist constant_offspring(std::uint64_t k);

// Root degree law: P(D >= x) = min(1, (x/2)^{-(tau-1)}), floored at 2.
OffspringDist root_degree_dist(double tau);

// Size-biased-style offspring with tail exponent tau-2 and a logarithmic
// suppression: P(B >= x) = min(1, x^{-(tau-2)} e^{-Cstar (log x)^gamma}),
// floored at 1 so the process never dies. cap > 0 truncates the draw at
// cap, trading the doubly-exponential growth for a geometric one that
// fits the node budget.
OffspringDist pareto_offspring(double tau, double Cstar, double gamma,
                               std::uint64_t cap = 0);

struct BPRun {
    std::vector<std::uint64_t> generation_sizes; // Z_0..Z_k (completed only)
    std::vector<double> y_norm;                  // Y_k = (tau-2)^k log Z_k
    std::vector<double> gen_min_weights;  // [i]: min weight, gen i -> i+1
    std::vector<double> first_passage_front; // [k]: min arrival in gen k
    std::vector<std::uint64_t> gen_max_offspring; // [i]: max child count in gen i
    bool truncated = false;
    double tau = 2.5;

    std::size_t depth() const { return generation_sizes.size() - 1; }
};

// Generation-synchronous simulation: only the current generation's
// arrival times are materialized, so memory is bounded by node_cap.
BPRun simulate(const OffspringDist& root, const OffspringDist& offspring,
               const WeightDist& w, double tau, int k_max,
               std::uint64_t node_cap, std::uint64_t seed);

struct ExplosionEvidence {
    enum class Status { explosive, non_explosive, inconclusive };
    Status status = Status::inconclusive;
    std::vector<double> median_front;     // across runs, per generation
    std::vector<double> median_increments;
    std::vector<double> median_gen_min;   // per-generation minimum weights
    std::vector<double> predicted_terms;  // F^{(-1)}(e^{-(1/(tau-2))^i})
    bool classifier_explosive = false;
    bool agrees_with_classifier = false;
};

// Front plateauing means the total passage time stays bounded while the
// population explodes; increments tracking the characteristic terms mean
// divergence.
ExplosionEvidence explosion_evidence(const std::vector<BPRun>& runs,
                                     const WeightDist& w, double tau);

struct GenerationReport {
    long long generation = 0; // ceil(M log log ktilde)
    double failure_fraction = 1.0;
    bool pass = false;
};

// Fraction of runs whose max offspring count within the prescribed number
// of generations stays below ktilde.
GenerationReport generations_to_degree(const std::vector<BPRun>& runs,
                                       long long ktilde, double M, double tau);

std::string to_json(const BPRun& run);

} // namespace fppcm
