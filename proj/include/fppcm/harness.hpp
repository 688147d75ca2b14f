#pragma once

#include "fppcm/bp.hpp"
#include "fppcm/degrees.hpp"
#include "fppcm/fpp.hpp"
#include "fppcm/graph.hpp"
#include "fppcm/percolation.hpp"
#include "fppcm/weights.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fppcm {

struct ExperimentConfig {
    std::vector<std::size_t> n_list;
    TailParams tail;
    std::string weight_spec = "constant(a=1)";
    PercolationSpec percolation;
    std::size_t pairs_per_graph = 1;
    std::size_t replicas = 1;
    std::uint64_t seed = 1;
    std::string mode = "multigraph"; // or "erased"
    std::string experiment;

    // upper-path pipeline knobs
    double epsilon = 1.0;
    long long ktilde = 0;   // 0: ceil((log n)^{0.8})
    double hub_delta = 0.01; // hub set: degree >= n^{1/2 + hub_delta}
    double D = 0.0;          // 0: 2 * tail.C

    // bp knobs
    int bp_kmax = 8;
    std::uint64_t bp_node_cap = 10000000;
    double bp_cstar = 1.0;
    std::uint64_t bp_offspring_cap = 0; // 0: untruncated tail

    std::size_t workers = 1;
    bool force = false;

    // Flat key = value text file; '#' starts a comment. n_list is
    // comma-separated, percolation uses {b=..., c=..., eta=...}.
    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_text(const std::string& text);
    void validate() const;
};

struct ResultRow {
    std::size_t n = 0;
    std::size_t replica = 0;
    Vertex u = 0;
    Vertex v = 0;
    long long d_G = -1;
    double d_L = 0.0;
    long long d_H = -1;
    double ratio = 0.0;
    double constructed_len = -1.0;  // -1: not applicable / failed
    long long constructed_hops = -1;
};

struct ExperimentResult {
    std::string experiment;
    std::vector<ResultRow> rows;
    // per n: 5/25/50/75/95% quantiles of ratio
    std::map<std::size_t, std::array<double, 5>> ratio_quantiles;
    std::size_t dropped_disconnected = 0;
    nlohmann::json report; // experiment-specific summary
    bool pass = true;
};

ExperimentResult run_ratio_experiment(const ExperimentConfig& cfg);
ExperimentResult run_upper_path_experiment(const ExperimentConfig& cfg);
ExperimentResult run_multiedge_experiment(const ExperimentConfig& cfg);
ExperimentResult run_percolation_eq_experiment(const ExperimentConfig& cfg);
ExperimentResult run_bp_explosion_experiment(const ExperimentConfig& cfg);
ExperimentResult run_tail_check_experiment(const ExperimentConfig& cfg);

// Dispatches on cfg.experiment.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void emit_csv(const ExperimentResult& result, const std::string& path);
void emit_json(const ExperimentResult& result, const std::string& path);
std::vector<ResultRow> parse_csv(const std::string& path);

// Number of parallel edges between u and v.
std::size_t edge_multiplicity(const MultiGraph& g, Vertex u, Vertex v);

} // namespace fppcm
