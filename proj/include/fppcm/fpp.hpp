#pragma once

#include "fppcm/degrees.hpp"
#include "fppcm/graph.hpp"
#include "fppcm/percolation.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace fppcm {

constexpr double kInfDist = std::numeric_limits<double>::infinity();

struct DistanceResult {
    double weighted = kInfDist;
    long long hopcount = -1; // -1 when unreachable
    std::vector<Vertex> path; // one optimal path, u..v

    bool reachable() const { return hopcount >= 0; }
};

struct ShellDecomposition {
    std::vector<std::vector<Vertex>> shells; // shells[k]: graph distance k
    std::vector<double> inter_shell_min;     // min weight shell k -> k+1
};

struct CouplingProbeReport {
    std::vector<std::uint32_t> forward_degrees;
    long long collisions = 0;
    long long first_collision_depth = -1;
    double tv_to_size_biased = 0.0;
    std::size_t explored = 0;
};

struct LayerPathResult {
    enum class Status { ok, stuck, start_below_layer };
    Status status = Status::ok;
    std::vector<Vertex> path;
    std::vector<std::uint32_t> degree_profile; // kept-degrees along path
    int stuck_layer = -1;
};

struct HubConnectResult {
    bool success = false;
    std::vector<Vertex> path; // a..b including endpoints
    std::vector<double> edge_weights;
};

// Dijkstra with deterministic tie-breaking: minimal weight, then fewest
// edges, then smallest predecessor id. Stops once the target settles.
DistanceResult weighted_distance(const MultiGraph& g, Vertex u, Vertex v);

// BFS edge count; -1 when unreachable.
long long graph_distance(const MultiGraph& g, Vertex u, Vertex v);

// min over x in S of d_L(u, x).
DistanceResult distance_to_set(const MultiGraph& g, Vertex u,
                               const std::vector<Vertex>& targets);

// BFS layers around u with the minimal edge weight crossing each
// consecutive shell boundary.
ShellDecomposition shells(const MultiGraph& g, Vertex u, std::size_t k_max);

// BFS exploration recording forward degrees and collision events, for
// comparison against the size-biased law.
CouplingProbeReport coupling_probe(const MultiGraph& g, Vertex u,
                                   std::size_t volume_cap,
                                   const SizeBiasedDist& reference);

// Greedy ascent through the layers Gamma_i = {v : kept-degree >= y_i},
// stopping at kept-degree >= target_degree. Ties break toward the
// neighbor of maximal kept-degree.
LayerPathResult greedy_layer_path(const PercolatedGraph& pg, Vertex start,
                                  const std::vector<double>& y,
                                  double target_degree);

// Connects two high-degree vertices through the hub set
// {w : degree >= hub_threshold} using at most max_hops edges (3 for the
// percolated graph, 5 for the erased variant).
HubConnectResult hub_connect(const MultiGraph& g,
                             const std::vector<std::uint32_t>& degs,
                             Vertex a, Vertex b, double hub_threshold,
                             int max_hops,
                             const std::vector<char>* kept = nullptr);

} // namespace fppcm
