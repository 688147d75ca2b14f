#pragma once

#include "fppcm/degrees.hpp"
#include "fppcm/weights.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fppcm {

using Vertex = std::uint32_t; // 1-based, matching [n] = {1,...,n}

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    double weight = 0.0;
};

// Half-edge-level configuration model multigraph: self-loops and
// parallel edges are retained, a self-loop counts 2 toward its vertex.
struct MultiGraph {
    std::size_t n = 0;
    std::vector<Edge> edges;
    // CSR adjacency over edge indices: a self-loop appears twice.
    std::vector<std::uint64_t> adj_offsets;
    std::vector<std::uint32_t> adj_edges;

    std::uint32_t degree_of(Vertex v) const {
        return static_cast<std::uint32_t>(adj_offsets[v] - adj_offsets[v - 1]);
    }
    // Incident edge indices of v as a [begin,end) range into adj_edges.
    std::pair<const std::uint32_t*, const std::uint32_t*> incident(Vertex v) const {
        return {adj_edges.data() + adj_offsets[v - 1],
                adj_edges.data() + adj_offsets[v]};
    }

    void build_adjacency();
};

struct ErasedGraph {
    std::size_t n = 0;
    std::vector<Edge> simple_edges;
    std::vector<std::uint32_t> provenance; // simple edge -> original edge index
};

// Uniform perfect matching of the half-edges (Fisher-Yates shuffle,
// consecutive positions paired), i.i.d. edge weights from w.
MultiGraph build(const DegreeSequence& ds, const WeightDist& w,
                 std::uint64_t seed);

// Drops self-loops; per parallel class keeps one uniformly chosen edge
// (choice depends only on edge indices, never on weights).
ErasedGraph erase(const MultiGraph& g, std::uint64_t seed);

MultiGraph erased_as_multigraph(const ErasedGraph& e);

// `u v weight` per line with a `# n=<n> type=<multi|erased> seed=<seed>`
// header.
void export_graph(const MultiGraph& g, const std::string& path,
                  std::uint64_t seed);
void export_graph(const ErasedGraph& g, const std::string& path,
                  std::uint64_t seed);
MultiGraph import_graph(const std::string& path);

} // namespace fppcm
