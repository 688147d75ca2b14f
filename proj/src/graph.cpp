#include "fppcm/graph.hpp"

#include "fppcm/rng.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace fppcm {

void MultiGraph::build_adjacency() {
    adj_offsets.assign(n + 1, 0);
    for (const Edge& e : edges) {
        ++adj_offsets[e.u];
        ++adj_offsets[e.v];
    }
    for (std::size_t v = 1; v <= n; ++v) adj_offsets[v] += adj_offsets[v - 1];
    adj_edges.assign(adj_offsets[n], 0);
    std::vector<std::uint64_t> cursor(adj_offsets.begin(), adj_offsets.end() - 1);
    for (std::uint32_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        adj_edges[cursor[e.u - 1]++] = i;
        adj_edges[cursor[e.v - 1]++] = i;
    }
}

MultiGraph build(const DegreeSequence& ds, const WeightDist& w,
                 std::uint64_t seed) {
    if (ds.n() < 2) throw std::invalid_argument("need at least 2 vertices");
    std::uint64_t h = 0;
    for (auto d : ds.degrees) h += d;
    if (h % 2 != 0) throw std::invalid_argument("odd number of half-edges");

    std::vector<Vertex> half_edges;
    half_edges.reserve(h);
    for (Vertex v = 1; v <= ds.n(); ++v)
        for (std::uint32_t k = 0; k < ds.degrees[v - 1]; ++k)
            half_edges.push_back(v);

    auto eng = make_engine(seed);
    // Fisher-Yates; pairing positions (2i, 2i+1) afterwards is exactly
    // uniform over perfect matchings.
    for (std::size_t i = half_edges.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(half_edges[i], half_edges[pick(eng)]);
    }

    MultiGraph g;
    g.n = ds.n();
    g.edges.reserve(h / 2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i + 1 < half_edges.size(); i += 2) {
        Edge e;
        e.u = half_edges[i];
        e.v = half_edges[i + 1];
        double u01 = unif(eng);
        while (u01 <= 0.0) u01 = unif(eng);
        e.weight = w.sample(u01);
        g.edges.push_back(e);
    }
    g.build_adjacency();
    return g;
}

ErasedGraph erase(const MultiGraph& g, std::uint64_t seed) {
    auto eng = make_engine(seed);
    // Parallel classes keyed by the unordered endpoint pair.
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> classes;
    classes.reserve(g.edges.size());
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (e.u == e.v) continue;
        const std::uint64_t a = std::min(e.u, e.v);
        const std::uint64_t b = std::max(e.u, e.v);
        classes[(a << 32) | b].push_back(i);
    }
    // Deterministic iteration order: sort keys.
    std::vector<std::uint64_t> keys;
    keys.reserve(classes.size());
    for (const auto& [k, v] : classes) keys.push_back(k);
    std::sort(keys.begin(), keys.end());

    ErasedGraph out;
    out.n = g.n;
    out.simple_edges.reserve(classes.size());
    for (std::uint64_t key : keys) {
        const auto& members = classes[key];
        std::uint32_t survivor = members[0];
        if (members.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
            survivor = members[pick(eng)];
        }
        Edge e = g.edges[survivor];
        if (e.u > e.v) std::swap(e.u, e.v);
        out.simple_edges.push_back(e);
        out.provenance.push_back(survivor);
    }
    return out;
}

MultiGraph erased_as_multigraph(const ErasedGraph& e) {
    MultiGraph g;
    g.n = e.n;
    g.edges = e.simple_edges;
    g.build_adjacency();
    return g;
}

namespace {

void write_edges(const std::vector<Edge>& edges, std::size_t n,
                 const char* type, std::uint64_t seed, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# n=" << n << " type=" << type << " seed=" << seed << "\n";
    char buf[80];
    for (const Edge& e : edges) {
        std::snprintf(buf, sizeof(buf), "%u %u %.17g\n", e.u, e.v, e.weight);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace

void export_graph(const MultiGraph& g, const std::string& path,
                  std::uint64_t seed) {
    write_edges(g.edges, g.n, "multi", seed, path);
}

void export_graph(const ErasedGraph& g, const std::string& path,
                  std::uint64_t seed) {
    write_edges(g.simple_edges, g.n, "erased", seed, path);
}

MultiGraph import_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    MultiGraph g;
    std::string line;
    bool have_n = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("n=");
            if (pos != std::string::npos)
                g.n = std::stoull(line.substr(pos + 2));
            have_n = true;
            continue;
        }
        std::istringstream ss(line);
        Edge e;
        if (!(ss >> e.u >> e.v >> e.weight))
            throw std::runtime_error("malformed edge line in " + path + ": " + line);
        g.edges.push_back(e);
    }
    if (!have_n) throw std::runtime_error("missing header in " + path);
    if (g.n == 0)
        for (const Edge& e : g.edges) g.n = std::max<std::size_t>({g.n, e.u, e.v});
    g.build_adjacency();
    return g;
}

} // namespace fppcm
