#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fppcm/fpp.hpp"
#include "fppcm/rng.hpp"

#include <cmath>
#include <random>

using namespace fppcm;

namespace {

MultiGraph make_graph(std::size_t n, std::vector<Edge> edges) {
    MultiGraph g;
    g.n = n;
    g.edges = std::move(edges);
    g.build_adjacency();
    return g;
}

// Random small multigraph with self-loops and parallel edges; weights on
// a 1/16 grid so path sums are exact in binary floating point.
MultiGraph random_small(std::mt19937_64& eng) {
    std::uniform_int_distribution<std::size_t> nd(2, 12);
    const std::size_t n = nd(eng);
    std::uniform_int_distribution<std::size_t> md(1, 20);
    const std::size_t m = md(eng);
    std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(n));
    std::uniform_int_distribution<int> wd(0, 32);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < m; ++i)
        edges.push_back({vd(eng), vd(eng), wd(eng) / 16.0});
    return make_graph(n, std::move(edges));
}

struct Brute {
    double weighted = kInfDist;
    long long hops_at_optimum = -1; // fewest edges among min-weight paths
    long long graph_dist = -1;      // fewest edges over all paths
};

// Exhaustive enumeration over simple paths (an optimal path under
// nonnegative weights can always be chosen simple).
void dfs(const MultiGraph& g, Vertex cur, Vertex target, std::vector<char>& used,
         double w, long long hops, Brute& best) {
    if (cur == target) {
        if (w < best.weighted ||
            (w == best.weighted && hops < best.hops_at_optimum)) {
            best.weighted = w;
            best.hops_at_optimum = hops;
        }
        if (best.graph_dist < 0 || hops < best.graph_dist) best.graph_dist = hops;
        return;
    }
    auto [begin, end] = g.incident(cur);
    for (const std::uint32_t* it = begin; it != end; ++it) {
        const Edge& e = g.edges[*it];
        const Vertex nxt = e.u == cur ? e.v : e.u;
        if (nxt == cur || used[nxt - 1]) continue;
        used[nxt - 1] = 1;
        dfs(g, nxt, target, used, w + e.weight, hops + 1, best);
        used[nxt - 1] = 0;
    }
}

Brute brute_force(const MultiGraph& g, Vertex u, Vertex v) {
    Brute best;
    if (u == v) return {0.0, 0, 0};
    std::vector<char> used(g.n, 0);
    used[u - 1] = 1;
    dfs(g, u, v, used, 0.0, 0, best);
    return best;
}

} // namespace

TEST_CASE("hand-checked distances") {
    const auto g = make_graph(3, {{1, 2, 0.5}, {2, 3, 0.25}});
    const auto r = weighted_distance(g, 1, 3);
    CHECK(r.weighted == 0.75);
    CHECK(r.hopcount == 2);
    CHECK(r.path == std::vector<Vertex>{1, 2, 3});
    CHECK(graph_distance(g, 1, 3) == 2);

    const auto self = weighted_distance(g, 2, 2);
    CHECK(self.weighted == 0.0);
    CHECK(self.hopcount == 0);
    CHECK(self.path == std::vector<Vertex>{2});

    const auto dbl = make_graph(2, {{1, 2, 3.0}, {1, 2, 1.0}});
    CHECK(graph_distance(dbl, 1, 2) == 1);
    CHECK(weighted_distance(dbl, 1, 2).weighted == 1.0);

    const auto disc = make_graph(3, {{1, 2, 1.0}});
    CHECK(!weighted_distance(disc, 1, 3).reachable());
    CHECK(weighted_distance(disc, 1, 3).weighted == kInfDist);
    CHECK(graph_distance(disc, 1, 3) == -1);
}

TEST_CASE("oracle equivalence on random small multigraphs") {
    auto eng = make_engine(101);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int inst = 0; inst < 200; ++inst) {
        const auto g = random_small(eng);
        std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(g.n));
        const Vertex u = vd(eng), v = vd(eng);
        const auto brute = brute_force(g, u, v);
        const auto r = weighted_distance(g, u, v);
        CAPTURE(inst);
        if (brute.hops_at_optimum < 0) {
            CHECK(!r.reachable());
            CHECK(graph_distance(g, u, v) == -1);
            continue;
        }
        CHECK(r.weighted == brute.weighted);
        CHECK(r.hopcount == brute.hops_at_optimum);
        CHECK(graph_distance(g, u, v) == brute.graph_dist);
        // returned path is consistent
        REQUIRE(!r.path.empty());
        CHECK(r.path.front() == u);
        CHECK(r.path.back() == v);
        CHECK(static_cast<long long>(r.path.size()) - 1 == r.hopcount);
    }
}

TEST_CASE("distance_to_set semantics") {
    auto eng = make_engine(103);
    for (int inst = 0; inst < 100; ++inst) {
        const auto g = random_small(eng);
        std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(g.n));
        const Vertex u = vd(eng);
        std::vector<Vertex> targets;
        for (Vertex t = 1; t <= g.n; ++t)
            if (vd(eng) % 3 == 0) targets.push_back(t);
        if (targets.empty()) targets.push_back(vd(eng));
        const auto r = distance_to_set(g, u, targets);
        double best = kInfDist;
        for (Vertex t : targets)
            best = std::min(best, weighted_distance(g, u, t).weighted);
        CHECK(r.weighted == best);
        if (r.reachable()) {
            bool hit = false;
            for (Vertex t : targets) hit = hit || r.path.back() == t;
            CHECK(hit);
        }
    }

    const auto g = make_graph(3, {{1, 2, 0.5}, {1, 3, 0.25}, {2, 3, 2.0}});
    CHECK(distance_to_set(g, 1, {1, 2}).weighted == 0.0); // u in S
    CHECK(distance_to_set(g, 1, {2, 3}).weighted == 0.25); // min incident
    CHECK_THROWS(distance_to_set(g, 1, {}));
}

TEST_CASE("triangle inequality and d_G <= d_H on sampled triples") {
    auto eng = make_engine(107);
    for (int inst = 0; inst < 50; ++inst) {
        const auto g = random_small(eng);
        std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(g.n));
        const Vertex u = vd(eng), v = vd(eng), w = vd(eng);
        const auto uv = weighted_distance(g, u, v);
        const auto uw = weighted_distance(g, u, w);
        const auto wv = weighted_distance(g, w, v);
        CHECK(uv.weighted <= uw.weighted + wv.weighted + 1e-12);
        if (uv.reachable()) {
            const long long dg = graph_distance(g, u, v);
            CHECK(dg >= 0);
            CHECK(dg <= uv.hopcount);
        }
    }
}

TEST_CASE("shells and the inter-shell minima lower bound") {
    // star: center 1, leaves 2..5
    const auto star = make_graph(
        5, {{1, 2, 0.5}, {1, 3, 0.125}, {1, 4, 0.75}, {1, 5, 1.0}});
    const auto sd = shells(star, 1, 5);
    REQUIRE(sd.shells.size() == 2);
    CHECK(sd.shells[0] == std::vector<Vertex>{1});
    CHECK(sd.shells[1].size() == 4);
    REQUIRE(sd.inter_shell_min.size() == 1);
    CHECK(sd.inter_shell_min[0] == 0.125);

    // disconnected vertex never appears in a shell
    const auto disc = make_graph(3, {{1, 2, 1.0}});
    const auto sd2 = shells(disc, 1, 5);
    for (const auto& shell : sd2.shells)
        for (Vertex v : shell) CHECK(v != 3);

    // lower bound: sum of inter-shell minima <= d_L(u, x) for x in shell k
    auto eng = make_engine(109);
    for (int inst = 0; inst < 100; ++inst) {
        const auto g = random_small(eng);
        std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(g.n));
        const Vertex u = vd(eng);
        const auto dec = shells(g, u, 12);
        double acc = 0.0;
        for (std::size_t k = 1; k < dec.shells.size(); ++k) {
            acc += dec.inter_shell_min[k - 1];
            for (Vertex x : dec.shells[k]) {
                const auto r = weighted_distance(g, u, x);
                CHECK(r.weighted >= acc - 1e-12);
            }
        }
    }
}

TEST_CASE("coupling probe on a tree and against the size-biased law") {
    // path 1-2-3-4: a tree, no collisions
    const auto tree = make_graph(4, {{1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}});
    SizeBiasedDist ref;
    ref.probabilities = {{1, 1.0}};
    ref.support_max = 1;
    const auto rep = coupling_probe(tree, 1, 100, ref);
    CHECK(rep.collisions == 0);
    CHECK(rep.first_collision_depth == -1);

    // synthesized graph: pooled forward degrees approach the size-biased
    // law as the probe volume grows. The infinite-variance support keeps
    // a finite-sample TV floor, so the assertion is a level plus a trend,
    // not a tight match.
    TailParams p;
    const auto w = parse_weight_spec("exponential(rate=1)");
    const auto ds = synthesize(100000, p, 200);
    const auto g = build(ds, w, 300);
    const auto sb = size_biased(ds);
    std::vector<double> tvs;
    for (std::size_t cap : {5, 20, 100}) {
        std::map<std::uint32_t, double> pooled;
        double count = 0.0;
        long long depth_sum = 0;
        int collided = 0;
        for (int r = 0; r < 50; ++r) {
            const auto probe =
                coupling_probe(g, static_cast<Vertex>(1 + 97 * r), cap, sb);
            for (std::uint32_t f : probe.forward_degrees) {
                pooled[f] += 1.0;
                count += 1.0;
            }
            if (probe.first_collision_depth >= 0) {
                CHECK(probe.first_collision_depth >= 1);
                depth_sum += probe.first_collision_depth;
                ++collided;
            }
            CHECK(probe.explored <= cap);
        }
        REQUIRE(count > 0.0);
        for (auto& [k, v] : pooled) v /= count;
        tvs.push_back(tv_distance(pooled, sb.probabilities));
        if (collided > 0) CHECK(depth_sum / collided >= 1);
    }
    CHECK(tvs[2] < tvs[1]);
    CHECK(tvs[1] < tvs[0]);
    CHECK(tvs[2] <= 0.2);
}

TEST_CASE("greedy layer path statuses") {
    // chain of increasing degree: 1 (deg 2) - 2 (deg 4) - 3 (deg 8), built
    // with self-loops to pad degrees
    std::vector<Edge> edges = {{1, 2, 1.0}, {2, 3, 1.0}};
    edges.push_back({1, 1, 1.0});
    for (int i = 0; i < 2; ++i) edges.push_back({2, 2, 1.0});
    for (int i = 0; i < 3; ++i) edges.push_back({3, 3, 1.0});
    const auto g = make_graph(3, edges);
    PercolatedGraph pg;
    pg.base = &g;
    pg.kept.assign(g.edges.size(), 1);
    pg.kept_degree = {3, 6, 8};
    pg.dr = pg.kept_degree;

    const auto ok = greedy_layer_path(pg, 1, {3.0, 6.0}, 8.0);
    CHECK(ok.status == LayerPathResult::Status::ok);
    CHECK(ok.path == std::vector<Vertex>{1, 2, 3});
    CHECK(ok.degree_profile == std::vector<std::uint32_t>{3, 6, 8});

    // start already at the target: single-vertex path
    const auto triv = greedy_layer_path(pg, 3, {3.0}, 8.0);
    CHECK(triv.status == LayerPathResult::Status::ok);
    CHECK(triv.path == std::vector<Vertex>{3});

    const auto below = greedy_layer_path(pg, 1, {5.0}, 8.0);
    CHECK(below.status == LayerPathResult::Status::start_below_layer);

    // cutting the 2-3 edge strands the ascent
    pg.kept[1] = 0;
    const auto stuck = greedy_layer_path(pg, 1, {3.0, 6.0}, 8.0);
    CHECK(stuck.status == LayerPathResult::Status::stuck);
}

TEST_CASE("hub connect basics") {
    // a=1 and b=4 joined through hubs 2 and 3
    const auto g = make_graph(4, {{1, 2, 0.5}, {2, 3, 0.25}, {3, 4, 0.125}});
    const std::vector<std::uint32_t> degs = {2, 100, 100, 2};

    const auto r = hub_connect(g, degs, 1, 4, 50.0, 3);
    REQUIRE(r.success);
    CHECK(r.path == std::vector<Vertex>{1, 2, 3, 4});
    CHECK(r.edge_weights == std::vector<double>{0.5, 0.25, 0.125});

    // adjacent endpoints take the direct edge even when it is expensive
    const auto g2 = make_graph(
        4, {{1, 2, 0.5}, {2, 3, 0.25}, {3, 4, 0.125}, {1, 4, 9.0}});
    const auto adj = hub_connect(g2, degs, 1, 4, 50.0, 3);
    REQUIRE(adj.success);
    CHECK(adj.path == std::vector<Vertex>{1, 4});
    CHECK(adj.edge_weights == std::vector<double>{9.0});

    // empty hub set: no path within max_hops
    const auto fail = hub_connect(g, {2, 2, 2, 2}, 1, 4, 50.0, 3);
    CHECK(!fail.success);

    // kept filter rules out dropped edges
    std::vector<char> kept = {1, 0, 1};
    const auto cut = hub_connect(g, degs, 1, 4, 50.0, 3, &kept);
    CHECK(!cut.success);
}
