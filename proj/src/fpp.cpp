#include "fppcm/fpp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

namespace fppcm {

namespace {

void check_vertex(const MultiGraph& g, Vertex v) {
    if (v < 1 || v > g.n) throw std::invalid_argument("vertex out of range");
}

Vertex other_end(const Edge& e, Vertex v) { return e.u == v ? e.v : e.u; }

std::vector<Vertex> rebuild_path(const std::vector<Vertex>& pred, Vertex u,
                                 Vertex v) {
    std::vector<Vertex> path;
    for (Vertex cur = v; cur != 0; cur = pred[cur - 1]) {
        path.push_back(cur);
        if (cur == u) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

DistanceResult dijkstra(const MultiGraph& g, Vertex u,
                        const std::vector<Vertex>& targets) {
    std::vector<double> dist(g.n, kInfDist);
    std::vector<long long> hops(g.n, -1);
    std::vector<Vertex> pred(g.n, 0);
    std::vector<char> settled(g.n, 0);
    std::vector<char> is_target(g.n, 0);
    for (Vertex t : targets) is_target[t - 1] = 1;

    using Item = std::tuple<double, long long, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[u - 1] = 0.0;
    hops[u - 1] = 0;
    pq.emplace(0.0, 0, u);

    DistanceResult best;
    while (!pq.empty()) {
        auto [d, h, v] = pq.top();
        pq.pop();
        if (settled[v - 1]) continue;
        settled[v - 1] = 1;
        if (is_target[v - 1]) {
            // First settled target is the (dist, hops)-lexicographic minimum.
            best.weighted = d;
            best.hopcount = h;
            best.path = rebuild_path(pred, u, v);
            break;
        }
        auto [begin, end] = g.incident(v);
        for (const std::uint32_t* it = begin; it != end; ++it) {
            const Edge& e = g.edges[*it];
            const Vertex x = other_end(e, v);
            if (settled[x - 1]) continue;
            const double nd = d + e.weight;
            const long long nh = h + 1;
            // Ties break on hop count, then on predecessor id, so reruns
            // pick the same optimal path.
            if (nd < dist[x - 1] ||
                (nd == dist[x - 1] &&
                 (nh < hops[x - 1] || (nh == hops[x - 1] && v < pred[x - 1])))) {
                dist[x - 1] = nd;
                hops[x - 1] = nh;
                pred[x - 1] = v;
                pq.emplace(nd, nh, x);
            }
        }
    }
    return best;
}

// Point-to-point queries meet in the middle: these graphs have loglog
// diameters, so two half-radius balls are far smaller than one full
// sweep. Keys are (dist, hops) lexicographic on both sides; a candidate
// is recorded whenever a vertex is settled by both searches, and the
// search stops once the two queue tops cannot beat the best candidate.
// Any candidate concatenation is a real walk, and a walk of minimal
// weight yields a path of no more hops, so the recorded optimum matches
// the single-source tie-breaking.
DistanceResult bidirectional_dijkstra(const MultiGraph& g, Vertex u, Vertex v,
                                      bool unit_weights) {
    struct Side {
        std::vector<double> dist;
        std::vector<long long> hops;
        std::vector<Vertex> pred;
        std::vector<char> settled;
        std::priority_queue<std::tuple<double, long long, Vertex>,
                            std::vector<std::tuple<double, long long, Vertex>>,
                            std::greater<>>
            pq;
    };
    Side fwd, bwd;
    for (Side* s : {&fwd, &bwd}) {
        s->dist.assign(g.n, kInfDist);
        s->hops.assign(g.n, -1);
        s->pred.assign(g.n, 0);
        s->settled.assign(g.n, 0);
    }
    fwd.dist[u - 1] = 0.0;
    fwd.hops[u - 1] = 0;
    fwd.pq.emplace(0.0, 0, u);
    bwd.dist[v - 1] = 0.0;
    bwd.hops[v - 1] = 0;
    bwd.pq.emplace(0.0, 0, v);

    double best_dist = kInfDist;
    long long best_hops = -1;
    Vertex meet_f = 0, meet_b = 0;

    auto top_dist = [](Side& s) {
        while (!s.pq.empty()) {
            auto [d, h, w] = s.pq.top();
            if (s.settled[w - 1]) {
                s.pq.pop();
                continue;
            }
            return d;
        }
        return kInfDist;
    };

    while (true) {
        const double tf = top_dist(fwd);
        const double tb = top_dist(bwd);
        if (tf == kInfDist && tb == kInfDist) break;
        if (best_dist < kInfDist && tf + tb > best_dist) break;
        Side& side = tf <= tb ? fwd : bwd;
        Side& other = tf <= tb ? bwd : fwd;

        auto [d, h, w] = side.pq.top();
        side.pq.pop();
        if (side.settled[w - 1]) continue;
        side.settled[w - 1] = 1;
        const bool forward = &side == &fwd;
        if (other.settled[w - 1]) {
            const double cand = d + other.dist[w - 1];
            const long long cand_hops = h + other.hops[w - 1];
            if (cand < best_dist ||
                (cand == best_dist && cand_hops < best_hops)) {
                best_dist = cand;
                best_hops = cand_hops;
                meet_f = meet_b = w;
            }
        }
        auto [begin, end] = g.incident(w);
        for (const std::uint32_t* it = begin; it != end; ++it) {
            const Edge& e = g.edges[*it];
            const Vertex x = other_end(e, w);
            if (side.settled[x - 1]) continue;
            const double nd = d + (unit_weights ? 1.0 : e.weight);
            const long long nh = h + 1;
            // a shortest path can also cross this edge directly, with the
            // two searches settling its endpoints on opposite sides
            if (other.settled[x - 1]) {
                const double cand = nd + other.dist[x - 1];
                const long long cand_hops = nh + other.hops[x - 1];
                if (cand < best_dist ||
                    (cand == best_dist && cand_hops < best_hops)) {
                    best_dist = cand;
                    best_hops = cand_hops;
                    meet_f = forward ? w : x;
                    meet_b = forward ? x : w;
                }
            }
            if (nd < side.dist[x - 1] ||
                (nd == side.dist[x - 1] &&
                 (nh < side.hops[x - 1] ||
                  (nh == side.hops[x - 1] && w < side.pred[x - 1])))) {
                side.dist[x - 1] = nd;
                side.hops[x - 1] = nh;
                side.pred[x - 1] = w;
                side.pq.emplace(nd, nh, x);
            }
        }
    }

    DistanceResult best;
    if (meet_f == 0) return best;
    best.weighted = best_dist;
    best.hopcount = best_hops;
    best.path = rebuild_path(fwd.pred, u, meet_f);
    if (meet_b != meet_f) best.path.push_back(meet_b);
    for (Vertex cur = bwd.pred[meet_b - 1]; cur != 0; cur = bwd.pred[cur - 1]) {
        best.path.push_back(cur);
        if (cur == v) break;
    }
    return best;
}

} // namespace

DistanceResult weighted_distance(const MultiGraph& g, Vertex u, Vertex v) {
    check_vertex(g, u);
    check_vertex(g, v);
    if (u == v) {
        DistanceResult r;
        r.weighted = 0.0;
        r.hopcount = 0;
        r.path = {u};
        return r;
    }
    return bidirectional_dijkstra(g, u, v, false);
}

DistanceResult distance_to_set(const MultiGraph& g, Vertex u,
                               const std::vector<Vertex>& targets) {
    check_vertex(g, u);
    if (targets.empty()) throw std::invalid_argument("empty target set");
    for (Vertex t : targets) check_vertex(g, t);
    if (std::find(targets.begin(), targets.end(), u) != targets.end()) {
        DistanceResult r;
        r.weighted = 0.0;
        r.hopcount = 0;
        r.path = {u};
        return r;
    }
    return dijkstra(g, u, targets);
}

long long graph_distance(const MultiGraph& g, Vertex u, Vertex v) {
    check_vertex(g, u);
    check_vertex(g, v);
    if (u == v) return 0;
    // min hops = min weight under unit weights
    return bidirectional_dijkstra(g, u, v, true).hopcount;
}

ShellDecomposition shells(const MultiGraph& g, Vertex u, std::size_t k_max) {
    check_vertex(g, u);
    ShellDecomposition out;
    std::vector<long long> level(g.n, -1);
    level[u - 1] = 0;
    out.shells.push_back({u});
    for (std::size_t k = 0; k < k_max; ++k) {
        const auto& frontier = out.shells[k];
        if (frontier.empty()) break;
        double crossing_min = kInfDist;
        std::vector<Vertex> next;
        for (Vertex w : frontier) {
            auto [begin, end] = g.incident(w);
            for (const std::uint32_t* it = begin; it != end; ++it) {
                const Edge& e = g.edges[*it];
                const Vertex x = other_end(e, w);
                if (level[x - 1] == static_cast<long long>(k) + 1 ||
                    level[x - 1] == -1) {
                    crossing_min = std::min(crossing_min, e.weight);
                }
                if (level[x - 1] == -1) {
                    level[x - 1] = static_cast<long long>(k) + 1;
                    next.push_back(x);
                }
            }
        }
        if (next.empty()) break;
        std::sort(next.begin(), next.end());
        out.inter_shell_min.push_back(crossing_min);
        out.shells.push_back(std::move(next));
    }
    return out;
}

CouplingProbeReport coupling_probe(const MultiGraph& g, Vertex u,
                                   std::size_t volume_cap,
                                   const SizeBiasedDist& reference) {
    check_vertex(g, u);
    CouplingProbeReport rep;
    std::vector<char> discovered(g.n, 0);
    std::vector<long long> depth(g.n, 0);
    std::vector<std::uint32_t> via_edge(g.n, UINT32_MAX);
    std::deque<Vertex> queue;
    discovered[u - 1] = 1;
    queue.push_back(u);
    rep.explored = 0;

    while (!queue.empty() && rep.explored < volume_cap) {
        const Vertex w = queue.front();
        queue.pop_front();
        ++rep.explored;
        std::uint32_t forward = 0;
        bool skipped_parent = false;
        auto [begin, end] = g.incident(w);
        for (const std::uint32_t* it = begin; it != end; ++it) {
            if (*it == via_edge[w - 1] && !skipped_parent) {
                skipped_parent = true; // the half-edge we arrived along
                continue;
            }
            const Edge& e = g.edges[*it];
            const Vertex x = other_end(e, w);
            if (!discovered[x - 1]) {
                discovered[x - 1] = 1;
                depth[x - 1] = depth[w - 1] + 1;
                via_edge[x - 1] = *it;
                queue.push_back(x);
                ++forward;
            } else {
                ++rep.collisions;
                if (rep.first_collision_depth < 0)
                    rep.first_collision_depth = depth[w - 1] + 1;
            }
        }
        if (w != u) rep.forward_degrees.push_back(forward);
    }

    std::map<std::uint32_t, double> empirical;
    if (!rep.forward_degrees.empty()) {
        for (std::uint32_t f : rep.forward_degrees)
            empirical[f] += 1.0 / static_cast<double>(rep.forward_degrees.size());
    }
    // The size-biased law B is already the far-end degree minus the
    // incoming edge, exactly the forward degree recorded here.
    rep.tv_to_size_biased = tv_distance(empirical, reference.probabilities);
    return rep;
}

LayerPathResult greedy_layer_path(const PercolatedGraph& pg, Vertex start,
                                  const std::vector<double>& y,
                                  double target_degree) {
    if (y.empty()) throw std::invalid_argument("empty layer sequence");
    const MultiGraph& g = pg.graph();
    check_vertex(g, start);

    LayerPathResult out;
    auto kdeg = [&](Vertex v) {
        return static_cast<double>(pg.kept_degree[v - 1]);
    };
    if (kdeg(start) < y[0]) {
        out.status = LayerPathResult::Status::start_below_layer;
        return out;
    }
    out.path.push_back(start);
    out.degree_profile.push_back(pg.kept_degree[start - 1]);

    Vertex cur = start;
    std::unordered_set<Vertex> visited{start};
    std::size_t layer = 0;
    while (kdeg(cur) < target_degree) {
        const double next_layer =
            layer + 1 < y.size() ? std::min(y[layer + 1], target_degree)
                                 : target_degree;
        Vertex best = 0;
        double best_deg = -1.0;
        auto [begin, end] = g.incident(cur);
        for (const std::uint32_t* it = begin; it != end; ++it) {
            if (!pg.edge_kept(*it)) continue;
            const Vertex x = other_end(g.edges[*it], cur);
            if (x == cur || visited.count(x)) continue;
            if (kdeg(x) >= next_layer && kdeg(x) > best_deg) {
                best = x;
                best_deg = kdeg(x);
            }
        }
        if (best == 0) {
            out.status = LayerPathResult::Status::stuck;
            out.stuck_layer = static_cast<int>(layer);
            return out;
        }
        cur = best;
        visited.insert(cur);
        out.path.push_back(cur);
        out.degree_profile.push_back(pg.kept_degree[cur - 1]);
        ++layer;
        if (layer > y.size() + 100) {
            out.status = LayerPathResult::Status::stuck;
            out.stuck_layer = static_cast<int>(layer);
            return out;
        }
    }
    out.status = LayerPathResult::Status::ok;
    return out;
}

HubConnectResult hub_connect(const MultiGraph& g,
                             const std::vector<std::uint32_t>& degs,
                             Vertex a, Vertex b, double hub_threshold,
                             int max_hops, const std::vector<char>* kept) {
    check_vertex(g, a);
    check_vertex(g, b);
    if (degs.size() != g.n) throw std::invalid_argument("degree vector size mismatch");
    HubConnectResult out;
    if (a == b) {
        out.success = true;
        out.path = {a};
        return out;
    }

    auto allowed = [&](Vertex v) {
        return v == a || v == b || static_cast<double>(degs[v - 1]) >= hub_threshold;
    };

    // BFS restricted to the hub set; paths of <= max_hops edges.
    std::vector<long long> level(g.n, -1);
    std::vector<Vertex> pred(g.n, 0);
    std::vector<std::uint32_t> pred_edge(g.n, UINT32_MAX);
    std::deque<Vertex> queue;
    level[a - 1] = 0;
    queue.push_back(a);
    while (!queue.empty()) {
        const Vertex w = queue.front();
        queue.pop_front();
        if (level[w - 1] >= max_hops) continue;
        auto [begin, end] = g.incident(w);
        for (const std::uint32_t* it = begin; it != end; ++it) {
            if (kept && !(*kept)[*it]) continue;
            const Vertex x = other_end(g.edges[*it], w);
            if (level[x - 1] >= 0 || !allowed(x)) continue;
            level[x - 1] = level[w - 1] + 1;
            pred[x - 1] = w;
            pred_edge[x - 1] = *it;
            if (x == b) {
                out.success = true;
                out.path = rebuild_path(pred, a, b);
                for (Vertex v = b; v != a; v = pred[v - 1])
                    out.edge_weights.push_back(g.edges[pred_edge[v - 1]].weight);
                std::reverse(out.edge_weights.begin(), out.edge_weights.end());
                return out;
            }
            queue.push_back(x);
        }
    }
    return out;
}

} // namespace fppcm
