// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.
#include "fppcm/bp.hpp"
#include "fppcm/degrees.hpp"
#include "fppcm/fpp.hpp"
#include "fppcm/graph.hpp"
#include "fppcm/harness.hpp"
#include "fppcm/percolation.hpp"
#include "fppcm/rng.hpp"
#include "fppcm/stats.hpp"
#include "fppcm/weights.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fppcm;

namespace {

int g_failures = 0;

void report(int idx, const std::string& label, bool pass, double seconds,
            const std::string& detail = "") {
    std::printf("criterion %2d [%s]: %s (%.1f s)%s%s\n", idx, label.c_str(),
                pass ? "PASS" : "FAIL", seconds,
                detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

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
    long long hops_at_optimum = -1;
    long long graph_dist = -1;
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

// Canonical multigraph signature: sorted list of normalized edges.
std::string signature(const std::vector<Edge>& edges) {
    std::vector<std::pair<Vertex, Vertex>> norm;
    for (const Edge& e : edges)
        norm.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    std::sort(norm.begin(), norm.end());
    std::ostringstream out;
    for (const auto& [a, b] : norm) out << a << '-' << b << ';';
    return out.str();
}

// Criterion 1: exact equivalence with exhaustive path enumeration.
void criterion_oracle() {
    Timer t;
    auto eng = make_engine(101);
    std::size_t mismatches = 0;
    for (int inst = 0; inst < 1000; ++inst) {
        const auto g = random_small(eng);
        std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(g.n));
        const Vertex u = vd(eng), v = vd(eng);
        const auto brute = brute_force(g, u, v);
        const auto r = weighted_distance(g, u, v);
        if (brute.hops_at_optimum < 0) {
            if (r.reachable() || graph_distance(g, u, v) != -1) ++mismatches;
        } else {
            if (r.weighted != brute.weighted ||
                r.hopcount != brute.hops_at_optimum ||
                graph_distance(g, u, v) != brute.graph_dist)
                ++mismatches;
        }
        // distance to a random set: minimum of single-target brute forces
        std::vector<Vertex> targets;
        for (Vertex x = 1; x <= g.n; ++x)
            if (vd(eng) % 3 == 0) targets.push_back(x);
        if (targets.empty()) targets.push_back(v);
        double best = u == targets.front() ? 0.0 : kInfDist;
        for (Vertex x : targets)
            best = std::min(best, brute_force(g, u, x).weighted);
        if (distance_to_set(g, u, targets).weighted != best) ++mismatches;
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "mismatches=%zu/1000", mismatches);
    report(1, "small-instance oracle", mismatches == 0, t.seconds(), detail);
}

// Criterion 2: matching uniformity on ds = [2,2,2] against the exact
// enumeration of the 15 perfect matchings of 6 half-edges.
void criterion_matching_uniformity() {
    Timer t;
    // enumerate matchings of half-edges 0..5 (owner = h / 2 + 1)
    std::map<std::string, double> exact;
    std::vector<int> hs = {0, 1, 2, 3, 4, 5};
    std::function<void(std::vector<int>&, std::vector<Edge>&)> rec =
        [&](std::vector<int>& rest, std::vector<Edge>& acc) {
            if (rest.empty()) {
                exact[signature(acc)] += 1.0 / 15.0;
                return;
            }
            const int a = rest.front();
            for (std::size_t j = 1; j < rest.size(); ++j) {
                const int b = rest[j];
                std::vector<int> next;
                for (std::size_t k = 1; k < rest.size(); ++k)
                    if (k != j) next.push_back(rest[k]);
                acc.push_back({static_cast<Vertex>(a / 2 + 1),
                               static_cast<Vertex>(b / 2 + 1), 1.0});
                rec(next, acc);
                acc.pop_back();
            }
        };
    std::vector<Edge> acc;
    rec(hs, acc);

    const auto ds = DegreeSequence::from_degrees({2, 2, 2});
    const auto w = parse_weight_spec("constant(a=1)");
    const std::size_t builds = 100000;
    std::map<std::string, double> counts;
    for (std::size_t i = 0; i < builds; ++i)
        counts[signature(build(ds, w, 40000 + i).edges)] += 1.0;

    // goodness of fit over the exact classes
    double chi2 = 0.0;
    bool unknown_class = false;
    double seen = 0.0;
    for (const auto& [sig, p] : exact) {
        const double expect = p * builds;
        const double obs = counts.count(sig) ? counts[sig] : 0.0;
        seen += obs;
        chi2 += (obs - expect) * (obs - expect) / expect;
    }
    if (seen != static_cast<double>(builds)) unknown_class = true;
    const double p_value =
        stats::chi_square_sf(chi2, static_cast<double>(exact.size()) - 1.0);
    char detail[96];
    std::snprintf(detail, sizeof(detail), "classes=%zu chi2=%.2f p=%.4f",
                  exact.size(), chi2, p_value);
    report(2, "matching uniformity", !unknown_class && p_value > 0.01,
           t.seconds(), detail);
}

// Criterion 3: edge vs half-edge percolation indistinguishable; broken
// variant rejected.
void criterion_percolation_equality() {
    Timer t;
    TailParams params;
    PercolationSpec spec;
    spec.b = 1.0;
    spec.c = 0.5;
    spec.eta = 0.5;
    const auto w = parse_weight_spec("uniform(a=0,b=1)");
    const auto ds = synthesize(40, params, derive_seed(5, {40, 0, 1}));
    const auto rep = equality_test(ds, spec, w, 100000, derive_seed(5, {40, 0, 2}));
    const auto neg = equality_test(ds, spec, w, 100000, derive_seed(5, {40, 0, 3}),
                                   true);
    const bool same = rep.kept_edge_count.p_value > 0.01 &&
                      rep.degree_distribution.p_value > 0.01;
    const bool rejected = neg.kept_edge_count.p_value < 1e-3 ||
                          neg.degree_distribution.p_value < 1e-3;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "kept p=%.3f degrees p=%.3f broken p=%.2e",
                  rep.kept_edge_count.p_value, rep.degree_distribution.p_value,
                  std::min(neg.kept_edge_count.p_value,
                           neg.degree_distribution.p_value));
    report(3, "percolation equality", same && rejected, t.seconds(), detail);
}

// Criterion 4: Hill estimate of the percolated tail stays in the window
// in >= 18/20 replicas; percolated tail never exceeds the original.
void criterion_post_percolation_tail() {
    Timer t;
    TailParams params;
    PercolationSpec spec;
    spec.b = 1.0;
    spec.c = 0.5;
    spec.eta = 0.5;
    const auto ds = synthesize(100000, params, derive_seed(3, {100000, 0, 1}));
    const auto rep =
        post_percolation_tail_test(ds, params, spec, 20,
                                   derive_seed(3, {100000, 0, 7}));
    char detail[96];
    std::snprintf(detail, sizeof(detail), "hill_in_window=%zu/20 envelope=%s",
                  rep.hill_in_window, rep.upper_envelope_ok ? "ok" : "violated");
    report(4, "post-percolation tail",
           rep.hill_in_window >= 18 && rep.upper_envelope_ok, t.seconds(),
           detail);
}

// Criterion 5: explosion verdicts for the six reference families, stable
// under the truncation depth.
void criterion_explosion_classifier() {
    Timer t;
    const std::vector<std::pair<std::string, bool>> expected = {
        {"exponential(rate=1)", true},
        {"uniform(a=0,b=1)", true},
        {"constant(a=1)", false},
        {"shifted(offset=1,rate=1)", false},
        {"double_exp(beta=2,C=1,c=1)", false},
        {"double_exp(beta=0.5,C=1,c=1)", true},
    };
    bool ok = true;
    for (const auto& [spec, explosive] : expected) {
        const auto w = parse_weight_spec(spec);
        for (int k_max : {20, 40}) {
            const auto verdict = classify_explosive(w, k_max);
            if (verdict.explosive != explosive ||
                verdict.status == ExplosionVerdict::Status::inconclusive)
                ok = false;
        }
    }
    report(5, "explosion classifier", ok, t.seconds());
}

// Criteria 6 and 7 share the ratio machinery; 7 additionally compares
// the erased distances pairwise on the same base graph.
void criterion_ratio_and_erased() {
    Timer t6;
    ExperimentConfig cfg;
    cfg.experiment = "ratio";
    cfg.n_list = {100000, 1000000, 10000000};
    cfg.weight_spec = "constant(a=1)";
    cfg.pairs_per_graph = 200;
    cfg.replicas = 1;
    cfg.seed = 1;
    const auto res = run_ratio_experiment(cfg);
    bool ratio_ok = res.rows.size() >= 3 * 200 - 30; // a few dropped pairs ok
    double iqr_small = 0.0, iqr_large = 0.0, median_mid = 0.0;
    for (const auto& [n, q] : res.ratio_quantiles) {
        if (n == 100000) iqr_small = q[3] - q[1];
        if (n == 10000000) iqr_large = q[3] - q[1];
        if (n == 1000000) median_mid = q[2];
        if (q[2] < 0.5 || q[2] > 1.5) ratio_ok = false;
    }
    if (!(iqr_large < iqr_small)) ratio_ok = false;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "median@1e6=%.3f iqr 1e5=%.3f -> 1e7=%.3f", median_mid,
                  iqr_small, iqr_large);
    report(6, "ratio law", ratio_ok, t6.seconds(), detail);

    // erased model at n = 10^6: d_L^e >= d_L on every sampled pair and
    // the erased median stays in the same window
    Timer t7;
    const std::size_t n = 1000000;
    TailParams params;
    const auto w = parse_weight_spec("constant(a=1)");
    const auto ds = synthesize(n, params, derive_seed(1, {n, 0, 1}));
    const auto g = build(ds, w, derive_seed(1, {n, 0, 2}));
    const auto ge = erased_as_multigraph(erase(g, derive_seed(1, {n, 0, 3})));
    auto eng = make_engine(derive_seed(1, {n, 0, 4}));
    std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(n));
    const double charsum = characteristic_sum(w, static_cast<double>(n), 2.5);
    std::size_t violations = 0, compared = 0;
    std::vector<double> erased_ratios;
    while (compared < 200) {
        const Vertex u = vd(eng);
        Vertex v = vd(eng);
        while (v == u) v = vd(eng);
        const auto dl = weighted_distance(g, u, v);
        const auto dle = weighted_distance(ge, u, v);
        if (!dl.reachable() || !dle.reachable()) continue;
        ++compared;
        if (dle.weighted < dl.weighted - 1e-12) ++violations;
        erased_ratios.push_back(dle.weighted / (2.0 * charsum));
    }
    const double emedian = stats::quantile_type7(erased_ratios, 0.5);
    std::snprintf(detail, sizeof(detail), "violations=%zu/200 median=%.3f",
                  violations, emedian);
    report(7, "erased model",
           violations == 0 && emedian >= 0.5 && emedian <= 1.5, t7.seconds(),
           detail);
}

// Criterion 8: greedy layer ascent + hub connection.
void criterion_upper_path() {
    Timer t;
    ExperimentConfig cfg;
    cfg.experiment = "upper-path";
    cfg.n_list = {1000000};
    cfg.weight_spec = "constant(a=1)";
    cfg.percolation.b = 1.0;
    cfg.percolation.c = 0.2;
    cfg.percolation.eta = 0.5;
    cfg.ktilde = 300;
    cfg.pairs_per_graph = 25;
    cfg.replicas = 1;
    cfg.seed = 1;
    const auto res = run_upper_path_experiment(cfg);
    const double success = res.report["success_fraction"].get<double>();
    const bool dominates = res.report["profile_dominates_all"].get<bool>();
    const bool len_ok = res.report["length_ge_dl_all"].get<bool>();
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "success=%.2f dominates=%s len_ok=%s", success,
                  dominates ? "yes" : "no", len_ok ? "yes" : "no");
    report(8, "upper-path construction",
           success >= 0.8 && dominates && len_ok, t.seconds(), detail);
}

// Criterion 9: shell lower bound on the oracle suite and on large graphs.
void criterion_shell_lower_bound() {
    Timer t;
    std::size_t violations = 0;
    auto check_graph = [&](const MultiGraph& g, Vertex u, std::size_t k_max) {
        const auto dec = shells(g, u, k_max);
        double acc = 0.0;
        for (std::size_t k = 1; k < dec.shells.size(); ++k) {
            acc += dec.inter_shell_min[k - 1];
            for (Vertex x : dec.shells[k])
                if (weighted_distance(g, u, x).weighted < acc - 1e-12)
                    ++violations;
        }
    };

    auto eng = make_engine(109);
    for (int inst = 0; inst < 1000; ++inst) {
        const auto g = random_small(eng);
        std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(g.n));
        check_graph(g, vd(eng), 12);
    }

    // 50 large-graph spot checks: one random source each, the deepest
    // shell vertex only (a full-shell sweep would be quadratic)
    TailParams params;
    const auto w = parse_weight_spec("exponential(rate=1)");
    for (int s = 0; s < 50; ++s) {
        const std::size_t n = 20000;
        const auto ds = synthesize(n, params, derive_seed(9, {n, (std::uint64_t)s, 1}));
        const auto g = build(ds, w, derive_seed(9, {n, (std::uint64_t)s, 2}));
        std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(n));
        const Vertex u = vd(eng);
        const auto dec = shells(g, u, 5);
        if (dec.shells.size() < 2) continue;
        const std::size_t k = dec.shells.size() - 1;
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += dec.inter_shell_min[j];
        const Vertex x = dec.shells[k].front();
        if (weighted_distance(g, u, x).weighted < acc - 1e-12) ++violations;
    }
    char detail[48];
    std::snprintf(detail, sizeof(detail), "violations=%zu", violations);
    report(9, "shell lower bound", violations == 0, t.seconds(), detail);
}

// Criterion 10: branching process invariants plus the Davies trend.
void criterion_bp_invariants() {
    Timer t;
    const auto root = root_degree_dist(2.5);
    const auto off = pareto_offspring(2.5, 1.5, 0.5);
    const auto w = parse_weight_spec("exponential(rate=1)");
    bool invariants_ok = true;
    int mono_batches = 0;
    const int batches = 10;
    for (std::uint64_t batch = 0; batch < batches; ++batch) {
        std::vector<std::vector<double>> ys(9);
        for (std::uint64_t r = 0; r < 50; ++r) {
            const BPRun run = simulate(root, off, w, 2.5, 8, 10000000,
                                       derive_seed(77, {batch, r}));
            if (run.generation_sizes[0] != 1) invariants_ok = false;
            for (auto z : run.generation_sizes)
                if (z < 1) invariants_ok = false;
            double acc = 0.0;
            for (std::size_t k = 0; k + 1 < run.generation_sizes.size(); ++k) {
                acc += run.gen_min_weights[k];
                if (run.first_passage_front[k + 1] < acc - 1e-12)
                    invariants_ok = false;
            }
            if (run.y_norm.size() < 9) continue;
            for (int k = 0; k <= 8; ++k) ys[k].push_back(run.y_norm[k]);
        }
        bool mono = true;
        double prev = kInfDist;
        for (int k = 4; k <= 8; ++k) {
            const double s = stats::stddev(ys[k]);
            if (s > prev) mono = false;
            prev = s;
        }
        if (mono) ++mono_batches;
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "invariants=%s mono_batches=%d/%d",
                  invariants_ok ? "ok" : "violated", mono_batches, batches);
    report(10, "bp invariants",
           invariants_ok && mono_batches * 10 >= batches * 8, t.seconds(),
           detail);
}

// Criterion 11: identical config + seed produce byte-identical CSV.
void criterion_determinism() {
    Timer t;
    ExperimentConfig cfg;
    cfg.experiment = "ratio";
    cfg.n_list = {20000};
    cfg.weight_spec = "exponential(rate=1)";
    cfg.force = true;
    cfg.pairs_per_graph = 20;
    cfg.replicas = 2;
    cfg.seed = 99;
    auto render = [&](const std::string& path) {
        emit_csv(run_experiment(cfg), path);
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::remove(path.c_str());
        return buf.str();
    };
    const std::string a = render("acceptance_det_a.csv");
    const std::string b = render("acceptance_det_b.csv");
    report(11, "determinism", !a.empty() && a == b, t.seconds());
}

} // namespace

int main() {
    criterion_oracle();
    criterion_matching_uniformity();
    criterion_percolation_equality();
    criterion_post_percolation_tail();
    criterion_explosion_classifier();
    criterion_ratio_and_erased();
    criterion_upper_path();
    criterion_shell_lower_bound();
    criterion_bp_invariants();
    criterion_determinism();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
