#include "fppcm/percolation.hpp"

#include "fppcm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace {
constexpr double kHuge = std::numeric_limits<double>::infinity();
}

namespace fppcm {

void PercolationSpec::validate() const {
    if (!(b > 0.0)) throw std::invalid_argument("percolation b must be > 0");
    if (!(c > 0.0)) throw std::invalid_argument("percolation c must be > 0");
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("percolation eta must lie in (0,1)");
}

double PercolationSpec::p(double d) const {
    if (d < 1.0) throw std::invalid_argument("p(d) needs d >= 1");
    return std::exp(-c * std::pow(std::log(d), eta));
}

double threshold_xi(const PercolationSpec& spec, const WeightDist& w,
                    double d, double d2) {
    return w.ginv(spec.p(d) * spec.p(d2));
}

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void merge(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    long long components() {
        long long c = 0;
        for (std::uint32_t i = 0; i < parent.size(); ++i)
            if (find(i) == i) ++c;
        return c;
    }
};

// Edge form with an arbitrary keep-probability function of the two
// endpoint degrees; used for coin-flip mode and the broken variant.
PercolatedGraph coin_percolate(const MultiGraph& g, std::uint64_t seed,
                               const std::function<double(double, double)>& keep_prob) {
    PercolatedGraph pg;
    pg.base = &g;
    pg.kept.assign(g.edges.size(), 0);
    pg.kept_degree.assign(g.n, 0);
    auto eng = make_engine(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        const double q = keep_prob(g.degree_of(e.u), g.degree_of(e.v));
        if (unif(eng) <= q) {
            pg.kept[i] = 1;
            ++pg.kept_edges;
            ++pg.kept_degree[e.u - 1];
            ++pg.kept_degree[e.v - 1];
        }
    }
    pg.dr = pg.kept_degree;
    return pg;
}

} // namespace

PercolatedGraph edge_percolate(const MultiGraph& g, const PercolationSpec& spec,
                               const WeightDist& w, std::uint64_t seed) {
    if (!w.continuous) {
        return coin_percolate(g, seed, [&](double du, double dv) {
            return spec.p(du) * spec.p(dv);
        });
    }
    PercolatedGraph pg;
    pg.base = &g;
    pg.kept.assign(g.edges.size(), 0);
    pg.kept_degree.assign(g.n, 0);
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        const double xi = threshold_xi(spec, w, g.degree_of(e.u), g.degree_of(e.v));
        if (e.weight <= xi) {
            pg.kept[i] = 1;
            ++pg.kept_edges;
            ++pg.kept_degree[e.u - 1];
            ++pg.kept_degree[e.v - 1];
        }
    }
    pg.dr = pg.kept_degree;
    return pg;
}

PercolatedGraph half_edge_percolate(const DegreeSequence& ds,
                                    const PercolationSpec& spec,
                                    std::uint64_t seed) {
    PercolatedGraph pg;
    const std::size_t n = ds.n();
    pg.dr.assign(n, 0);
    auto eng = make_engine(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // 0 marks an artificial half-edge; the artificial vertices are leaves
    // and never enter the induced subgraph, so they need no identity.
    std::vector<Vertex> half_edges;
    half_edges.reserve(ds.total_half_edges);
    for (Vertex v = 1; v <= n; ++v) {
        const std::uint32_t d = ds.degrees[v - 1];
        const double keep = d >= 1 ? spec.p(d) : 1.0;
        for (std::uint32_t k = 0; k < d; ++k) {
            if (unif(eng) <= keep) {
                half_edges.push_back(v);
                ++pg.dr[v - 1];
            } else {
                half_edges.push_back(0);
                ++pg.artificial;
            }
        }
    }
    for (std::size_t i = half_edges.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(half_edges[i], half_edges[pick(eng)]);
    }

    pg.induced.n = n;
    for (std::size_t i = 0; i + 1 < half_edges.size(); i += 2) {
        const Vertex a = half_edges[i];
        const Vertex b = half_edges[i + 1];
        if (a != 0 && b != 0) pg.induced.edges.push_back({a, b, 0.0});
    }
    pg.induced.build_adjacency();
    pg.kept_edges = pg.induced.edges.size();
    pg.kept_degree.assign(n, 0);
    for (Vertex v = 1; v <= n; ++v) pg.kept_degree[v - 1] = pg.induced.degree_of(v);
    return pg;
}

EqualityReport equality_test(const DegreeSequence& ds,
                             const PercolationSpec& spec, const WeightDist& w,
                             std::size_t replicas, std::uint64_t seed,
                             bool broken_variant) {
    EqualityReport rep;
    rep.replicas = replicas;
    std::vector<long long> kept_a, kept_b, deg_a, deg_b, comp_a, comp_b;
    kept_a.reserve(replicas);
    kept_b.reserve(replicas);

    for (std::size_t r = 0; r < replicas; ++r) {
        MultiGraph g = build(ds, w, derive_seed(seed, {r, 1}));
        PercolatedGraph pe;
        if (broken_variant) {
            pe = coin_percolate(g, derive_seed(seed, {r, 2}),
                                [&](double du, double) {
                                    return spec.p(du) * spec.p(du);
                                });
        } else {
            pe = edge_percolate(g, spec, w, derive_seed(seed, {r, 2}));
        }
        kept_a.push_back(static_cast<long long>(pe.kept_edges));
        UnionFind ua(g.n);
        for (std::uint32_t i = 0; i < g.edges.size(); ++i)
            if (pe.kept[i]) ua.merge(g.edges[i].u - 1, g.edges[i].v - 1);
        comp_a.push_back(ua.components());
        for (auto d : pe.kept_degree) deg_a.push_back(d);

        PercolatedGraph ph = half_edge_percolate(ds, spec, derive_seed(seed, {r, 3}));
        kept_b.push_back(static_cast<long long>(ph.kept_edges));
        UnionFind ub(ds.n());
        for (const Edge& e : ph.induced.edges) ub.merge(e.u - 1, e.v - 1);
        comp_b.push_back(ub.components());
        for (auto d : ph.kept_degree) deg_b.push_back(d);
    }

    rep.kept_edge_count = stats::two_sample_chi2(kept_a, kept_b);
    rep.degree_distribution = stats::two_sample_chi2(deg_a, deg_b);
    rep.component_count = stats::two_sample_chi2(comp_a, comp_b);
    return rep;
}

double s_of_x(const PercolationSpec& spec, double x) {
    if (x < spec.b / 2.0)
        throw std::domain_error("s(x) needs x >= b/2");
    const double base = 2.0 * x / spec.b;
    return base * std::exp(2.0 * spec.c * std::pow(std::log(base), spec.eta));
}

long long kn_from_ktilde(const PercolationSpec& spec, long long ktilde) {
    if (ktilde < 2) throw std::invalid_argument("kn_from_ktilde needs ktilde >= 2");
    const double kt = static_cast<double>(ktilde);
    const double val =
        kt * spec.b * std::exp(-spec.c * std::pow(std::log(kt), spec.eta)) / 2.0;
    if (val < 2.0) return 0;
    return static_cast<long long>(std::floor(val));
}

LayerRecursion layer_recursion(long long kn, double tau, double gamma, double D,
                               double n, double alpha) {
    if (kn < 3) throw std::invalid_argument("layer recursion needs kn >= 3");
    if (D < 0.0) throw std::invalid_argument("D must be >= 0");
    const double l0 = std::log(static_cast<double>(kn));
    if (!(tau - 2.0 + D * std::pow(l0, gamma - 1.0) < 1.0))
        throw std::invalid_argument("K_n too small for D");

    LayerRecursion out;
    out.stop_threshold = std::pow(n, alpha * (tau - 2.0));
    const double log_stop = alpha * (tau - 2.0) * std::log(n);

    // Run in log space: exponents like 1/(tau-2) compound fast.
    double l = l0;
    for (int i = 0; i < 10000; ++i) {
        out.y.push_back(l < 700.0 ? std::exp(l) : kHuge);
        if (l >= log_stop) {
            out.i_max = i;
            break;
        }
        const double e = tau - 2.0 + D * std::pow(l, gamma - 1.0);
        l = l / e;
        if (i == 9999)
            throw std::runtime_error("layer recursion did not reach the stop threshold");
    }
    if (out.y.empty() || out.y.size() > 9999 + 1)
        throw std::runtime_error("layer recursion did not reach the stop threshold");
    if (static_cast<std::size_t>(out.i_max) + 1 != out.y.size())
        out.i_max = static_cast<long long>(out.y.size()) - 1;

    // delta_n = sum_j kappa_j / (tau-2+kappa_j) with kappa_j = D (log y_j)^{gamma-1}:
    // prod_j (tau-2)/e_j >= 1 - delta_n, so the closed form is a true
    // lower bound at every index simultaneously.
    double delta = 0.0;
    double lj = l0;
    for (int j = 0; j < 100000; ++j) {
        const double kappa = D * std::pow(lj, gamma - 1.0);
        const double dj = kappa / (tau - 2.0 + kappa);
        delta += dj;
        if (dj < 1e-14 || delta >= 1.0) break;
        lj = lj / (tau - 2.0 + kappa);
    }
    out.delta_n = std::min(delta, 1.0);

    const double inv = 1.0 / (tau - 2.0);
    for (std::size_t i = 0; i < out.y.size(); ++i) {
        const double log_cf =
            (1.0 - out.delta_n) * std::pow(inv, static_cast<double>(i)) * l0;
        out.closed_form.push_back(log_cf < 700.0 ? std::exp(log_cf) : kHuge);
    }
    return out;
}

double tail_test_theta(const PercolationSpec& spec) {
    return std::max(spec.b / 2.0 * std::exp(std::pow(4.0 * spec.c, 1.0 - spec.eta)),
                    4.0 * std::log(8.0));
}

TailPreservationReport post_percolation_tail_test(const DegreeSequence& ds,
                                                  const TailParams& params,
                                                  const PercolationSpec& spec,
                                                  std::size_t replicas,
                                                  std::uint64_t seed) {
    TailPreservationReport rep;
    rep.theta = tail_test_theta(spec);
    const double cap = std::pow(static_cast<double>(ds.n()), params.alpha);
    const double n = static_cast<double>(ds.n());

    for (std::size_t r = 0; r < replicas; ++r) {
        auto eng = make_engine(derive_seed(seed, {r}));
        std::vector<double> dr(ds.n());
        for (std::size_t i = 0; i < ds.n(); ++i) {
            const std::uint32_t d = ds.degrees[i];
            if (d == 0) {
                dr[i] = 0.0;
                continue;
            }
            std::binomial_distribution<std::uint32_t> bin(d, spec.p(d));
            dr[i] = static_cast<double>(bin(eng));
        }
        rep.hill_estimates.push_back(stats::hill_estimator(dr, rep.theta, cap));

        // Thinning never raises a degree, so the percolated tail sits
        // below the original one; assert it on the same grid anyway.
        for (double x = rep.theta; x <= cap; x *= 1.25) {
            std::size_t above_r = 0, above = 0;
            for (std::size_t i = 0; i < ds.n(); ++i) {
                if (dr[i] > x) ++above_r;
                if (ds.degrees[i] > x) ++above;
            }
            if (static_cast<double>(above_r) / n > static_cast<double>(above) / n)
                rep.upper_envelope_ok = false;
        }
    }
    for (double h : rep.hill_estimates)
        if (std::isfinite(h) && std::fabs(h - (params.tau - 1.0)) <= 0.4)
            ++rep.hill_in_window;
    return rep;
}

OriginDegreeReport origin_degree_bound_test(const PercolationSpec& spec,
                                            double tau, long long ktilde,
                                            long long x, std::size_t trials,
                                            std::uint64_t seed) {
    if (x < 30) throw std::invalid_argument("origin degree test needs x >= 30");
    OriginDegreeReport rep;
    rep.kn = kn_from_ktilde(spec, ktilde);
    rep.forward_bound = 10.0 * std::exp(-static_cast<double>(rep.kn) / 4.0);
    rep.reverse_bound = 10.0 * std::exp(-static_cast<double>(x) / 4.0);

    auto eng = make_engine(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto pareto_above = [&](double floor_val) {
        // P(D >= t | D >= floor) = (t/floor)^{-(tau-1)}, discretized down.
        double u = unif(eng);
        while (u <= 0.0) u = unif(eng);
        const double t = floor_val * std::pow(u, -1.0 / (tau - 1.0));
        return std::max(floor_val, std::floor(std::min(t, 1e12)));
    };

    // Forward: original degree >= ktilde, count d^r < K_n.
    std::size_t fwd_fail = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double d = pareto_above(static_cast<double>(ktilde));
        std::binomial_distribution<long long> bin(static_cast<long long>(d),
                                                  spec.p(d));
        if (bin(eng) < rep.kn) ++fwd_fail;
    }
    rep.forward_rate = static_cast<double>(fwd_fail) / static_cast<double>(trials);

    // Reverse: full-model degree, condition on d^r <= x, count d >= s(x).
    const double sx = s_of_x(spec, static_cast<double>(x));
    std::size_t cond = 0, rev_fail = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double d = pareto_above(2.0);
        std::binomial_distribution<long long> bin(static_cast<long long>(d),
                                                  spec.p(d));
        if (bin(eng) <= x) {
            ++cond;
            if (d >= sx) ++rev_fail;
        }
    }
    rep.reverse_rate =
        cond > 0 ? static_cast<double>(rev_fail) / static_cast<double>(cond) : 0.0;
    rep.pass = rep.forward_rate <= rep.forward_bound &&
               rep.reverse_rate <= rep.reverse_bound;
    return rep;
}

} // namespace fppcm
