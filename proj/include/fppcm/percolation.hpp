#pragma once

#include "fppcm/degrees.hpp"
#include "fppcm/graph.hpp"
#include "fppcm/stats.hpp"
#include "fppcm/weights.hpp"

#include <cstdint>
#include <vector>

namespace fppcm {

// Degree-dependent retention p(d) = exp(-c (log d)^eta); the lower-bound
// constant b enters the derived quantities s(x) and K_n.
struct PercolationSpec {
    double b = 1.0;
    double c = 0.5;
    double eta = 0.5;

    void validate() const;
    double p(double d) const;
};

struct PercolatedGraph {
    const MultiGraph* base = nullptr; // edge form only
    std::vector<char> kept;           // edge form: flag per base edge
    MultiGraph induced;               // half-edge form: kept graph on [n]
    // Kept half-edges per vertex: binomial thinning counts in the
    // half-edge form, kept-graph degrees in the edge form.
    std::vector<std::uint32_t> dr;
    std::vector<std::uint32_t> kept_degree; // degree in the resulting graph
    std::uint64_t artificial = 0;           // half-edge form only
    std::uint64_t kept_edges = 0;

    const MultiGraph& graph() const { return base ? *base : induced; }
    bool edge_kept(std::uint32_t edge_index) const {
        return base ? kept[edge_index] != 0 : true;
    }
};

struct LayerRecursion {
    std::vector<double> y;           // y_0 = K_n, ..., y_{i_max}
    long long i_max = 0;             // first index with y_i >= n^{alpha(tau-2)}
    std::vector<double> closed_form; // (K_n^{1-delta_n})^{(1/(tau-2))^i}
    double delta_n = 0.0;
    double stop_threshold = 0.0;     // n^{alpha(tau-2)}
};

struct EqualityReport {
    stats::Chi2Result kept_edge_count;
    stats::Chi2Result degree_distribution;
    stats::Chi2Result component_count;
    std::size_t replicas = 0;
};

struct TailPreservationReport {
    std::vector<double> hill_estimates; // one per replica
    double theta = 0.0;                 // lower end of the tested range
    bool upper_envelope_ok = true;      // 1-F^r <= 1-F pointwise, all replicas
    std::size_t hill_in_window = 0;     // |hill - (tau-1)| <= 0.4
};

struct OriginDegreeReport {
    double forward_rate = 0.0;  // P(d^r < K_n | d >= Ktilde)
    double forward_bound = 0.0; // 10 e^{-K_n/4}
    double reverse_rate = 0.0;  // P(d >= s(x) | d^r <= x)
    double reverse_bound = 0.0; // 10 e^{-x/4}
    long long kn = 0;
    bool pass = false;
};

// xi(d, d') = F^{(-1)}(p(d) p(d')); non-increasing in both arguments.
double threshold_xi(const PercolationSpec& spec, const WeightDist& w,
                    double d, double d2);

// Keeps edge (x,y) iff L_{x,y} <= xi(d_x, d_y) for continuous weight
// families; falls back to independent coin flips with probability
// p(d_x)p(d_y) for non-continuous families (seed used only then).
PercolatedGraph edge_percolate(const MultiGraph& g, const PercolationSpec& spec,
                               const WeightDist& w, std::uint64_t seed = 0);

// Half-edge form: keep each half-edge of v with probability p(d_v),
// replace removals by artificial degree-1 vertices, match everything
// uniformly, return the induced subgraph on the original vertices.
PercolatedGraph half_edge_percolate(const DegreeSequence& ds,
                                    const PercolationSpec& spec,
                                    std::uint64_t seed);

// Monte Carlo comparison of the two percolation forms on summary
// statistics. broken_variant replaces the edge-keep probability by
// p(d_x)^2 as a negative control.
EqualityReport equality_test(const DegreeSequence& ds,
                             const PercolationSpec& spec, const WeightDist& w,
                             std::size_t replicas, std::uint64_t seed,
                             bool broken_variant = false);

// s(x) = (2x/b) e^{2c (log(2x/b))^eta}, defined for x >= b/2.
double s_of_x(const PercolationSpec& spec, double x);

// K_n = floor(Ktilde b e^{-c (log Ktilde)^eta} / 2); 0 with a warning
// when the formula lands below 2.
long long kn_from_ktilde(const PercolationSpec& spec, long long ktilde);

// y_0 = K_n, y_{i+1} = y_i^{1/(tau-2+D (log y_i)^{gamma-1})}, run until
// y_i >= n^{alpha(tau-2)}; also returns the closed-form lower bound with
// delta_n accumulated from the recursion itself.
LayerRecursion layer_recursion(long long kn, double tau, double gamma, double D,
                               double n, double alpha);

// theta = max{(b/2) e^{(4c)^{1-eta}}, 4 log 8}.
double tail_test_theta(const PercolationSpec& spec);

// Binomial thinning of a synthesized degree sequence; Hill estimates of
// the percolated tail and the pointwise upper envelope check.
TailPreservationReport post_percolation_tail_test(const DegreeSequence& ds,
                                                  const TailParams& params,
                                                  const PercolationSpec& spec,
                                                  std::size_t replicas,
                                                  std::uint64_t seed);

// Monte Carlo check of both conditional degree bounds (forward: original
// degree >= Ktilde keeps at least K_n half-edges; reverse: small
// percolated degree implies small original degree).
OriginDegreeReport origin_degree_bound_test(const PercolationSpec& spec,
                                            double tau, long long ktilde,
                                            long long x, std::size_t trials,
                                            std::uint64_t seed);

} // namespace fppcm
