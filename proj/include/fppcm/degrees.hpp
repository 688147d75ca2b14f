#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fppcm {

// Power-law tail parameters: P(D > x) is sandwiched between
// x^{-(tau-1)} e^{+-C (log x)^gamma} for x up to n^alpha.
struct TailParams {
    double tau = 2.5;    // in (2,3)
    double gamma = 0.5;  // in (0,1)
    double C = 0.2;      // > 0
    double alpha = 0.9;  // > 1/2 and < 1/((tau-2)(tau-1))

    void validate() const; // throws std::invalid_argument
};

struct DegreeSequence {
    std::vector<std::uint32_t> degrees;
    std::uint64_t total_half_edges = 0; // H_n, even after parity fix

    std::size_t n() const { return degrees.size(); }
    std::uint32_t max_degree() const;

    // Wraps an explicit degree vector. The parity fix (one extra
    // half-edge on the last vertex when the sum is odd) is optional so
    // distributional quantities can be computed on the raw sequence.
    static DegreeSequence from_degrees(std::vector<std::uint32_t> degrees,
                                       bool parity_fix = true);
};

struct SizeBiasedDist {
    std::map<std::uint32_t, double> probabilities; // k >= 1 -> P(B = k)
    std::uint32_t support_max = 0;

    double mean() const;
};

struct TailBoundRow {
    double x = 0.0;
    double tail = 0.0;  // 1 - F_n(x)
    double lower = 0.0; // x^{-(tau-1)} e^{-C(log x)^gamma}
    double upper = 0.0;
    bool informative = true; // x < 2 is flagged uninformative
    bool violated = false;
};

struct TailBoundReport {
    std::vector<TailBoundRow> rows;
    std::size_t violations = 0;
};

// Draws n i.i.d. degrees from the discretized Pareto-type law
// P(D >= x) = min(1, (x/2)^{-(tau-1)}), truncated at ceil(n^alpha) and
// floored at 2, then applies the parity fix to the last vertex.
DegreeSequence synthesize(std::size_t n, const TailParams& params,
                          std::uint64_t seed);

// 1 - F_n(x) = #{v : d_v > x} / n.
double empirical_tail(const DegreeSequence& ds, double x);

// Checks the power-law envelope on a geometric grid (ratio 1.25) from
// x = 2 up to n^alpha. The caller inflates C for finite-n slack.
TailBoundReport check_tail_bounds(const DegreeSequence& ds,
                                  const TailParams& params);

// P(B = k) = (k+1) #{v : d_v = k+1} / H_n, computed on the raw sequence.
SizeBiasedDist size_biased(const DegreeSequence& ds);

// Total variation distance between two discrete distributions.
double tv_distance(const std::map<std::uint32_t, double>& p,
                   const std::map<std::uint32_t, double>& q);

// Text export/import: `# n=<n> tau=<tau>` header, one degree per line.
void export_degrees(const DegreeSequence& ds, double tau, const std::string& path);
DegreeSequence import_degrees(const std::string& path);

} // namespace fppcm
