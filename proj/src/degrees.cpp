#include "fppcm/degrees.hpp"

#include "fppcm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fppcm {

void TailParams::validate() const {
    if (!(tau > 2.0 && tau < 3.0))
        throw std::invalid_argument("tau must lie in (2,3)");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0,1)");
    if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
    if (!(alpha > 0.5))
        throw std::invalid_argument("alpha must exceed 1/2");
    if (!(alpha < 1.0 / ((tau - 2.0) * (tau - 1.0))))
        throw std::invalid_argument("alpha must be below 1/((tau-2)(tau-1))");
}

std::uint32_t DegreeSequence::max_degree() const {
    std::uint32_t m = 0;
    for (auto d : degrees) m = std::max(m, d);
    return m;
}

DegreeSequence DegreeSequence::from_degrees(std::vector<std::uint32_t> degrees,
                                            bool parity_fix) {
    if (degrees.empty()) throw std::invalid_argument("empty degree sequence");
    DegreeSequence ds;
    ds.degrees = std::move(degrees);
    std::uint64_t h = 0;
    for (auto d : ds.degrees) {
        if (d == 0) throw std::invalid_argument("zero degree in sequence");
        h += d;
    }
    if (parity_fix && (h % 2 != 0)) {
        ds.degrees.back() += 1;
        h += 1;
    }
    ds.total_half_edges = h;
    return ds;
}

DegreeSequence synthesize(std::size_t n, const TailParams& params,
                          std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("need at least 2 vertices");
    params.validate();
    const double cap =
        std::ceil(std::pow(static_cast<double>(n), params.alpha));
    auto eng = make_engine(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::uint32_t> degrees(n);
    const double inv_exp = -1.0 / (params.tau - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        double u = unif(eng);
        while (u <= 0.0) u = unif(eng);
        double d = std::floor(2.0 * std::pow(u, inv_exp));
        d = std::min(d, cap);
        degrees[i] = static_cast<std::uint32_t>(std::max(2.0, d));
    }
    return DegreeSequence::from_degrees(std::move(degrees), true);
}

double empirical_tail(const DegreeSequence& ds, double x) {
    std::size_t count = 0;
    for (auto d : ds.degrees)
        if (static_cast<double>(d) > x) ++count;
    return static_cast<double>(count) / static_cast<double>(ds.n());
}

TailBoundReport check_tail_bounds(const DegreeSequence& ds,
                                  const TailParams& params) {
    TailBoundReport report;
    const double xmax =
        std::pow(static_cast<double>(ds.n()), params.alpha);
    for (double x = 1.0; x <= xmax; x *= 1.25) {
        TailBoundRow row;
        row.x = x;
        row.tail = empirical_tail(ds, x);
        const double lx = std::log(x);
        const double envelope = params.C * std::pow(std::max(lx, 0.0), params.gamma);
        row.lower = std::pow(x, -(params.tau - 1.0)) * std::exp(-envelope);
        row.upper = std::pow(x, -(params.tau - 1.0)) * std::exp(envelope);
        row.informative = x >= 2.0;
        // The empirical tail moves in steps of 1/n, so a bound is only
        // meaningfully crossed when the gap is worth a few vertices;
        // otherwise a single outlier (or none where < 1 is expected)
        // registers as a violation.
        const double nn = static_cast<double>(ds.n());
        if (row.informative)
            row.violated = (row.tail < row.lower &&
                            nn * (row.lower - row.tail) >= 5.0) ||
                           (row.tail > row.upper &&
                            nn * (row.tail - row.upper) >= 5.0);
        if (row.violated) ++report.violations;
        report.rows.push_back(row);
    }
    return report;
}

SizeBiasedDist size_biased(const DegreeSequence& ds) {
    std::uint64_t h = 0;
    for (auto d : ds.degrees) h += d;
    if (h == 0) throw std::invalid_argument("H_n must be positive");
    std::map<std::uint32_t, std::uint64_t> counts;
    for (auto d : ds.degrees) counts[d] += 1;
    SizeBiasedDist dist;
    for (const auto& [d, cnt] : counts) {
        const std::uint32_t k = d - 1;
        dist.probabilities[k] = static_cast<double>(d) *
                                static_cast<double>(cnt) /
                                static_cast<double>(h);
        dist.support_max = std::max(dist.support_max, k);
    }
    return dist;
}

double SizeBiasedDist::mean() const {
    double m = 0.0;
    for (const auto& [k, p] : probabilities) m += static_cast<double>(k) * p;
    return m;
}

double tv_distance(const std::map<std::uint32_t, double>& p,
                   const std::map<std::uint32_t, double>& q) {
    double sum = 0.0;
    auto it_p = p.begin();
    auto it_q = q.begin();
    while (it_p != p.end() || it_q != q.end()) {
        if (it_q == q.end() || (it_p != p.end() && it_p->first < it_q->first)) {
            sum += std::fabs(it_p->second);
            ++it_p;
        } else if (it_p == p.end() || it_q->first < it_p->first) {
            sum += std::fabs(it_q->second);
            ++it_q;
        } else {
            sum += std::fabs(it_p->second - it_q->second);
            ++it_p;
            ++it_q;
        }
    }
    return sum / 2.0;
}

void export_degrees(const DegreeSequence& ds, double tau,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# n=" << ds.n() << " tau=" << tau << "\n";
    for (auto d : ds.degrees) out << d << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

DegreeSequence import_degrees(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<std::uint32_t> degrees;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        degrees.push_back(static_cast<std::uint32_t>(std::stoul(line)));
    }
    // Already parity-fixed on export.
    return DegreeSequence::from_degrees(std::move(degrees), false);
}

} // namespace fppcm
