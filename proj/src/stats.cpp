#include "fppcm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fppcm::stats {

double quantile_type7(std::vector<double> xs, double p) {
    if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    if (p <= 0.0) return xs.front();
    if (p >= 1.0) return xs.back();
    const double h = (static_cast<double>(xs.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, xs.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p domain");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi_square_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    if (x < dof + 1.0) return 1.0 - gamma_p(dof / 2.0, x / 2.0);
    return gamma_q_cf(dof / 2.0, x / 2.0);
}

Chi2Result two_sample_chi2(const std::vector<long long>& a,
                           const std::vector<long long>& b) {
    Chi2Result res;
    if (a.empty() || b.empty()) return res;
    std::map<long long, std::pair<double, double>> counts;
    for (long long v : a) counts[v].first += 1.0;
    for (long long v : b) counts[v].second += 1.0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    // Merge adjacent buckets until every expected cell count is >= 5.
    std::vector<std::pair<double, double>> merged;
    std::pair<double, double> acc{0.0, 0.0};
    auto expected_ok = [&](const std::pair<double, double>& cell) {
        const double tot = cell.first + cell.second;
        return tot * na / (na + nb) >= 5.0 && tot * nb / (na + nb) >= 5.0;
    };
    for (const auto& [value, cell] : counts) {
        (void)value;
        acc.first += cell.first;
        acc.second += cell.second;
        if (expected_ok(acc)) {
            merged.push_back(acc);
            acc = {0.0, 0.0};
        }
    }
    if (acc.first + acc.second > 0.0) {
        if (!merged.empty()) {
            merged.back().first += acc.first;
            merged.back().second += acc.second;
        } else {
            merged.push_back(acc);
        }
    }
    if (merged.size() < 2) {
        res.buckets = merged.size();
        return res; // indistinguishable by construction
    }
    double stat = 0.0;
    for (const auto& [ca, cb] : merged) {
        const double tot = ca + cb;
        const double ea = tot * na / (na + nb);
        const double eb = tot * nb / (na + nb);
        stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
    }
    res.statistic = stat;
    res.buckets = merged.size();
    res.dof = static_cast<double>(merged.size() - 1);
    res.p_value = chi_square_sf(stat, res.dof);
    return res;
}

double hill_estimator(const std::vector<double>& xs, double threshold,
                      double cap) {
    std::vector<double> tail;
    for (double x : xs)
        if (x >= threshold && x <= cap) tail.push_back(x);
    if (tail.size() < 10) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : tail) s += std::log(x / threshold);
    return static_cast<double>(tail.size()) / s;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double mx = mean(xs), my = mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

} // namespace fppcm::stats
