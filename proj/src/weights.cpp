#include "fppcm/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fppcm {

namespace {

double get_param(const std::map<std::string, double>& params,
                 const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

WeightDist make_exponential(double rate) {
    if (rate <= 0.0) throw std::invalid_argument("exponential rate must be > 0");
    WeightDist w;
    w.name = "exponential";
    w.family_params = {{"rate", rate}};
    w.continuous = true;
    w.finite_mean_known = true;
    w.finite_mean = true;
    w.cdf = [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
    w.ginv = [rate](double y) { return -std::log1p(-y) / rate; };
    w.quantile_exp_neg = [rate](double m) {
        const double y = std::exp(-m);
        return y > 0.0 ? -std::log1p(-y) / rate : 0.0;
    };
    return w;
}

WeightDist make_uniform(double a, double b) {
    if (b <= a) throw std::invalid_argument("uniform needs b > a");
    WeightDist w;
    w.name = "uniform";
    w.family_params = {{"a", a}, {"b", b}};
    w.continuous = true;
    w.finite_mean_known = true;
    w.finite_mean = true;
    w.cdf = [a, b](double x) {
        return std::clamp((x - a) / (b - a), 0.0, 1.0);
    };
    w.ginv = [a, b](double y) { return a + (b - a) * y; };
    w.quantile_exp_neg = [a, b](double m) { return a + (b - a) * std::exp(-m); };
    return w;
}

WeightDist make_constant(double a) {
    if (a < 0.0) throw std::invalid_argument("constant weight must be >= 0");
    WeightDist w;
    w.name = "constant";
    w.family_params = {{"a", a}};
    w.continuous = false;
    w.finite_mean_known = true;
    w.finite_mean = true;
    w.cdf = [a](double x) { return x >= a ? 1.0 : 0.0; };
    w.ginv = [a](double) { return a; };
    w.quantile_exp_neg = [a](double) { return a; };
    return w;
}

WeightDist make_shifted(double offset, double rate) {
    if (rate <= 0.0 || offset <= 0.0)
        throw std::invalid_argument("shifted needs offset > 0 and rate > 0");
    WeightDist w;
    w.name = "shifted";
    w.family_params = {{"offset", offset}, {"rate", rate}};
    w.continuous = true;
    w.finite_mean_known = true;
    w.finite_mean = true;
    w.cdf = [offset, rate](double x) {
        return x <= offset ? 0.0 : -std::expm1(-rate * (x - offset));
    };
    w.ginv = [offset, rate](double y) { return offset - std::log1p(-y) / rate; };
    w.quantile_exp_neg = [offset, rate](double m) {
        const double y = std::exp(-m);
        return offset + (y > 0.0 ? -std::log1p(-y) / rate : 0.0);
    };
    return w;
}

// F(t) = exp(-C exp(c / t^beta)) on (0, 1); the remaining mass sits at
// t = 1 so the distribution is proper. Only the behaviour near 0 matters
// for explosion: F^{(-1)}(y) = (c / log(log(1/y)/C))^{1/beta}.
WeightDist make_double_exp(double beta, double C, double c) {
    if (beta <= 0.0 || C <= 0.0 || c <= 0.0)
        throw std::invalid_argument("double_exp needs beta, C, c > 0");
    WeightDist w;
    w.name = "double_exp";
    w.family_params = {{"beta", beta}, {"C", C}, {"c", c}};
    w.continuous = false; // atom at t = 1
    w.finite_mean_known = true;
    w.finite_mean = true;
    const double mass_at_cut = std::exp(-C * std::exp(c)); // F(1-)
    w.cdf = [beta, C, c, mass_at_cut](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::exp(-C * std::exp(c / std::pow(x, beta)));
    };
    auto inv_log = [beta, C, c](double log_one_over_y) {
        // log(1/y) >= C e^c here, so the inner log is >= c > 0.
        return std::pow(c / std::log(log_one_over_y / C), 1.0 / beta);
    };
    w.ginv = [mass_at_cut, inv_log](double y) {
        if (y <= 0.0) throw std::invalid_argument("ginv needs y in (0,1]");
        if (y > mass_at_cut) return 1.0;
        return inv_log(std::log(1.0 / y));
    };
    w.quantile_exp_neg = [mass_at_cut, inv_log, C, c](double m) {
        if (m < C * std::exp(c)) return 1.0; // e^{-m} > F(1-)
        return inv_log(m);
    };
    return w;
}

} // namespace

WeightDist make_family(const std::string& name,
                       const std::map<std::string, double>& params) {
    if (name == "exponential")
        return make_exponential(get_param(params, "rate", 1.0));
    if (name == "uniform")
        return make_uniform(get_param(params, "a", 0.0), get_param(params, "b", 1.0));
    if (name == "constant") return make_constant(get_param(params, "a", 1.0));
    if (name == "shifted")
        return make_shifted(get_param(params, "offset", 1.0),
                            get_param(params, "rate", 1.0));
    if (name == "double_exp")
        return make_double_exp(get_param(params, "beta", 1.0),
                               get_param(params, "C", 1.0),
                               get_param(params, "c", 1.0));
    throw std::invalid_argument("unknown weight family: " + name);
}

WeightDist parse_weight_spec(const std::string& spec) {
    const auto open = spec.find('(');
    std::string name = spec.substr(0, open);
    // trim
    while (!name.empty() && (name.front() == ' ')) name.erase(name.begin());
    while (!name.empty() && (name.back() == ' ')) name.pop_back();
    std::map<std::string, double> params;
    if (open != std::string::npos) {
        const auto close = spec.rfind(')');
        if (close == std::string::npos || close < open)
            throw std::invalid_argument("malformed weight spec: " + spec);
        std::string inner = spec.substr(open + 1, close - open - 1);
        std::size_t pos = 0;
        while (pos < inner.size()) {
            auto comma = inner.find(',', pos);
            if (comma == std::string::npos) comma = inner.size();
            std::string kv = inner.substr(pos, comma - pos);
            const auto eq = kv.find('=');
            if (eq != std::string::npos) {
                std::string key = kv.substr(0, eq);
                std::erase(key, ' ');
                params[key] = std::stod(kv.substr(eq + 1));
            } else {
                std::string trimmed = kv;
                std::erase(trimmed, ' ');
                if (!trimmed.empty())
                    throw std::invalid_argument("weight params must be key=value: " + kv);
            }
            pos = comma + 1;
        }
    }
    return make_family(name, params);
}

ExplosionVerdict classify_explosive(const WeightDist& w, int k_max, double tol) {
    if (k_max < 10) throw std::invalid_argument("k_max must be >= 10");
    ExplosionVerdict v;
    v.k_max = k_max;
    double sum = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        const double term = w.quantile_exp_neg(std::exp(static_cast<double>(k)));
        v.terms.push_back(term);
        sum += term;
        v.partial_sums.push_back(sum);
    }

    // Fast exit: terms vanished below tolerance and the remaining tail is
    // bounded by a geometric series with the observed ratio.
    const double last = v.terms.back();
    if (last < tol) {
        const double prev = v.terms[v.terms.size() - 2];
        const double ratio = prev > 0.0 ? last / prev : 0.0;
        if (ratio < 0.5 && last / (1.0 - ratio) < tol) {
            v.status = ExplosionVerdict::Status::explosive;
            v.explosive = true;
            return v;
        }
    }

    // Otherwise estimate the polynomial decay exponent rho of the terms in
    // k by least squares on log t_k vs log k over the second half of the
    // grid. sum k^{-rho} converges iff rho > 1; the margin absorbs
    // finite-k curvature.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (int k = k_max / 2; k <= k_max; ++k) {
        const double t = v.terms[static_cast<std::size_t>(k - 1)];
        if (t <= 0.0) continue;
        const double x = std::log(static_cast<double>(k));
        const double y = std::log(t);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 3) {
        // Terms hit exact zero without passing the geometric test.
        v.status = ExplosionVerdict::Status::explosive;
        v.explosive = true;
        return v;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    const double slope = denom != 0.0
                             ? (static_cast<double>(m) * sxy - sx * sy) / denom
                             : 0.0;
    const double rho = -slope;
    const double boundary = 1.15;
    if (rho > boundary) {
        v.status = ExplosionVerdict::Status::explosive;
        v.explosive = true;
    } else {
        v.status = ExplosionVerdict::Status::non_explosive;
        v.explosive = false;
    }
    return v;
}

long long characteristic_term_count(double n, double tau) {
    if (!(n >= 16.0))
        throw std::invalid_argument("characteristic sum needs n >= 16");
    if (!(tau > 2.0 && tau < 3.0))
        throw std::invalid_argument("tau must lie in (2,3)");
    return static_cast<long long>(
        std::floor(std::log(std::log(n)) / std::fabs(std::log(tau - 2.0))));
}

double characteristic_sum(const WeightDist& w, double n, double tau) {
    const long long imax = characteristic_term_count(n, tau);
    double sum = 0.0;
    for (long long i = 1; i <= imax; ++i) {
        sum += w.quantile_exp_neg(
            std::pow(1.0 / (tau - 2.0), static_cast<double>(i)));
    }
    return sum;
}

MinTailThreshold min_tail_threshold(const WeightDist& w, long long N, double xi) {
    if (N < 1 || xi <= 0.0)
        throw std::invalid_argument("min_tail_threshold needs N >= 1, xi > 0");
    MinTailThreshold r;
    r.z = w.ginv(std::pow(static_cast<double>(N), -(1.0 + xi)));
    r.degenerate = w.cdf(r.z) >= 1.0;
    return r;
}

bool has_finite_mean(const WeightDist& w) {
    if (w.finite_mean_known) return w.finite_mean;
    // Integrate 1-F on a geometric grid; converged when the last decade
    // contributes a negligible fraction.
    double total = 0.0;
    double lo = 0.0;
    double decade = 0.0;
    for (double hi = 1.0; hi <= 1e8; hi *= 2.0) {
        const double mid = 0.5 * (lo + hi);
        const double seg = (1.0 - w.cdf(mid)) * (hi - lo);
        total += seg;
        decade = seg;
        lo = hi;
    }
    return decade < 1e-6 * std::max(total, 1e-300);
}

BudgetResult budget_steps(const WeightDist& w, double a_m, double delta,
                          double eps2) {
    if (!(a_m > 1.0)) throw std::invalid_argument("budget_steps needs a_m > 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");
    BudgetResult r;
    if (has_finite_mean(w)) {
        r.z_real = std::pow(a_m, delta);
        r.z = static_cast<long long>(std::floor(r.z_real));
        return r;
    }
    // Infinite mean: solve z * ginv(1 - z^{-(1+eps2)}) = a_m^{1-delta}.
    const double target = std::pow(a_m, 1.0 - delta);
    auto lhs = [&](double z) {
        const double y = 1.0 - std::pow(z, -(1.0 + eps2));
        return z * w.ginv(std::max(y, 0.0));
    };
    double lo = 1.0, hi = 1.0;
    while (lhs(hi) < target) {
        hi *= 2.0;
        if (hi > 1e15) {
            r.status = BudgetResult::Status::dominated;
            return r;
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lhs(mid) < target ? lo : hi) = mid;
    }
    r.z_real = lo;
    r.z = static_cast<long long>(std::floor(lo));
    return r;
}

} // namespace fppcm
