#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fppcm {

// Edge-weight distribution given by its CDF and generalized inverse
// F^{(-1)}(y) = inf{x : F(x) >= y}. quantile_exp_neg(w) = F^{(-1)}(e^{-w})
// is kept separate because the explosion criterion evaluates the inverse
// at arguments like e^{-e^k} that underflow double precision.
struct WeightDist {
    std::string name;
    std::map<std::string, double> family_params;
    bool continuous = true;
    bool finite_mean_known = false;
    bool finite_mean = true;

    std::function<double(double)> cdf;
    std::function<double(double)> ginv;
    std::function<double(double)> quantile_exp_neg;

    // Draws one sample by inverse transform.
    double sample(double u01) const { return ginv(u01); }
};

struct ExplosionVerdict {
    enum class Status { explosive, non_explosive, inconclusive };
    Status status = Status::inconclusive;
    bool explosive = false;
    std::vector<double> partial_sums; // of F^{(-1)}(e^{-e^k}), k = 1..k_max
    std::vector<double> terms;
    int k_max = 0;
};

struct BudgetResult {
    enum class Status { ok, dominated };
    Status status = Status::ok;
    long long z = 0;    // integer step count
    double z_real = 0.0; // exact solution of the defining relation
};

// Families: exponential(rate), uniform(a,b), constant(a),
// shifted(offset,rate) = offset + Exp(rate), double_exp(beta,C,c) with
// F(t) = exp(-C exp(c / t^beta)) near 0, remaining mass at t = 1.
WeightDist make_family(const std::string& name,
                       const std::map<std::string, double>& params);

// Parses `exponential(rate=1.0)`-style strings.
WeightDist parse_weight_spec(const std::string& spec);

// Truncated evaluation of the explosion criterion
// sum_k F^{(-1)}(e^{-e^k}): divergence means non-explosive weights.
ExplosionVerdict classify_explosive(const WeightDist& w, int k_max = 40,
                                    double tol = 1e-12);

// sum_{i=1}^{floor(log log n / |log(tau-2)|)} F^{(-1)}(e^{-(1/(tau-2))^i}),
// half of the first-order weighted distance (the ratio law carries the
// factor 2).
double characteristic_sum(const WeightDist& w, double n, double tau);
long long characteristic_term_count(double n, double tau);

// z = F^{(-1)}(1/N^{1+xi}); P(min of N i.i.d. > z) >= 1 - N^{-xi}.
// degenerate = true flags F(z) = 1 (point-mass boundary, guarantee vacuous).
struct MinTailThreshold {
    double z = 0.0;
    bool degenerate = false;
};
MinTailThreshold min_tail_threshold(const WeightDist& w, long long N, double xi);

// Number of i.i.d. weight steps whose sum stays below a_m whp: a_m^delta
// for finite-mean weights, else the solution of z g^{(-1)}(z^{1+eps2}) =
// a_m^{1-delta} with g(x) = 1/(1-F(x)).
BudgetResult budget_steps(const WeightDist& w, double a_m, double delta,
                          double eps2);

// Numeric finite-mean probe: integral of 1-F over [0, 1e8].
bool has_finite_mean(const WeightDist& w);

} // namespace fppcm
