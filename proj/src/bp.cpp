#include "fppcm/bp.hpp"

#include "fppcm/rng.hpp"
#include "fppcm/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fppcm {

namespace {

double draw_u01(std::mt19937_64& eng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(eng);
    while (u <= 0.0) u = unif(eng);
    return u;
}

constexpr double kCapValue = 1e15; // sampler output cap, far above node caps

} // namespace

OffspringDist constant_offspring(std::uint64_t k) {
    OffspringDist d;
    d.name = "constant(" + std::to_string(k) + ")";
    d.sample = [k](std::mt19937_64&) { return k; };
    return d;
}

OffspringDist root_degree_dist(double tau) {
    if (!(tau > 2.0 && tau < 3.0))
        throw std::invalid_argument("tau must lie in (2,3)");
    OffspringDist d;
    d.name = "root_pareto";
    d.sample = [tau](std::mt19937_64& eng) {
        const double u = draw_u01(eng);
        const double x = 2.0 * std::pow(u, -1.0 / (tau - 1.0));
        return static_cast<std::uint64_t>(
            std::max(2.0, std::floor(std::min(x, kCapValue))));
    };
    return d;
}

OffspringDist pareto_offspring(double tau, double Cstar, double gamma,
                               std::uint64_t cap) {
    if (!(tau > 2.0 && tau < 3.0))
        throw std::invalid_argument("tau must lie in (2,3)");
    if (Cstar < 0.0 || !(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("pareto_offspring needs Cstar >= 0, gamma in (0,1)");
    OffspringDist d;
    d.name = "pareto_offspring";
    const double a = tau - 2.0;
    d.sample = [a, Cstar, gamma, cap](std::mt19937_64& eng) {
        const double u = draw_u01(eng);
        const double target = -std::log(u); // solve a t + Cstar t^gamma = target
        double x;
        if (Cstar == 0.0) {
            x = std::exp(std::min(target / a, std::log(kCapValue)));
        } else {
            double lo = 0.0, hi = std::min(target / a, std::log(kCapValue));
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                (a * mid + Cstar * std::pow(mid, gamma) < target ? lo : hi) = mid;
            }
            x = std::exp(lo);
        }
        std::uint64_t b = static_cast<std::uint64_t>(std::max(1.0, std::floor(x)));
        if (cap > 0) b = std::min(b, cap);
        return b;
    };
    return d;
}

BPRun simulate(const OffspringDist& root, const OffspringDist& offspring,
               const WeightDist& w, double tau, int k_max,
               std::uint64_t node_cap, std::uint64_t seed) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (node_cap < 2) throw std::invalid_argument("node_cap too small");
    BPRun run;
    run.tau = tau;
    auto eng = make_engine(seed);

    std::vector<double> arrivals = {0.0};
    run.generation_sizes.push_back(1);
    run.first_passage_front.push_back(0.0);

    for (int k = 0; k < k_max; ++k) {
        std::vector<double> next;
        double min_w = std::numeric_limits<double>::infinity();
        std::uint64_t max_b = 0;
        bool capped = false;
        for (double t : arrivals) {
            const std::uint64_t b =
                k == 0 ? root.sample(eng) : offspring.sample(eng);
            max_b = std::max(max_b, b);
            if (next.size() + b > node_cap) {
                capped = true;
                break;
            }
            for (std::uint64_t j = 0; j < b; ++j) {
                const double wt = w.sample(draw_u01(eng));
                min_w = std::min(min_w, wt);
                next.push_back(t + wt);
            }
        }
        run.gen_max_offspring.push_back(max_b);
        if (capped) {
            run.truncated = true;
            break;
        }
        if (next.empty()) break; // extinct (only possible if offspring can be 0)
        run.gen_min_weights.push_back(min_w);
        run.generation_sizes.push_back(next.size());
        run.first_passage_front.push_back(
            *std::min_element(next.begin(), next.end()));
        arrivals = std::move(next);
    }

    for (std::size_t k = 0; k < run.generation_sizes.size(); ++k) {
        run.y_norm.push_back(
            std::pow(tau - 2.0, static_cast<double>(k)) *
            std::log(static_cast<double>(run.generation_sizes[k])));
    }
    return run;
}

ExplosionEvidence explosion_evidence(const std::vector<BPRun>& runs,
                                     const WeightDist& w, double tau) {
    if (runs.size() < 20)
        throw std::invalid_argument("explosion_evidence needs >= 20 runs");
    ExplosionEvidence ev;

    // Runs truncate at different generations once node_cap bites; use
    // every generation still covered by at least half the runs.
    const std::size_t quorum = std::max<std::size_t>(10, runs.size() / 2);
    std::size_t front_depth = 0;
    for (;; ++front_depth) {
        std::size_t have = 0;
        for (const BPRun& r : runs)
            if (r.first_passage_front.size() > front_depth) ++have;
        if (have < quorum) break;
    }
    std::size_t min_depth = 0;
    for (;; ++min_depth) {
        std::size_t have = 0;
        for (const BPRun& r : runs)
            if (r.gen_min_weights.size() > min_depth) ++have;
        if (have < quorum) break;
    }
    if (min_depth < 3) {
        ev.status = ExplosionEvidence::Status::inconclusive;
        return ev;
    }

    for (std::size_t k = 0; k < front_depth; ++k) {
        std::vector<double> xs;
        for (const BPRun& r : runs)
            if (r.first_passage_front.size() > k)
                xs.push_back(r.first_passage_front[k]);
        ev.median_front.push_back(stats::quantile_type7(xs, 0.5));
    }
    for (std::size_t k = 0; k + 1 < front_depth; ++k)
        ev.median_increments.push_back(ev.median_front[k + 1] - ev.median_front[k]);
    for (std::size_t k = 0; k < min_depth; ++k) {
        std::vector<double> xs;
        for (const BPRun& r : runs)
            if (r.gen_min_weights.size() > k) xs.push_back(r.gen_min_weights[k]);
        ev.median_gen_min.push_back(stats::quantile_type7(xs, 0.5));
    }
    for (std::size_t i = 1; i <= min_depth; ++i)
        ev.predicted_terms.push_back(w.quantile_exp_neg(
            std::pow(1.0 / (tau - 2.0), static_cast<double>(i))));

    // The front is lower-bounded by the sum of per-generation minimum
    // weights, and that sum converges exactly for explosive families: the
    // minima are weight quantiles at level ~1/Z_k and collapse once the
    // generation sizes blow up. Non-explosive families keep them near the
    // characteristic terms.
    const double first_min = ev.median_gen_min.front();
    const double last_min = ev.median_gen_min.back();
    if (first_min > 0.0 && last_min < 0.05 * first_min) {
        ev.status = ExplosionEvidence::Status::explosive;
    } else {
        bool tracks = true;
        for (std::size_t i = 1; i < ev.median_gen_min.size(); ++i) {
            const double pred = ev.predicted_terms[i];
            const double obs = ev.median_gen_min[i];
            if (!(obs >= 0.1 * pred && obs <= 10.0 * pred)) tracks = false;
        }
        ev.status = tracks ? ExplosionEvidence::Status::non_explosive
                           : ExplosionEvidence::Status::inconclusive;
    }
    ev.classifier_explosive = classify_explosive(w).explosive;
    ev.agrees_with_classifier =
        (ev.status == ExplosionEvidence::Status::explosive) ==
            ev.classifier_explosive &&
        ev.status != ExplosionEvidence::Status::inconclusive;
    return ev;
}

GenerationReport generations_to_degree(const std::vector<BPRun>& runs,
                                       long long ktilde, double M, double tau) {
    if (!(M * std::fabs(std::log(tau - 2.0)) > 1.0))
        throw std::invalid_argument("need M |log(tau-2)| > 1");
    if (ktilde < 3) throw std::invalid_argument("ktilde too small");
    GenerationReport rep;
    rep.generation = static_cast<long long>(
        std::ceil(M * std::log(std::log(static_cast<double>(ktilde)))));
    std::size_t fail = 0;
    for (const BPRun& r : runs) {
        bool reached = false;
        const std::size_t upto = std::min<std::size_t>(
            r.gen_max_offspring.size(), static_cast<std::size_t>(rep.generation) + 1);
        for (std::size_t i = 0; i < upto; ++i)
            if (r.gen_max_offspring[i] >= static_cast<std::uint64_t>(ktilde))
                reached = true;
        if (!reached) ++fail;
    }
    rep.failure_fraction =
        runs.empty() ? 1.0 : static_cast<double>(fail) / static_cast<double>(runs.size());
    rep.pass = rep.failure_fraction <= 0.1;
    return rep;
}

std::string to_json(const BPRun& run) {
    nlohmann::json j;
    j["generation_sizes"] = run.generation_sizes;
    j["y_norm"] = run.y_norm;
    j["gen_min_weights"] = run.gen_min_weights;
    j["first_passage_front"] = run.first_passage_front;
    j["gen_max_offspring"] = run.gen_max_offspring;
    j["truncated"] = run.truncated;
    j["tau"] = run.tau;
    return j.dump(2);
}

} // namespace fppcm
