// Decision layer: mean normal anchor, cosine score lists, two-component
// univariate Gaussian mixture fit by EM (label-blind), per-head posterior
// classification with confidence, the two-head vote, and the fixed-percentile
// threshold used by the no-probabilistic-decision ablation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "aocids/loss.hpp"

namespace aocids {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct Gaussian {
    double mu = 0.0;
    double sigma = 1.0;   // >= sigma floor
    double weight = 0.5;  // pair weights sum to 1
};

struct GaussianPair {
    Gaussian normal;    // strictly larger mu
    Gaussian abnormal;
    bool collapsed = false;  // some sigma hit the floor or the means merged
};

struct HeadDecision {
    int label = 0;            // 0 normal, 1 abnormal
    double confidence = 0.5;  // posterior of the chosen component
};

// Mean normal representations, computed from true-labeled normals of the
// initial dataset only; frozen between refreshes.
struct AnchorContext {
    Vec mean_normal_en;
    Vec mean_normal_de;
};

// ---------------------------------------------------------------------------
// Anchor and scores
// ---------------------------------------------------------------------------

inline Vec mean_normal(const std::vector<Vec>& representations) {
    if (representations.empty()) throw std::invalid_argument("mean_normal: empty input");
    Vec mean(representations.front().size(), 0.0);
    for (const auto& v : representations) {
        if (v.size() != mean.size()) throw std::invalid_argument("mean_normal: length mismatch");
        for (std::size_t i = 0; i < v.size(); ++i) mean[i] += v[i];
    }
    const double inv = 1.0 / static_cast<double>(representations.size());
    for (auto& m : mean) m *= inv;
    return mean;
}

inline std::vector<double> score_all(const Vec& anchor, const std::vector<Vec>& representations) {
    if (representations.empty()) throw std::invalid_argument("score_all: empty input");
    std::vector<double> scores;
    scores.reserve(representations.size());
    for (const auto& v : representations) scores.push_back(cosine_sim(anchor, v));
    return scores;
}

// ---------------------------------------------------------------------------
// Two-Gaussian EM fit
// ---------------------------------------------------------------------------

struct EmOptions {
    std::size_t max_iterations = 500;
    double rel_tolerance = 1e-8;
    double sigma_floor = 1e-4;
    bool pin_weights = false;  // keep both mixture weights at 0.5
};

struct EmTrace {
    std::vector<double> loglik;  // per iteration, for monotonicity checks
    std::size_t iterations = 0;
    bool collapsed = false;
};

namespace detail {

// linear-interpolation quantile of a sorted sample, q in [0,1]
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

inline double log_weighted_density(double x, const Gaussian& g) {
    constexpr double half_log_two_pi = 0.9189385332046727;
    const double z = (x - g.mu) / g.sigma;
    return std::log(g.weight) - half_log_two_pi - std::log(g.sigma) - 0.5 * z * z;
}

inline double stable_sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace detail

// Label-blind EM over raw scores (clamped to [-1,1] for cosine drift).
// Initialization: component means at the 25th/75th percentiles (widening to
// 10/90 and then to mean +- pooled spread if those coincide), both sigmas at
// the pooled standard deviation, weights 0.5.
inline GaussianPair fit_two_gaussians(const std::vector<double>& scores,
                                      const EmOptions& opts = {}, EmTrace* trace = nullptr) {
    if (scores.size() < 4) {
        throw std::invalid_argument("fit_two_gaussians: need at least 4 scores, got " +
                                    std::to_string(scores.size()));
    }
    std::vector<double> x(scores);
    for (auto& v : x) v = std::clamp(v, -1.0, 1.0);
    const std::size_t n = x.size();

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var == 0.0) throw std::invalid_argument("fit_two_gaussians: all scores are equal");
    const double pooled_sd = std::max(std::sqrt(var), opts.sigma_floor);

    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    double mu1 = detail::quantile_sorted(sorted, 0.25);
    double mu2 = detail::quantile_sorted(sorted, 0.75);
    if (mu1 == mu2) {
        mu1 = detail::quantile_sorted(sorted, 0.10);
        mu2 = detail::quantile_sorted(sorted, 0.90);
    }
    if (mu1 == mu2) {
        mu1 = mean - pooled_sd / 2.0;
        mu2 = mean + pooled_sd / 2.0;
    }

    Gaussian a{mu1, pooled_sd, 0.5};
    Gaussian b{mu2, pooled_sd, 0.5};
    bool collapsed = false;

    double prev_ll = 0.0;
    std::size_t iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        // E step and log-likelihood in one sweep
        double n_a = 0.0, sum_a = 0.0;
        double ll = 0.0;
        std::vector<double> resp_a(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double la = detail::log_weighted_density(x[i], a);
            const double lb = detail::log_weighted_density(x[i], b);
            const double m = std::max(la, lb);
            ll += m + std::log(std::exp(la - m) + std::exp(lb - m));
            const double ra = detail::stable_sigmoid(la - lb);
            resp_a[i] = ra;
            n_a += ra;
            sum_a += ra * x[i];
        }
        if (trace) trace->loglik.push_back(ll);

        const double n_b = static_cast<double>(n) - n_a;
        if (n_a < 1e-12 || n_b < 1e-12) {
            collapsed = true;
            break;
        }

        // M step
        const double new_mu_a = sum_a / n_a;
        double sum_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum_b += (1.0 - resp_a[i]) * x[i];
        const double new_mu_b = sum_b / n_b;
        double var_a = 0.0, var_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double da = x[i] - new_mu_a;
            const double db = x[i] - new_mu_b;
            var_a += resp_a[i] * da * da;
            var_b += (1.0 - resp_a[i]) * db * db;
        }
        a.mu = new_mu_a;
        b.mu = new_mu_b;
        const double sd_a = std::sqrt(var_a / n_a);
        const double sd_b = std::sqrt(var_b / n_b);
        a.sigma = std::max(sd_a, opts.sigma_floor);
        b.sigma = std::max(sd_b, opts.sigma_floor);
        if (sd_a < opts.sigma_floor || sd_b < opts.sigma_floor) collapsed = true;
        if (!opts.pin_weights) {
            a.weight = n_a / static_cast<double>(n);
            b.weight = n_b / static_cast<double>(n);
        }

        if (iter > 0 && std::abs(ll - prev_ll) <= opts.rel_tolerance * (1.0 + std::abs(prev_ll))) {
            ++iter;
            break;
        }
        prev_ll = ll;
    }

    GaussianPair pair;
    if (a.mu > b.mu) {
        pair.normal = a;
        pair.abnormal = b;
    } else if (b.mu > a.mu) {
        pair.normal = b;
        pair.abnormal = a;
    } else {
        // merged means: keep a deterministic order and nudge to preserve the
        // strict mu ordering invariant
        pair.normal = a.weight >= b.weight ? a : b;
        pair.abnormal = a.weight >= b.weight ? b : a;
        pair.normal.mu = std::nextafter(pair.normal.mu, 2.0);
        collapsed = true;
    }
    pair.collapsed = collapsed;
    if (trace) {
        trace->iterations = iter;
        trace->collapsed = collapsed;
    }
    return pair;
}

// ---------------------------------------------------------------------------
// Classification and voting
// ---------------------------------------------------------------------------

// Posterior comparison of the two weighted densities in log space. Equal
// posteriors fall back to normal (conservative per head).
inline HeadDecision classify(double score, const GaussianPair& pair) {
    const double log_n = detail::log_weighted_density(score, pair.normal);
    const double log_a = detail::log_weighted_density(score, pair.abnormal);
    HeadDecision d;
    if (log_a > log_n) {
        d.label = 1;
        d.confidence = detail::stable_sigmoid(log_a - log_n);
    } else {
        d.label = 0;
        d.confidence = detail::stable_sigmoid(log_n - log_a);
    }
    return d;
}

// Agreement wins outright; disagreement goes to the more confident head; an
// exact confidence tie fails toward alarming.
inline int vote(const HeadDecision& en, const HeadDecision& de) {
    if (en.label == de.label) return en.label;
    if (en.confidence > de.confidence) return en.label;
    if (de.confidence > en.confidence) return de.label;
    return 1;
}

// Nearest-rank percentile: the k-th smallest with k = max(1, ceil(p/100 * n)).
inline double percentile_threshold(const std::vector<double>& normal_scores, double p) {
    if (normal_scores.empty()) throw std::invalid_argument("percentile_threshold: empty input");
    if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile_threshold: p out of range");
    std::vector<double> sorted(normal_scores);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    auto k = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
    k = std::max<std::size_t>(k, 1);
    k = std::min(k, sorted.size());
    return sorted[k - 1];
}

inline int classify_fixed_threshold(double score, double threshold) {
    return score < threshold ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Combined per-example decision
// ---------------------------------------------------------------------------

enum class DecisionRule { Gaussian, FixedThreshold };

struct FixedThresholds {
    double en = 0.0;
    double de = 0.0;
    double percentile = 5.0;
};

struct DecisionContext {
    DecisionRule rule = DecisionRule::Gaussian;
    AnchorContext anchor;
    GaussianPair en;
    GaussianPair de;
    FixedThresholds fixed;
};

struct Decision {
    int label = 0;
    HeadDecision en;
    HeadDecision de;
};

// Scores one example's two representations against the context. Fixed-rule
// decisions carry confidence 1.0 per head, so any disagreement resolves to
// abnormal through the vote's tie rule. Single-head modes bypass the vote.
inline Decision decide(const DecisionContext& ctx, const Vec& u_en, const Vec& u_de,
                       HeadMode mode = HeadMode::Both) {
    const double s_en = cosine_sim(ctx.anchor.mean_normal_en, u_en);
    const double s_de = cosine_sim(ctx.anchor.mean_normal_de, u_de);
    Decision d;
    if (ctx.rule == DecisionRule::Gaussian) {
        d.en = classify(s_en, ctx.en);
        d.de = classify(s_de, ctx.de);
    } else {
        d.en = {classify_fixed_threshold(s_en, ctx.fixed.en), 1.0};
        d.de = {classify_fixed_threshold(s_de, ctx.fixed.de), 1.0};
    }
    switch (mode) {
        case HeadMode::Both: d.label = vote(d.en, d.de); break;
        case HeadMode::EncoderOnly: d.label = d.en.label; break;
        case HeadMode::DecoderOnly: d.label = d.de.label; break;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Serialization (checkpoint container pieces)
// ---------------------------------------------------------------------------

inline nlohmann::json gaussian_to_json(const Gaussian& g) {
    return {{"mu", g.mu}, {"sigma", g.sigma}, {"weight", g.weight}};
}

inline Gaussian gaussian_from_json(const nlohmann::json& j) {
    return {j.at("mu").get<double>(), j.at("sigma").get<double>(), j.at("weight").get<double>()};
}

inline nlohmann::json pair_to_json(const GaussianPair& p) {
    return {{"normal", gaussian_to_json(p.normal)},
            {"abnormal", gaussian_to_json(p.abnormal)},
            {"collapsed", p.collapsed}};
}

inline GaussianPair pair_from_json(const nlohmann::json& j) {
    GaussianPair p;
    p.normal = gaussian_from_json(j.at("normal"));
    p.abnormal = gaussian_from_json(j.at("abnormal"));
    p.collapsed = j.value("collapsed", false);
    return p;
}

inline nlohmann::json decision_context_to_json(const DecisionContext& ctx) {
    nlohmann::json j;
    j["rule"] = ctx.rule == DecisionRule::Gaussian ? "gaussian" : "fixed";
    j["mean_normal_en"] = ctx.anchor.mean_normal_en;
    j["mean_normal_de"] = ctx.anchor.mean_normal_de;
    j["en"] = pair_to_json(ctx.en);
    j["de"] = pair_to_json(ctx.de);
    if (ctx.rule == DecisionRule::FixedThreshold) {
        j["fixed"] = {{"en", ctx.fixed.en}, {"de", ctx.fixed.de}, {"percentile", ctx.fixed.percentile}};
    }
    return j;
}

inline DecisionContext decision_context_from_json(const nlohmann::json& j) {
    DecisionContext ctx;
    ctx.rule = j.at("rule").get<std::string>() == "fixed" ? DecisionRule::FixedThreshold
                                                          : DecisionRule::Gaussian;
    ctx.anchor.mean_normal_en = j.at("mean_normal_en").get<Vec>();
    ctx.anchor.mean_normal_de = j.at("mean_normal_de").get<Vec>();
    ctx.en = pair_from_json(j.at("en"));
    ctx.de = pair_from_json(j.at("de"));
    if (j.contains("fixed")) {
        ctx.fixed.en = j["fixed"].at("en").get<double>();
        ctx.fixed.de = j["fixed"].at("de").get<double>();
        ctx.fixed.percentile = j["fixed"].value("percentile", 5.0);
    }
    return ctx;
}

}  // namespace aocids
