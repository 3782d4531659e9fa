// Contrastive objective over normal/abnormal representation batches: cosine
// similarity, the cluster-repelling loss (negative sum shared across all
// normal anchors), the per-anchor InfoNCE variant, the dual-head sum, and
// analytic gradients with respect to every representation vector.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aocids {

using Vec = std::vector<double>;

enum class LossVariant { CRC, InfoNCE };
enum class HeadMode { Both, EncoderOnly, DecoderOnly };

struct LossConfig {
    double tau = 0.02;
    LossVariant variant = LossVariant::CRC;
};

struct BatchRepresentations {
    std::vector<Vec> normals;
    std::vector<Vec> abnormals;
};

// ---------------------------------------------------------------------------
// Cosine similarity
// ---------------------------------------------------------------------------

inline constexpr double kNormEpsilon = 1e-12;

namespace detail {

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// log(1 + e^z) without overflow for large |z|.
inline double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace detail

inline double cosine_sim(const Vec& u, const Vec& w) {
    if (u.size() != w.size()) throw std::invalid_argument("cosine_sim: length mismatch");
    const double nu = detail::norm(u) + kNormEpsilon;
    const double nw = detail::norm(w) + kNormEpsilon;
    return detail::dot(u, w) / (nu * nw);
}

namespace detail {

// Adds g * ds/du and g * ds/dw for s = u·w / ((‖u‖+ε)(‖w‖+ε)). The raw norms
// are passed in so callers can precompute them once per batch. A zero-norm
// vector gets no self-term (the similarity is flat there anyway).
inline void accumulate_cosine_grad(const Vec& u, const Vec& w, double raw_nu, double raw_nw,
                                   double g, Vec& grad_u, Vec& grad_w) {
    const double nu = raw_nu + kNormEpsilon;
    const double nw = raw_nw + kNormEpsilon;
    const double d = dot(u, w);
    const double inv = 1.0 / (nu * nw);
    const double su = raw_nu > 0.0 ? d / (nu * nu * nw * raw_nu) : 0.0;
    const double sw = raw_nw > 0.0 ? d / (nu * nw * nw * raw_nw) : 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        grad_u[i] += g * (w[i] * inv - su * u[i]);
        grad_w[i] += g * (u[i] * inv - sw * w[i]);
    }
}

struct PairwiseSims {
    std::vector<double> pos;      // similarities for ordered-free pairs i<j, row-major
    std::vector<double> neg;      // l_n x l_a, row-major
    std::vector<double> norm_n;   // raw norms
    std::vector<double> norm_a;

    double pos_at(std::size_t i, std::size_t j, std::size_t ln) const {
        if (i > j) std::swap(i, j);
        // index of (i,j), i<j, in the upper-triangle enumeration
        return pos[i * ln - i * (i + 1) / 2 + (j - i - 1)];
    }
};

inline PairwiseSims compute_sims(const BatchRepresentations& batch) {
    const std::size_t ln = batch.normals.size();
    const std::size_t la = batch.abnormals.size();
    PairwiseSims s;
    s.norm_n.resize(ln);
    s.norm_a.resize(la);
    for (std::size_t i = 0; i < ln; ++i) s.norm_n[i] = norm(batch.normals[i]);
    for (std::size_t k = 0; k < la; ++k) s.norm_a[k] = norm(batch.abnormals[k]);
    auto sim = [&](const Vec& a, double na, const Vec& b, double nb) {
        return dot(a, b) / ((na + kNormEpsilon) * (nb + kNormEpsilon));
    };
    s.pos.reserve(ln >= 2 ? ln * (ln - 1) / 2 : 0);
    for (std::size_t i = 0; i < ln; ++i)
        for (std::size_t j = i + 1; j < ln; ++j)
            s.pos.push_back(sim(batch.normals[i], s.norm_n[i], batch.normals[j], s.norm_n[j]));
    s.neg.reserve(ln * la);
    for (std::size_t i = 0; i < ln; ++i)
        for (std::size_t k = 0; k < la; ++k)
            s.neg.push_back(sim(batch.normals[i], s.norm_n[i], batch.abnormals[k], s.norm_a[k]));
    return s;
}

// log Σ e^{x/τ} over a range, max-subtracted.
inline double log_sum_exp_scaled(const double* x, std::size_t n, double tau) {
    double m = x[0] / tau;
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i] / tau);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::exp(x[i] / tau - m);
    return m + std::log(acc);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Loss values
// ---------------------------------------------------------------------------

inline void validate_loss_config(const LossConfig& cfg) {
    if (!(cfg.tau > 0.0) || cfg.tau > 1.0) {
        throw std::invalid_argument("loss: tau must lie in (0,1], got " + std::to_string(cfg.tau));
    }
}

// Shared-denominator form: every positive pair competes against the sum of
// ALL normal-to-abnormal similarities, so each anchor repels the whole
// abnormal cluster, not just its own negatives.
inline double crc_loss(const BatchRepresentations& batch, const LossConfig& cfg,
                       bool* no_positive_pairs = nullptr) {
    validate_loss_config(cfg);
    const std::size_t ln = batch.normals.size();
    const std::size_t la = batch.abnormals.size();
    if (no_positive_pairs) *no_positive_pairs = ln < 2;
    if (ln < 2 || la == 0) return 0.0;

    const auto sims = detail::compute_sims(batch);
    const double log_n = detail::log_sum_exp_scaled(sims.neg.data(), sims.neg.size(), cfg.tau);
    double total = 0.0;
    for (double a : sims.pos) total += 2.0 * detail::softplus(log_n - a / cfg.tau);
    return total / (static_cast<double>(ln) * static_cast<double>(ln - 1));
}

// Per-anchor denominator: anchor i competes only against its own negatives.
inline double infonce_loss(const BatchRepresentations& batch, const LossConfig& cfg,
                           bool* no_positive_pairs = nullptr) {
    validate_loss_config(cfg);
    const std::size_t ln = batch.normals.size();
    const std::size_t la = batch.abnormals.size();
    if (no_positive_pairs) *no_positive_pairs = ln < 2;
    if (ln < 2 || la == 0) return 0.0;

    const auto sims = detail::compute_sims(batch);
    std::vector<double> log_n(ln);
    for (std::size_t i = 0; i < ln; ++i) {
        log_n[i] = detail::log_sum_exp_scaled(sims.neg.data() + i * la, la, cfg.tau);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < ln; ++i) {
        for (std::size_t j = 0; j < ln; ++j) {
            if (j == i) continue;
            total += detail::softplus(log_n[i] - sims.pos_at(i, j, ln) / cfg.tau);
        }
    }
    return total / (static_cast<double>(ln) * static_cast<double>(ln - 1));
}

inline double loss_value(const BatchRepresentations& batch, const LossConfig& cfg,
                         bool* no_positive_pairs = nullptr) {
    return cfg.variant == LossVariant::CRC ? crc_loss(batch, cfg, no_positive_pairs)
                                           : infonce_loss(batch, cfg, no_positive_pairs);
}

// ---------------------------------------------------------------------------
// Gradients
// ---------------------------------------------------------------------------

struct HeadGrads {
    double loss = 0.0;
    std::vector<Vec> d_normals;
    std::vector<Vec> d_abnormals;
    bool no_positive_pairs = false;
};

// Analytic gradient for one head. Two passes: first all pairwise similarity
// coefficients dL/ds, then cosine-similarity chain rule back to the vectors.
inline HeadGrads loss_grads(const BatchRepresentations& batch, const LossConfig& cfg) {
    validate_loss_config(cfg);
    const std::size_t ln = batch.normals.size();
    const std::size_t la = batch.abnormals.size();

    HeadGrads out;
    out.d_normals.resize(ln);
    out.d_abnormals.resize(la);
    for (std::size_t i = 0; i < ln; ++i) out.d_normals[i].assign(batch.normals[i].size(), 0.0);
    for (std::size_t k = 0; k < la; ++k) out.d_abnormals[k].assign(batch.abnormals[k].size(), 0.0);
    out.no_positive_pairs = ln < 2;
    if (ln < 2 || la == 0) return out;

    const auto sims = detail::compute_sims(batch);
    const double tau = cfg.tau;
    const double c = 1.0 / (static_cast<double>(ln) * static_cast<double>(ln - 1));

    // dL/ds for each unordered positive pair, and dL/dt for each negative pair
    std::vector<double> g_pos(sims.pos.size(), 0.0);
    std::vector<double> g_neg(sims.neg.size(), 0.0);

    if (cfg.variant == LossVariant::CRC) {
        const double log_n = detail::log_sum_exp_scaled(sims.neg.data(), sims.neg.size(), tau);
        double loss = 0.0;
        double repel = 0.0;  // sum over ordered positive pairs of (1 - P_ij)
        for (std::size_t p = 0; p < sims.pos.size(); ++p) {
            const double z = sims.pos[p] / tau - log_n;
            loss += 2.0 * detail::softplus(-z);
            const double one_minus = 1.0 - detail::sigmoid(z);
            g_pos[p] = -2.0 * c * one_minus / tau;
            repel += 2.0 * one_minus;
        }
        for (std::size_t q = 0; q < sims.neg.size(); ++q) {
            g_neg[q] = (c / tau) * std::exp(sims.neg[q] / tau - log_n) * repel;
        }
        out.loss = c * loss;
    } else {
        std::vector<double> log_n(ln);
        for (std::size_t i = 0; i < ln; ++i) {
            log_n[i] = detail::log_sum_exp_scaled(sims.neg.data() + i * la, la, tau);
        }
        double loss = 0.0;
        std::vector<double> repel(ln, 0.0);  // per anchor: Σ_{j≠i} (1 - P_ij)
        std::size_t p = 0;
        for (std::size_t i = 0; i < ln; ++i) {
            for (std::size_t j = i + 1; j < ln; ++j, ++p) {
                const double zi = sims.pos[p] / tau - log_n[i];
                const double zj = sims.pos[p] / tau - log_n[j];
                loss += detail::softplus(-zi) + detail::softplus(-zj);
                const double mi = 1.0 - detail::sigmoid(zi);
                const double mj = 1.0 - detail::sigmoid(zj);
                g_pos[p] = -(c / tau) * (mi + mj);
                repel[i] += mi;
                repel[j] += mj;
            }
        }
        for (std::size_t i = 0; i < ln; ++i) {
            for (std::size_t k = 0; k < la; ++k) {
                g_neg[i * la + k] =
                    (c / tau) * std::exp(sims.neg[i * la + k] / tau - log_n[i]) * repel[i];
            }
        }
        out.loss = c * loss;
    }

    std::size_t p = 0;
    for (std::size_t i = 0; i < ln; ++i) {
        for (std::size_t j = i + 1; j < ln; ++j, ++p) {
            if (g_pos[p] == 0.0) continue;
            detail::accumulate_cosine_grad(batch.normals[i], batch.normals[j], sims.norm_n[i],
                                           sims.norm_n[j], g_pos[p], out.d_normals[i],
                                           out.d_normals[j]);
        }
    }
    for (std::size_t i = 0; i < ln; ++i) {
        for (std::size_t k = 0; k < la; ++k) {
            const double g = g_neg[i * la + k];
            if (g == 0.0) continue;
            detail::accumulate_cosine_grad(batch.normals[i], batch.abnormals[k], sims.norm_n[i],
                                           sims.norm_a[k], g, out.d_normals[i],
                                           out.d_abnormals[k]);
        }
    }
    return out;
}

struct DualGrads {
    double loss_final = 0.0;
    HeadGrads encoder;
    HeadGrads decoder;
    bool no_positive_pairs = false;
};

// Combined objective: sum of the encoder-side and decoder-side losses over the
// same batch. head mode drops one side for the single-head ablations.
inline DualGrads loss_and_grads(const BatchRepresentations& en_batch,
                                const BatchRepresentations& de_batch, const LossConfig& cfg,
                                HeadMode mode = HeadMode::Both) {
    if (en_batch.normals.size() != de_batch.normals.size() ||
        en_batch.abnormals.size() != de_batch.abnormals.size()) {
        throw std::invalid_argument("loss_and_grads: encoder/decoder batches index different examples");
    }
    DualGrads out;
    auto zero_like = [](const BatchRepresentations& b) {
        HeadGrads g;
        g.d_normals.resize(b.normals.size());
        g.d_abnormals.resize(b.abnormals.size());
        for (std::size_t i = 0; i < b.normals.size(); ++i) g.d_normals[i].assign(b.normals[i].size(), 0.0);
        for (std::size_t k = 0; k < b.abnormals.size(); ++k) g.d_abnormals[k].assign(b.abnormals[k].size(), 0.0);
        g.no_positive_pairs = b.normals.size() < 2;
        return g;
    };
    out.encoder = mode == HeadMode::DecoderOnly ? zero_like(en_batch) : loss_grads(en_batch, cfg);
    out.decoder = mode == HeadMode::EncoderOnly ? zero_like(de_batch) : loss_grads(de_batch, cfg);
    out.loss_final = out.encoder.loss + out.decoder.loss;
    out.no_positive_pairs = out.encoder.no_positive_pairs || out.decoder.no_positive_pairs;
    return out;
}

}  // namespace aocids
