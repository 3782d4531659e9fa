// Symmetric autoencoder MLP: deterministic fan-aware initialization, forward
// pass exposing both the bottleneck representation and the reconstruction
// output, manual backpropagation with gradient injection at both heads, plain
// SGD, and a JSON checkpoint format with bit-exact round-trip.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "aocids/loss.hpp"
#include "aocids/rng.hpp"

namespace aocids {

// ---------------------------------------------------------------------------
// Layer specification
// ---------------------------------------------------------------------------

enum class Activation { ReLU, Tanh, Sigmoid, Identity };

inline std::string activation_name(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Identity: return "identity";
    }
    throw std::logic_error("activation_name: bad enum");
}

inline Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::ReLU;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "identity") return Activation::Identity;
    throw std::runtime_error("unknown activation '" + name + "'");
}

struct LayerSpec {
    std::vector<std::size_t> sizes;  // e.g. [121, 64, 32, 64, 121]
    Activation hidden_activation = Activation::ReLU;
    Activation output_activation = Activation::Sigmoid;

    void validate() const {
        if (sizes.size() < 3 || sizes.size() % 2 == 0) {
            throw std::invalid_argument("layer spec: need an odd count of at least 3 sizes");
        }
        for (std::size_t s : sizes) {
            if (s == 0) throw std::invalid_argument("layer spec: zero-width layer");
        }
        for (std::size_t i = 0; i < sizes.size() / 2; ++i) {
            if (sizes[i] != sizes[sizes.size() - 1 - i]) {
                throw std::invalid_argument("layer spec: sizes must mirror around the bottleneck");
            }
        }
    }

    std::size_t input_dim() const { return sizes.front(); }
    std::size_t bottleneck_dim() const { return sizes[sizes.size() / 2]; }
    std::size_t layer_count() const { return sizes.size() - 1; }
    // index of the layer whose output is the bottleneck representation
    std::size_t bottleneck_layer() const { return sizes.size() / 2 - 1; }
};

inline std::size_t param_count(const LayerSpec& spec) {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < spec.sizes.size(); ++l) {
        n += spec.sizes[l] * spec.sizes[l + 1] + spec.sizes[l + 1];
    }
    return n;
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct ModelParams {
    LayerSpec spec;
    std::vector<Vec> weights;  // weights[l]: row-major (sizes[l+1] x sizes[l])
    std::vector<Vec> biases;   // biases[l]: sizes[l+1]
};

struct ModelGrads {
    std::vector<Vec> weights;
    std::vector<Vec> biases;
};

inline ModelGrads zero_grads(const LayerSpec& spec) {
    ModelGrads g;
    const std::size_t L = spec.layer_count();
    g.weights.resize(L);
    g.biases.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        g.weights[l].assign(spec.sizes[l] * spec.sizes[l + 1], 0.0);
        g.biases[l].assign(spec.sizes[l + 1], 0.0);
    }
    return g;
}

// Symmetric uniform on [-limit, limit] with limit = sqrt(6 / (fan_in + fan_out)).
inline ModelParams init_params(const LayerSpec& spec, std::uint64_t seed) {
    spec.validate();
    ModelParams p;
    p.spec = spec;
    auto engine = rng::make_engine(seed);
    const std::size_t L = spec.layer_count();
    p.weights.resize(L);
    p.biases.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        const std::size_t fan_in = spec.sizes[l];
        const std::size_t fan_out = spec.sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        p.weights[l].resize(fan_in * fan_out);
        for (auto& w : p.weights[l]) w = (2.0 * rng::next_unit(engine) - 1.0) * limit;
        p.biases[l].assign(fan_out, 0.0);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Forward pass
// ---------------------------------------------------------------------------

struct ForwardOutputs {
    Vec u_en;  // bottleneck activation
    Vec u_de;  // final layer output
    // training cache: pre[l] and post[l] per layer (post[l] = act(pre[l]))
    std::vector<Vec> pre;
    std::vector<Vec> post;
    bool has_cache = false;
};

namespace detail {

inline double activate(Activation a, double z) {
    switch (a) {
        case Activation::ReLU: return z > 0.0 ? z : 0.0;
        case Activation::Tanh: return std::tanh(z);
        case Activation::Sigmoid: return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                                                  : std::exp(z) / (1.0 + std::exp(z));
        case Activation::Identity: return z;
    }
    return z;
}

// derivative expressed from pre-activation z and cached activation a
inline double activate_deriv(Activation act, double z, double a) {
    switch (act) {
        case Activation::ReLU: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - a * a;
        case Activation::Sigmoid: return a * (1.0 - a);
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

}  // namespace detail

inline ForwardOutputs forward(const ModelParams& params, const Vec& x, bool training = false) {
    const auto& spec = params.spec;
    if (x.size() != spec.input_dim()) {
        throw std::invalid_argument("forward: input length " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(spec.input_dim()));
    }
    ForwardOutputs out;
    out.has_cache = training;
    const std::size_t L = spec.layer_count();
    if (training) {
        out.pre.resize(L);
        out.post.resize(L);
    }

    Vec cur = x;
    for (std::size_t l = 0; l < L; ++l) {
        const std::size_t rows = spec.sizes[l + 1];
        const std::size_t cols = spec.sizes[l];
        const Activation act = (l + 1 == L) ? spec.output_activation : spec.hidden_activation;
        Vec z(rows);
        const double* W = params.weights[l].data();
        for (std::size_t r = 0; r < rows; ++r) {
            double acc = params.biases[l][r];
            const double* wr = W + r * cols;
            for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * cur[c];
            z[r] = acc;
        }
        Vec a(rows);
        for (std::size_t r = 0; r < rows; ++r) a[r] = detail::activate(act, z[r]);
        if (training) {
            out.pre[l] = std::move(z);
            out.post[l] = a;
        }
        if (l == spec.bottleneck_layer()) out.u_en = a;
        cur = std::move(a);
    }
    out.u_de = std::move(cur);
    return out;
}

inline std::vector<ForwardOutputs> forward_batch(const ModelParams& params,
                                                 const std::vector<const Vec*>& xs,
                                                 bool training = false) {
    std::vector<ForwardOutputs> out;
    out.reserve(xs.size());
    for (const Vec* x : xs) out.push_back(forward(params, *x, training));
    return out;
}

// ---------------------------------------------------------------------------
// Backward pass
// ---------------------------------------------------------------------------

// Accumulates parameter gradients for one example given the loss gradients at
// the two heads. d_u_en feeds in at the bottleneck output, d_u_de at the final
// output; either may be empty (treated as zero).
inline void backward(const ModelParams& params, const Vec& x, const ForwardOutputs& cache,
                     const Vec& d_u_en, const Vec& d_u_de, ModelGrads& grads) {
    const auto& spec = params.spec;
    if (!cache.has_cache) throw std::logic_error("backward: forward cache missing");
    const std::size_t L = spec.layer_count();
    const std::size_t bneck = spec.bottleneck_layer();

    Vec delta(spec.sizes[L]);
    {
        const Activation act = spec.output_activation;
        for (std::size_t r = 0; r < delta.size(); ++r) {
            const double up = d_u_de.empty() ? 0.0 : d_u_de[r];
            delta[r] = up * detail::activate_deriv(act, cache.pre[L - 1][r], cache.post[L - 1][r]);
        }
    }

    for (std::size_t l = L; l-- > 0;) {
        const std::size_t rows = spec.sizes[l + 1];
        const std::size_t cols = spec.sizes[l];
        const Vec& input = (l == 0) ? x : cache.post[l - 1];

        double* gW = grads.weights[l].data();
        for (std::size_t r = 0; r < rows; ++r) {
            const double d = delta[r];
            grads.biases[l][r] += d;
            if (d == 0.0) continue;
            double* gr = gW + r * cols;
            for (std::size_t c = 0; c < cols; ++c) gr[c] += d * input[c];
        }
        if (l == 0) break;

        Vec upstream(cols, 0.0);
        const double* W = params.weights[l].data();
        for (std::size_t r = 0; r < rows; ++r) {
            const double d = delta[r];
            if (d == 0.0) continue;
            const double* wr = W + r * cols;
            for (std::size_t c = 0; c < cols; ++c) upstream[c] += wr[c] * d;
        }
        if (l - 1 == bneck && !d_u_en.empty()) {
            for (std::size_t c = 0; c < cols; ++c) upstream[c] += d_u_en[c];
        }
        const Activation act = spec.hidden_activation;
        delta.resize(cols);
        for (std::size_t c = 0; c < cols; ++c) {
            delta[c] = upstream[c] * detail::activate_deriv(act, cache.pre[l - 1][c], cache.post[l - 1][c]);
        }
    }
}

// ---------------------------------------------------------------------------
// SGD
// ---------------------------------------------------------------------------

inline void apply_gradients(ModelParams& params, const ModelGrads& grads, double learning_rate) {
    const std::size_t L = params.spec.layer_count();
    for (std::size_t l = 0; l < L; ++l) {
        for (double g : grads.weights[l]) {
            if (!std::isfinite(g)) {
                throw std::runtime_error("apply_gradients: non-finite gradient in layer " +
                                         std::to_string(l) + " weights");
            }
        }
        for (double g : grads.biases[l]) {
            if (!std::isfinite(g)) {
                throw std::runtime_error("apply_gradients: non-finite gradient in layer " +
                                         std::to_string(l) + " biases");
            }
        }
        for (std::size_t i = 0; i < params.weights[l].size(); ++i) {
            params.weights[l][i] -= learning_rate * grads.weights[l][i];
        }
        for (std::size_t i = 0; i < params.biases[l].size(); ++i) {
            params.biases[l][i] -= learning_rate * grads.biases[l][i];
        }
    }
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainConfig {
    double learning_rate = 0.001;
    std::size_t batch_size = 128;
    std::uint64_t seed = 0;
};

// Non-owning training view; y is 0 for normal, 1 for abnormal.
struct SampleRef {
    const Vec* x;
    int y;
};

struct TrainStats {
    std::size_t epochs_run = 0;
    std::size_t batches = 0;
    std::size_t skipped_batches = 0;  // fewer than 2 normals or no abnormal
    std::vector<double> epoch_mean_loss;
};

struct BatchGradResult {
    double loss = 0.0;
    bool skipped = false;  // fewer than 2 normals or no abnormal
};

// Full parameter gradient of the contrastive objective over one batch.
inline BatchGradResult batch_gradients(const ModelParams& params,
                                       const std::vector<SampleRef>& batch,
                                       const LossConfig& loss_cfg, HeadMode head_mode,
                                       ModelGrads& grads) {
    std::vector<const Vec*> xs;
    xs.reserve(batch.size());
    for (const auto& s : batch) xs.push_back(s.x);
    auto outs = forward_batch(params, xs, true);

    std::vector<std::size_t> normal_pos, abnormal_pos;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        (batch[i].y == 0 ? normal_pos : abnormal_pos).push_back(i);
    }
    if (normal_pos.size() < 2 || abnormal_pos.empty()) return {0.0, true};

    BatchRepresentations en, de;
    en.normals.reserve(normal_pos.size());
    de.normals.reserve(normal_pos.size());
    en.abnormals.reserve(abnormal_pos.size());
    de.abnormals.reserve(abnormal_pos.size());
    for (std::size_t i : normal_pos) {
        en.normals.push_back(outs[i].u_en);
        de.normals.push_back(outs[i].u_de);
    }
    for (std::size_t i : abnormal_pos) {
        en.abnormals.push_back(outs[i].u_en);
        de.abnormals.push_back(outs[i].u_de);
    }

    const DualGrads dual = loss_and_grads(en, de, loss_cfg, head_mode);

    for (std::size_t n = 0; n < normal_pos.size(); ++n) {
        const std::size_t i = normal_pos[n];
        backward(params, *batch[i].x, outs[i], dual.encoder.d_normals[n], dual.decoder.d_normals[n],
                 grads);
    }
    for (std::size_t a = 0; a < abnormal_pos.size(); ++a) {
        const std::size_t i = abnormal_pos[a];
        backward(params, *batch[i].x, outs[i], dual.encoder.d_abnormals[a],
                 dual.decoder.d_abnormals[a], grads);
    }
    return {dual.loss_final, false};
}

// One SGD step on one batch. Returns the batch loss; degenerate batches
// contribute nothing and report skipped=true.
inline double train_step(ModelParams& params, const std::vector<SampleRef>& batch,
                         const LossConfig& loss_cfg, HeadMode head_mode, double learning_rate,
                         bool* skipped = nullptr) {
    ModelGrads grads = zero_grads(params.spec);
    const BatchGradResult res = batch_gradients(params, batch, loss_cfg, head_mode, grads);
    if (skipped) *skipped = res.skipped;
    if (res.skipped) return 0.0;
    apply_gradients(params, grads, learning_rate);
    return res.loss;
}

// Seeded-shuffle epochs over the sample set; batches that lack the class mix
// needed for a contrastive signal are skipped.
inline TrainStats train_epochs(ModelParams& params, const std::vector<SampleRef>& data,
                               const LossConfig& loss_cfg, HeadMode head_mode,
                               const TrainConfig& cfg, std::size_t epochs, rng::Engine& engine) {
    TrainStats stats;
    if (epochs == 0) return stats;
    if (cfg.batch_size == 0) throw std::invalid_argument("train_epochs: batch_size must be positive");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train_epochs: learning_rate must be positive");

    std::size_t normals = 0, abnormals = 0;
    for (const auto& s : data) (s.y == 0 ? normals : abnormals)++;
    if (normals < 2 || abnormals < 1) {
        throw std::runtime_error("train_epochs: need at least 2 normal and 1 abnormal example (have " +
                                 std::to_string(normals) + " / " + std::to_string(abnormals) + ")");
    }

    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t e = 0; e < epochs; ++e) {
        rng::shuffle(order, engine);
        double loss_sum = 0.0;
        std::size_t counted = 0;
        for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
            const std::size_t end = std::min(b + cfg.batch_size, order.size());
            std::vector<SampleRef> batch;
            batch.reserve(end - b);
            for (std::size_t i = b; i < end; ++i) batch.push_back(data[order[i]]);
            bool skipped = false;
            const double loss = train_step(params, batch, loss_cfg, head_mode, cfg.learning_rate,
                                           &skipped);
            ++stats.batches;
            if (skipped) {
                ++stats.skipped_batches;
            } else {
                loss_sum += loss;
                ++counted;
            }
        }
        stats.epoch_mean_loss.push_back(counted ? loss_sum / static_cast<double>(counted) : 0.0);
        ++stats.epochs_run;
    }
    return stats;
}

inline TrainStats train_epochs(ModelParams& params, const std::vector<SampleRef>& data,
                               const LossConfig& loss_cfg, HeadMode head_mode,
                               const TrainConfig& cfg, std::size_t epochs) {
    auto engine = rng::make_engine(cfg.seed);
    return train_epochs(params, data, loss_cfg, head_mode, cfg, epochs, engine);
}

// Mean contrastive loss over the data under fixed parameters (no update).
inline double compute_batch_loss(const ModelParams& params, const std::vector<SampleRef>& batch,
                                 const LossConfig& loss_cfg, HeadMode head_mode) {
    BatchRepresentations en, de;
    for (const auto& s : batch) {
        auto out = forward(params, *s.x, false);
        if (s.y == 0) {
            en.normals.push_back(std::move(out.u_en));
            de.normals.push_back(std::move(out.u_de));
        } else {
            en.abnormals.push_back(std::move(out.u_en));
            de.abnormals.push_back(std::move(out.u_de));
        }
    }
    double loss = 0.0;
    if (head_mode != HeadMode::DecoderOnly) loss += loss_value(en, loss_cfg);
    if (head_mode != HeadMode::EncoderOnly) loss += loss_value(de, loss_cfg);
    return loss;
}

// ---------------------------------------------------------------------------
// Checkpoint (JSON)
// ---------------------------------------------------------------------------

inline nlohmann::json model_to_json(const ModelParams& params,
                                    const std::vector<std::uint64_t>& seed_lineage = {}) {
    nlohmann::json j;
    j["format"] = "aocids-model";
    j["version"] = 1;
    j["sizes"] = params.spec.sizes;
    j["hidden_activation"] = activation_name(params.spec.hidden_activation);
    j["output_activation"] = activation_name(params.spec.output_activation);
    j["weights"] = params.weights;
    j["biases"] = params.biases;
    if (!seed_lineage.empty()) j["seed_lineage"] = seed_lineage;
    return j;
}

inline ModelParams model_from_json(const nlohmann::json& j,
                                   std::vector<std::uint64_t>* seed_lineage = nullptr) {
    if (j.value("format", "") != "aocids-model" || j.value("version", 0) != 1) {
        throw std::runtime_error("model checkpoint: unrecognized format/version");
    }
    ModelParams p;
    p.spec.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    p.spec.hidden_activation = activation_from_name(j.at("hidden_activation").get<std::string>());
    p.spec.output_activation = activation_from_name(j.at("output_activation").get<std::string>());
    p.spec.validate();
    p.weights = j.at("weights").get<std::vector<Vec>>();
    p.biases = j.at("biases").get<std::vector<Vec>>();
    const std::size_t L = p.spec.layer_count();
    if (p.weights.size() != L || p.biases.size() != L) {
        throw std::runtime_error("model checkpoint: layer count mismatch");
    }
    for (std::size_t l = 0; l < L; ++l) {
        if (p.weights[l].size() != p.spec.sizes[l] * p.spec.sizes[l + 1] ||
            p.biases[l].size() != p.spec.sizes[l + 1]) {
            throw std::runtime_error("model checkpoint: parameter shape mismatch in layer " +
                                     std::to_string(l));
        }
    }
    if (seed_lineage && j.contains("seed_lineage")) {
        *seed_lineage = j["seed_lineage"].get<std::vector<std::uint64_t>>();
    }
    return p;
}

inline void save_model(const std::string& path, const ModelParams& params,
                       const std::vector<std::uint64_t>& seed_lineage = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("model checkpoint: cannot write " + path);
    out << model_to_json(params, seed_lineage).dump() << "\n";
}

inline ModelParams load_model(const std::string& path,
                              std::vector<std::uint64_t>* seed_lineage = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("model checkpoint: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return model_from_json(j, seed_lineage);
}

}  // namespace aocids
