// Online adaptation loop: initial training, per-round decision refresh,
// pseudo-labeling with alarms, random label flipping, dataset expansion, and
// periodic fine-tuning. Stream examples keep their true labels behind an
// audited accessor so the training path provably never reads them.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "aocids/dataset.hpp"
#include "aocids/decision.hpp"
#include "aocids/eval.hpp"
#include "aocids/loss.hpp"
#include "aocids/model.hpp"
#include "aocids/rng.hpp"

namespace aocids {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct OnlineConfig {
    LayerSpec layers;
    LossConfig loss;
    HeadMode heads = HeadMode::Both;
    DecisionRule decision = DecisionRule::Gaussian;
    double fixed_percentile = 5.0;
    std::size_t epoch0 = 4;
    std::size_t epoch1 = 1;
    std::size_t chunk = 2000;   // stream examples per round
    double lambda = 0.2;        // flipped fraction of each round's pseudo-labels
    std::uint64_t seed = 1;
    TrainConfig train;
    bool pin_mixture_weights = false;

    void validate() const {
        layers.validate();
        validate_loss_config(loss);
        if (lambda < 0.0 || lambda >= 0.5) {
            throw std::invalid_argument("online config: lambda must lie in [0, 0.5)");
        }
        if (chunk == 0) throw std::invalid_argument("online config: chunk must be positive");
        if (fixed_percentile < 0.0 || fixed_percentile > 100.0) {
            throw std::invalid_argument("online config: fixed percentile out of range");
        }
        if (train.batch_size == 0) throw std::invalid_argument("online config: batch size must be positive");
        if (!(train.learning_rate > 0.0)) throw std::invalid_argument("online config: learning rate must be positive");
    }
};

inline std::string head_mode_name(HeadMode m) {
    switch (m) {
        case HeadMode::Both: return "both";
        case HeadMode::EncoderOnly: return "encoder";
        case HeadMode::DecoderOnly: return "decoder";
    }
    throw std::logic_error("head_mode_name: bad enum");
}

inline HeadMode head_mode_from_name(const std::string& s) {
    if (s == "both") return HeadMode::Both;
    if (s == "encoder") return HeadMode::EncoderOnly;
    if (s == "decoder") return HeadMode::DecoderOnly;
    throw std::runtime_error("unknown head mode '" + s + "'");
}

inline nlohmann::json config_to_json(const OnlineConfig& cfg) {
    nlohmann::json j;
    j["layers"] = cfg.layers.sizes;
    j["hidden_activation"] = activation_name(cfg.layers.hidden_activation);
    j["output_activation"] = activation_name(cfg.layers.output_activation);
    j["loss"] = cfg.loss.variant == LossVariant::CRC ? "crc" : "infonce";
    j["tau"] = cfg.loss.tau;
    j["heads"] = head_mode_name(cfg.heads);
    j["decision"] = cfg.decision == DecisionRule::Gaussian
                        ? std::string("gaussian")
                        : "fixed:" + std::to_string(cfg.fixed_percentile);
    j["epoch0"] = cfg.epoch0;
    j["epoch1"] = cfg.epoch1;
    j["chunk"] = cfg.chunk;
    j["lambda"] = cfg.lambda;
    j["seed"] = cfg.seed;
    j["learning_rate"] = cfg.train.learning_rate;
    j["batch_size"] = cfg.train.batch_size;
    j["pin_mixture_weights"] = cfg.pin_mixture_weights;
    return j;
}

// ---------------------------------------------------------------------------
// Hidden labels
// ---------------------------------------------------------------------------

struct LabelAudit {
    std::size_t reveals = 0;
};

// A stream example's true label. The only way to read it is through reveal(),
// which counts the access against an audit object, so "training never reads
// stream truth" is checkable: the training-path audit must stay at zero.
class HiddenLabel {
public:
    explicit HiddenLabel(int value) : value_(value) {}
    int reveal(LabelAudit& audit) const {
        ++audit.reveals;
        return value_;
    }

private:
    int value_;
};

struct StreamItem {
    Vec x;
    HiddenLabel truth;
    std::string category;
    std::string attack_type;
    std::size_t index = 0;  // position in the stream
};

inline std::vector<StreamItem> make_stream(const std::vector<LabeledExample>& examples) {
    std::vector<StreamItem> out;
    out.reserve(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const auto& e = examples[i];
        out.push_back({e.x, HiddenLabel(e.y), e.category, e.attack_type, i});
    }
    return out;
}

// ---------------------------------------------------------------------------
// State
// ---------------------------------------------------------------------------

struct RoundRecord {
    std::size_t round = 0;
    std::size_t chunk_size = 0;
    std::size_t alert_count = 0;
    std::size_t flip_count = 0;
    Metrics pseudo;  // pre-flip pseudo-labels vs hidden truths (audit only)
    std::size_t em_iterations_en = 0;
    std::size_t em_iterations_de = 0;
    bool em_collapsed_en = false;
    bool em_collapsed_de = false;
    double wall_ms = 0.0;  // excluded from digests
};

struct OnlineState {
    OnlineConfig config;
    ModelParams params;
    std::vector<LabeledExample> X;  // X0 prefix, then pseudo-labeled extensions
    std::size_t x0_count = 0;
    DecisionContext decision;
    std::size_t round = 0;
    rng::Engine engine{0};
    LabelAudit training_audit;  // must stay 0; nothing in this module touches it
    LabelAudit eval_audit;
    std::vector<RoundRecord> records;
    std::size_t alerts_total = 0;
};

struct AlertEvent {
    std::size_t stream_index = 0;
    std::size_t round = 0;
    int label = 1;
    HeadDecision en;
    HeadDecision de;
    std::string timestamp;  // wall clock, excluded from digests
};

namespace detail {

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::vector<SampleRef> sample_refs(const std::vector<LabeledExample>& examples) {
    std::vector<SampleRef> refs;
    refs.reserve(examples.size());
    for (const auto& e : examples) refs.push_back({&e.x, e.y});
    return refs;
}

}  // namespace detail

inline std::string alert_to_jsonl(const AlertEvent& a) {
    nlohmann::json j;
    j["stream_index"] = a.stream_index;
    j["round"] = a.round;
    j["label"] = a.label;
    j["en"] = {{"label", a.en.label}, {"confidence", a.en.confidence}};
    j["de"] = {{"label", a.de.label}, {"confidence", a.de.confidence}};
    j["timestamp"] = a.timestamp;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Algorithm steps
// ---------------------------------------------------------------------------

// Train on the labeled initial dataset and seed the expanded set X with it.
inline OnlineState initialize(const Dataset& initial, const OnlineConfig& cfg) {
    cfg.validate();
    if (initial.normal_count() < 2 || initial.abnormal_count() < 1) {
        throw std::runtime_error("initialize: initial dataset needs at least 2 normals and 1 abnormal");
    }
    for (const auto& e : initial.examples) {
        if (e.x.size() != cfg.layers.input_dim()) {
            throw std::runtime_error("initialize: example width " + std::to_string(e.x.size()) +
                                     " does not match input layer " +
                                     std::to_string(cfg.layers.input_dim()));
        }
    }
    OnlineState st;
    st.config = cfg;
    st.params = init_params(cfg.layers, cfg.seed);
    // separate stream for everything after weight init (flips, shuffles)
    st.engine = rng::make_engine(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
    st.X = initial.examples;
    st.x0_count = st.X.size();
    if (cfg.epoch0 > 0) {
        train_epochs(st.params, detail::sample_refs(st.X), cfg.loss, cfg.heads, cfg.train,
                     cfg.epoch0, st.engine);
    }
    return st;
}

// Recompute anchors from X0 true normals under the current parameters, score
// every example currently in X, and refit the per-head decision structures.
inline void refresh_decision(OnlineState& st) {
    const auto& cfg = st.config;
    std::vector<Vec> en_normals, de_normals;
    for (std::size_t i = 0; i < st.x0_count; ++i) {
        if (st.X[i].y != 0) continue;
        auto out = forward(st.params, st.X[i].x, false);
        en_normals.push_back(std::move(out.u_en));
        de_normals.push_back(std::move(out.u_de));
    }
    DecisionContext ctx;
    ctx.rule = cfg.decision;
    ctx.anchor.mean_normal_en = mean_normal(en_normals);
    ctx.anchor.mean_normal_de = mean_normal(de_normals);
    en_normals.clear();
    de_normals.clear();

    std::vector<double> scores_en, scores_de;
    std::vector<double> x0_normal_en, x0_normal_de;
    scores_en.reserve(st.X.size());
    scores_de.reserve(st.X.size());
    for (std::size_t i = 0; i < st.X.size(); ++i) {
        const auto out = forward(st.params, st.X[i].x, false);
        const double s_en = cosine_sim(ctx.anchor.mean_normal_en, out.u_en);
        const double s_de = cosine_sim(ctx.anchor.mean_normal_de, out.u_de);
        scores_en.push_back(s_en);
        scores_de.push_back(s_de);
        if (i < st.x0_count && st.X[i].y == 0) {
            x0_normal_en.push_back(s_en);
            x0_normal_de.push_back(s_de);
        }
    }

    if (cfg.decision == DecisionRule::Gaussian) {
        EmOptions opts;
        opts.pin_weights = cfg.pin_mixture_weights;
        RoundRecord* rec = st.records.empty() ? nullptr : &st.records.back();
        if (cfg.heads != HeadMode::DecoderOnly) {
            EmTrace trace;
            ctx.en = fit_two_gaussians(scores_en, opts, &trace);
            if (rec && rec->round == st.round) {
                rec->em_iterations_en = trace.iterations;
                rec->em_collapsed_en = trace.collapsed;
            }
        }
        if (cfg.heads != HeadMode::EncoderOnly) {
            EmTrace trace;
            ctx.de = fit_two_gaussians(scores_de, opts, &trace);
            if (rec && rec->round == st.round) {
                rec->em_iterations_de = trace.iterations;
                rec->em_collapsed_de = trace.collapsed;
            }
        }
    } else {
        ctx.fixed.percentile = cfg.fixed_percentile;
        ctx.fixed.en = percentile_threshold(x0_normal_en, cfg.fixed_percentile);
        ctx.fixed.de = percentile_threshold(x0_normal_de, cfg.fixed_percentile);
    }
    st.decision = std::move(ctx);
}

struct PseudoResult {
    std::vector<int> labels;  // pre-flip verdicts, one per chunk item
    std::vector<AlertEvent> alerts;
};

// Forward, score against the anchors, decide per head, vote (or bypass under
// a single-head mode). Alarms reflect these verdicts before any flipping.
inline PseudoResult pseudo_label_chunk(const OnlineState& st, std::span<const StreamItem> chunk) {
    PseudoResult out;
    out.labels.reserve(chunk.size());
    const std::string stamp = detail::utc_timestamp();
    for (const auto& item : chunk) {
        const auto fwd = forward(st.params, item.x, false);
        const Decision d = decide(st.decision, fwd.u_en, fwd.u_de, st.config.heads);
        out.labels.push_back(d.label);
        if (d.label == 1) {
            out.alerts.push_back({item.index, st.round, 1, d.en, d.de, stamp});
        }
    }
    return out;
}

// Flip exactly round(lambda*n) labels (half-up), positions uniform without
// replacement. Applied to the training copies only.
inline std::vector<int> random_flip(const std::vector<int>& labels, double lambda,
                                    rng::Engine& engine,
                                    std::vector<std::size_t>* positions_out = nullptr) {
    if (lambda < 0.0 || lambda >= 0.5) throw std::invalid_argument("random_flip: lambda out of range");
    std::vector<int> out(labels);
    const auto k = static_cast<std::size_t>(
        std::floor(lambda * static_cast<double>(labels.size()) + 0.5));
    auto positions = rng::sample_without_replacement(labels.size(), k, engine);
    for (std::size_t p : positions) out[p] = 1 - out[p];
    if (positions_out) *positions_out = std::move(positions);
    return out;
}

// Extend X with the chunk under its (flipped) pseudo-labels and fine-tune on
// the whole expanded dataset.
inline void adapt(OnlineState& st, std::span<const StreamItem> chunk,
                  const std::vector<int>& flipped_labels) {
    if (chunk.size() != flipped_labels.size()) {
        throw std::invalid_argument("adapt: chunk/labels size mismatch");
    }
    st.X.reserve(st.X.size() + chunk.size());
    for (std::size_t i = 0; i < chunk.size(); ++i) {
        LabeledExample e;
        e.x = chunk[i].x;
        e.y = flipped_labels[i];
        e.provenance = Provenance::Pseudo;
        st.X.push_back(std::move(e));
    }
    if (st.config.epoch1 > 0) {
        train_epochs(st.params, detail::sample_refs(st.X), st.config.loss, st.config.heads,
                     st.config.train, st.config.epoch1, st.engine);
    }
    ++st.round;
}

// ---------------------------------------------------------------------------
// Evaluation against a labeled test set
// ---------------------------------------------------------------------------

struct EvalResult {
    std::vector<int> predictions;
    Metrics metrics;
    std::vector<CategoryRecall> categories;
};

inline EvalResult evaluate_dataset(const OnlineState& st, const Dataset& test,
                                   const std::vector<std::string>& train_attack_types = {}) {
    if (test.examples.empty()) throw std::invalid_argument("evaluate: empty test set");
    const std::set<std::string> seen(train_attack_types.begin(), train_attack_types.end());
    EvalResult out;
    out.predictions.reserve(test.examples.size());
    std::vector<int> truths;
    truths.reserve(test.examples.size());
    std::vector<CategoryTag> tags;
    tags.reserve(test.examples.size());
    for (const auto& e : test.examples) {
        const auto fwd = forward(st.params, e.x, false);
        const Decision d = decide(st.decision, fwd.u_en, fwd.u_de, st.config.heads);
        out.predictions.push_back(d.label);
        truths.push_back(e.y);
        tags.push_back({e.y == 1, e.category, e.y == 1 && seen.count(e.attack_type) == 0});
    }
    out.metrics = metrics(out.predictions, truths);
    out.categories = zero_day_recall(out.predictions, tags);
    return out;
}

// ---------------------------------------------------------------------------
// Run report
// ---------------------------------------------------------------------------

struct RunReport {
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::vector<RoundRecord> rounds;
    Metrics test_metrics;
    std::vector<CategoryRecall> categories;
    std::size_t alerts_total = 0;
    double wall_ms = 0.0;
    std::string digest;  // FNV-1a 64 over the canonical JSON, volatile fields removed
};

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace detail {

inline nlohmann::json metric_value_json(const MetricValue& v) {
    return v.defined ? nlohmann::json(v.value) : nlohmann::json(nullptr);
}

inline nlohmann::json metrics_json(const Metrics& m) {
    nlohmann::json j;
    j["accuracy"] = metric_value_json(m.accuracy);
    j["precision"] = metric_value_json(m.precision);
    j["recall"] = metric_value_json(m.recall);
    j["f1"] = metric_value_json(m.f1);
    j["counts"] = {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn}, {"fn", m.counts.fn}};
    return j;
}

inline nlohmann::json round_record_json(const RoundRecord& r, bool with_wall) {
    nlohmann::json j;
    j["round"] = r.round;
    j["chunk_size"] = r.chunk_size;
    j["alerts"] = r.alert_count;
    j["flips"] = r.flip_count;
    j["pseudo"] = metrics_json(r.pseudo);
    j["em"] = {{"en_iterations", r.em_iterations_en},
               {"de_iterations", r.em_iterations_de},
               {"en_collapsed", r.em_collapsed_en},
               {"de_collapsed", r.em_collapsed_de}};
    if (with_wall) j["wall_ms"] = r.wall_ms;
    return j;
}

}  // namespace detail

inline nlohmann::json report_to_json(const RunReport& rep, bool with_volatile = true) {
    nlohmann::json j;
    j["format"] = "aocids-run-report";
    j["version"] = 1;
    j["config"] = rep.config;
    j["seed"] = rep.seed;
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& r : rep.rounds) rounds.push_back(detail::round_record_json(r, with_volatile));
    j["rounds"] = std::move(rounds);
    j["test"] = detail::metrics_json(rep.test_metrics);
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& c : rep.categories) {
        cats.push_back({{"key", c.key}, {"detected", c.detected}, {"total", c.total}, {"recall", c.recall}});
    }
    j["categories"] = std::move(cats);
    j["alerts_total"] = rep.alerts_total;
    if (with_volatile) {
        j["wall_ms"] = rep.wall_ms;
        if (!rep.digest.empty()) j["digest"] = rep.digest;
    }
    return j;
}

inline std::string compute_report_digest(const RunReport& rep) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(report_to_json(rep, false).dump())));
    return buf;
}

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

namespace detail {

inline Metrics metrics_from_json(const nlohmann::json& j) {
    Metrics m;
    const auto& c = j.at("counts");
    m.counts = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                c.at("tn").get<std::size_t>(), c.at("fn").get<std::size_t>()};
    return metrics_from_counts(m.counts);
}

inline RoundRecord round_record_from_json(const nlohmann::json& j) {
    RoundRecord r;
    r.round = j.at("round").get<std::size_t>();
    r.chunk_size = j.at("chunk_size").get<std::size_t>();
    r.alert_count = j.at("alerts").get<std::size_t>();
    r.flip_count = j.at("flips").get<std::size_t>();
    r.pseudo = metrics_from_json(j.at("pseudo"));
    const auto& em = j.at("em");
    r.em_iterations_en = em.at("en_iterations").get<std::size_t>();
    r.em_iterations_de = em.at("de_iterations").get<std::size_t>();
    r.em_collapsed_en = em.at("en_collapsed").get<bool>();
    r.em_collapsed_de = em.at("de_collapsed").get<bool>();
    return r;
}

}  // namespace detail

// Everything needed to continue a run: parameters, RNG stream, round index,
// the pseudo-labels assigned so far (features are rebuilt from the stream),
// and the round records accumulated for the final report.
inline void save_snapshot(const std::string& path, const OnlineState& st) {
    nlohmann::json j;
    j["format"] = "aocids-snapshot";
    j["version"] = 1;
    j["config"] = config_to_json(st.config);
    j["round"] = st.round;
    j["consumed"] = st.X.size() - st.x0_count;
    j["model"] = model_to_json(st.params);
    j["rng_state"] = rng::save_state(st.engine);
    j["decision"] = decision_context_to_json(st.decision);
    std::vector<int> pseudo_labels;
    pseudo_labels.reserve(st.X.size() - st.x0_count);
    for (std::size_t i = st.x0_count; i < st.X.size(); ++i) pseudo_labels.push_back(st.X[i].y);
    j["pseudo_labels"] = std::move(pseudo_labels);
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& r : st.records) rounds.push_back(detail::round_record_json(r, false));
    j["rounds"] = std::move(rounds);
    j["alerts_total"] = st.alerts_total;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("snapshot: cannot write " + path);
    out << j.dump() << "\n";
}

inline OnlineState resume_state(const std::string& path, const Dataset& initial,
                                const std::vector<StreamItem>& stream, const OnlineConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "aocids-snapshot" || j.value("version", 0) != 1) {
        throw std::runtime_error("snapshot: unrecognized format/version");
    }
    if (j.at("config") != config_to_json(cfg)) {
        throw std::runtime_error("snapshot: configuration does not match the current run");
    }
    OnlineState st;
    st.config = cfg;
    st.params = model_from_json(j.at("model"));
    rng::load_state(st.engine, j.at("rng_state").get<std::string>());
    st.X = initial.examples;
    st.x0_count = st.X.size();
    const auto consumed = j.at("consumed").get<std::size_t>();
    if (consumed > stream.size()) throw std::runtime_error("snapshot: consumed exceeds stream length");
    const auto pseudo_labels = j.at("pseudo_labels").get<std::vector<int>>();
    if (pseudo_labels.size() != consumed) throw std::runtime_error("snapshot: pseudo label count mismatch");
    st.X.reserve(st.x0_count + consumed);
    for (std::size_t i = 0; i < consumed; ++i) {
        LabeledExample e;
        e.x = stream[i].x;
        e.y = pseudo_labels[i];
        e.provenance = Provenance::Pseudo;
        st.X.push_back(std::move(e));
    }
    st.round = j.at("round").get<std::size_t>();
    st.decision = decision_context_from_json(j.at("decision"));
    for (const auto& jr : j.at("rounds")) st.records.push_back(detail::round_record_from_json(jr));
    st.alerts_total = j.at("alerts_total").get<std::size_t>();
    return st;
}

// ---------------------------------------------------------------------------
// Full protocol
// ---------------------------------------------------------------------------

struct RunOptions {
    std::ostream* alert_sink = nullptr;   // JSON-lines alarm log
    std::ostream* debug_sink = nullptr;   // per-round decision structures, JSON-lines
    std::string snapshot_dir;             // per-round state snapshots when nonempty
    std::string resume_path;              // continue from this snapshot when nonempty
    std::vector<std::string> train_attack_types;  // seen/unseen split for recall
    OnlineState* final_state = nullptr;   // receives the post-run state when set
};

// initialize -> per chunk: refresh, pseudo-label, flip, adapt -> final refresh
// -> evaluate. An empty stream reduces to train-then-evaluate.
inline RunReport run_online(const Dataset& initial, const std::vector<StreamItem>& stream,
                            const Dataset& test, const OnlineConfig& cfg,
                            const RunOptions& opts = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    OnlineState st = opts.resume_path.empty() ? initialize(initial, cfg)
                                              : resume_state(opts.resume_path, initial, stream, cfg);

    const auto ranges = chunk_ranges(stream.size(), cfg.chunk);
    for (std::size_t r = st.round; r < ranges.size(); ++r) {
        const auto t_round = std::chrono::steady_clock::now();
        const std::span<const StreamItem> chunk(stream.data() + ranges[r].begin, ranges[r].size());

        RoundRecord rec;
        rec.round = st.round;
        rec.chunk_size = chunk.size();
        st.records.push_back(rec);

        refresh_decision(st);
        if (opts.debug_sink) {
            nlohmann::json dj = decision_context_to_json(st.decision);
            dj["round"] = st.round;
            *opts.debug_sink << dj.dump() << "\n";
        }

        const PseudoResult pseudo = pseudo_label_chunk(st, chunk);
        for (const auto& a : pseudo.alerts) {
            if (opts.alert_sink) *opts.alert_sink << alert_to_jsonl(a) << "\n";
        }
        st.alerts_total += pseudo.alerts.size();

        // audit only: compare pre-flip pseudo-labels against hidden truths
        std::vector<int> truths;
        truths.reserve(chunk.size());
        for (const auto& item : chunk) truths.push_back(item.truth.reveal(st.eval_audit));
        RoundRecord& stored = st.records.back();
        stored.alert_count = pseudo.alerts.size();
        stored.pseudo = metrics(pseudo.labels, truths);

        std::vector<std::size_t> flip_positions;
        const std::vector<int> flipped =
            random_flip(pseudo.labels, cfg.lambda, st.engine, &flip_positions);
        stored.flip_count = flip_positions.size();

        adapt(st, chunk, flipped);

        stored.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t_round)
                             .count();
        if (!opts.snapshot_dir.empty()) {
            char name[32];
            std::snprintf(name, sizeof(name), "round_%04zu.json", st.round);
            save_snapshot(opts.snapshot_dir + "/" + name, st);
        }
    }

    // decision structures must reflect the final parameters before evaluation
    refresh_decision(st);
    const EvalResult eval = evaluate_dataset(st, test, opts.train_attack_types);

    RunReport rep;
    rep.config = config_to_json(cfg);
    rep.seed = cfg.seed;
    rep.rounds = st.records;
    rep.test_metrics = eval.metrics;
    rep.categories = eval.categories;
    rep.alerts_total = st.alerts_total;
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
    rep.digest = compute_report_digest(rep);
    if (opts.final_state) *opts.final_state = std::move(st);
    return rep;
}

// Full labeled training set, no streaming: the upper-bound comparison row.
inline RunReport run_offline(const Dataset& train, const Dataset& test, const OnlineConfig& cfg,
                             const RunOptions& opts = {}) {
    return run_online(train, {}, test, cfg, opts);
}

}  // namespace aocids
