// Acceptance gate for the intrusion-detection artifact.
//
// Prints exactly one verdict line per criterion on stdout:
//
//   C<k> PASS: <measured values and pinned tolerances>
//   C<k> FAIL: <what missed>
//   C<k> SKIP: <why it could not run>
//
// and exits nonzero iff any criterion FAILs. Criteria 1-5 replay the
// published-dataset protocols and need $AOCIDS_DATA pointing at:
//
//   $AOCIDS_DATA/nsl-kdd/KDDTrain+.txt          KDDTest+.txt
//   $AOCIDS_DATA/unsw-nb15/UNSW_NB15_training-set.csv   UNSW_NB15_testing-set.csv
//
// Without the data they SKIP (exit 0); pass --require-data to turn those
// SKIPs into FAILs. Criterion 6 is the embedded property suite: synthetic
// inputs only, bounded by its own stopwatch.
//
// Knobs for constrained machines (results are reported with the profile used):
//   AOCIDS_NSL_SEEDS    seeds averaged for criterion 1 (default 5)
//   AOCIDS_UNSW_SEEDS   seeds averaged for criterion 2 (default 1)
//   AOCIDS_UNSW_EPOCH0  initial training epochs for criterion 2 (default 300)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aocids/aocids.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

namespace fs = std::filesystem;
using namespace aocids;

namespace {

// ============================================================
// Pinned targets and tolerances
// ============================================================

constexpr double kNslAccTarget = 88.90;   // published NSL-KDD online accuracy
constexpr double kNslF1Target = 90.81;    // published NSL-KDD online F1
constexpr double kUnswAccTarget = 89.19;  // published UNSW-NB15 online accuracy
constexpr double kUnswF1Target = 90.14;   // published UNSW-NB15 online F1
constexpr double kMetricTolerance = 3.0;  // accepted band, percentage points
constexpr double kOrderingMinGain = 1.0;  // online - initial floor, points
constexpr double kUnseenRecallFloor = 85.0;  // percent, per attack family
constexpr double kPropertyBudget = 120.0;    // seconds for criterion 6

// ============================================================
// Verdict plumbing
// ============================================================

bool g_require_data = false;
bool g_any_fail = false;
int g_pass = 0, g_fail = 0, g_skip = 0;

void emit(int id, const std::string& status, const std::string& detail) {
    std::cout << "C" << id << " " << status << ": " << detail << "\n" << std::flush;
    if (status == "PASS") ++g_pass;
    if (status == "FAIL") {
        ++g_fail;
        g_any_fail = true;
    }
    if (status == "SKIP") ++g_skip;
}

void skip_or_fail(int id, const std::string& detail) {
    if (g_require_data) emit(id, "FAIL", detail + " (--require-data)");
    else emit(id, "SKIP", detail);
}

void note(const std::string& msg) { std::cerr << "[acceptance] " << msg << "\n" << std::flush; }

std::string fmt(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t env_size(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    const auto parsed = std::strtoull(v, nullptr, 10);
    return parsed > 0 ? static_cast<std::size_t>(parsed) : fallback;
}

// ============================================================
// Dataset plumbing
// ============================================================

struct LoadedPair {
    Dataset train;
    Dataset test;
    std::vector<std::string> attack_types;  // types present in the training file
};

std::optional<std::string> data_root() {
    const char* v = std::getenv("AOCIDS_DATA");
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

std::optional<LoadedPair> load_pair(const std::string& root, const std::string& sub,
                                    const std::string& train_name, const std::string& test_name,
                                    const std::string& descriptor_name, std::string* problem) {
    const fs::path train_path = fs::path(root) / sub / train_name;
    const fs::path test_path = fs::path(root) / sub / test_name;
    for (const auto& p : {train_path, test_path}) {
        if (!fs::exists(p)) {
            *problem = "missing " + p.string();
            return std::nullopt;
        }
    }
    const std::string desc_path =
        std::string(AOCIDS_SOURCE_DIR) + "/configs/descriptors/" + descriptor_name;
    const DatasetDescriptor desc = load_descriptor(desc_path);
    const RawTable train_raw = load_raw_csv(train_path.string(), desc);
    const FeatureSchema schema =
        infer_schema(train_raw.records, train_raw.feature_columns, desc.declared_kinds);
    LoadedPair out;
    out.train = encode_dataset(train_raw, schema, desc);
    const RawTable test_raw = load_raw_csv(test_path.string(), desc);
    out.test = encode_dataset(test_raw, schema, desc);
    out.attack_types = collect_attack_types(out.train);
    note(sub + ": train " + std::to_string(out.train.examples.size()) + " rows, test " +
         std::to_string(out.test.examples.size()) + " rows, encoded width " +
         std::to_string(schema.encoded_dim));
    return out;
}

// Dataset-default hyperparameters; input/output widths follow the encoding.
OnlineConfig nsl_config(std::size_t dim, std::uint64_t seed) {
    OnlineConfig cfg;
    cfg.layers.sizes = {dim, 64, 32, 64, dim};
    cfg.epoch0 = 4;
    cfg.epoch1 = 1;
    cfg.chunk = 2000;
    cfg.lambda = 0.2;
    cfg.seed = seed;
    return cfg;
}

OnlineConfig unsw_config(std::size_t dim, std::uint64_t seed, std::size_t epoch0) {
    OnlineConfig cfg;
    cfg.layers.sizes = {dim, 128, 64, 128, dim};
    cfg.epoch0 = epoch0;
    cfg.epoch1 = 3;
    cfg.chunk = 2784;
    cfg.lambda = 0.05;
    cfg.seed = seed;
    return cfg;
}

struct Outcome {
    double acc = std::nan("");
    double f1 = std::nan("");
    RunReport rep;
};

double pct(const MetricValue& v) { return v.defined ? v.value * 100.0 : std::nan(""); }

Outcome online_run(const LoadedPair& data, const OnlineConfig& cfg, double initial_fraction) {
    SplitResult split = split_initial(data.train, {initial_fraction, cfg.chunk, cfg.seed});
    RunOptions opts;
    opts.train_attack_types = data.attack_types;
    Outcome out;
    out.rep = run_online(split.initial, make_stream(split.stream), data.test, cfg, opts);
    out.acc = pct(out.rep.test_metrics.accuracy);
    out.f1 = pct(out.rep.test_metrics.f1);
    return out;
}

bool within(double measured, double target, double tol) {
    return std::isfinite(measured) && std::abs(measured - target) <= tol;
}

// ============================================================
// Criteria 1 and 2: published-protocol reproduction
// ============================================================

// Returns the first-seed outcome so later criteria can reuse it.
std::optional<Outcome> criterion_nsl(const std::optional<LoadedPair>& nsl,
                                     const std::string& problem) {
    if (!nsl) {
        skip_or_fail(1, problem);
        return std::nullopt;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t seeds = env_size("AOCIDS_NSL_SEEDS", 5);
    const std::size_t dim = nsl->train.schema.encoded_dim;

    std::optional<Outcome> first;
    std::vector<double> accs, f1s;
    for (std::size_t s = 1; s <= seeds; ++s) {
        const auto ts = std::chrono::steady_clock::now();
        Outcome o = online_run(*nsl, nsl_config(dim, s), 0.2);
        note("nsl-kdd seed " + std::to_string(s) + ": acc " + fmt(o.acc) + ", f1 " + fmt(o.f1) +
             ", digest " + o.rep.digest + " (" + fmt(seconds_since(ts), 1) + " s)");
        accs.push_back(o.acc);
        f1s.push_back(o.f1);
        if (!first) first = std::move(o);
    }
    const double acc = aggregate(accs).mean;
    const double f1 = aggregate(f1s).mean;
    const bool ok = within(acc, kNslAccTarget, kMetricTolerance) &&
                    within(f1, kNslF1Target, kMetricTolerance);
    emit(1, ok ? "PASS" : "FAIL",
         "nsl-kdd " + std::to_string(seeds) + "-seed mean acc " + fmt(acc) + " (target " +
             fmt(kNslAccTarget) + " +/-" + fmt(kMetricTolerance, 1) + "), mean f1 " + fmt(f1) +
             " (target " + fmt(kNslF1Target) + " +/-" + fmt(kMetricTolerance, 1) + "), " +
             fmt(seconds_since(t0), 1) + " s");
    return first;
}

void criterion_unsw(const std::string& root) {
    std::string problem;
    const auto unsw = load_pair(root, "unsw-nb15", "UNSW_NB15_training-set.csv",
                                "UNSW_NB15_testing-set.csv", "unsw-nb15.json", &problem);
    if (!unsw) {
        skip_or_fail(2, problem);
        return;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t seeds = env_size("AOCIDS_UNSW_SEEDS", 1);
    const std::size_t epoch0 = env_size("AOCIDS_UNSW_EPOCH0", 300);
    const std::size_t dim = unsw->train.schema.encoded_dim;

    std::vector<double> accs, f1s;
    for (std::size_t s = 1; s <= seeds; ++s) {
        const auto ts = std::chrono::steady_clock::now();
        const Outcome o = online_run(*unsw, unsw_config(dim, s, epoch0), 0.2);
        note("unsw-nb15 seed " + std::to_string(s) + ": acc " + fmt(o.acc) + ", f1 " +
             fmt(o.f1) + ", digest " + o.rep.digest + " (" + fmt(seconds_since(ts), 1) + " s)");
        accs.push_back(o.acc);
        f1s.push_back(o.f1);
    }
    const double acc = aggregate(accs).mean;
    const double f1 = aggregate(f1s).mean;
    const bool ok = within(acc, kUnswAccTarget, kMetricTolerance) &&
                    within(f1, kUnswF1Target, kMetricTolerance);
    const std::string profile = epoch0 == 300
                                    ? std::string("full profile")
                                    : "reduced profile epoch0=" + std::to_string(epoch0);
    emit(2, ok ? "PASS" : "FAIL",
         "unsw-nb15 " + std::to_string(seeds) + "-seed mean acc " + fmt(acc) + " (target " +
             fmt(kUnswAccTarget) + " +/-" + fmt(kMetricTolerance, 1) + "), mean f1 " + fmt(f1) +
             " (target " + fmt(kUnswF1Target) + " +/-" + fmt(kMetricTolerance, 1) + "), " +
             profile + ", " + fmt(seconds_since(t0), 1) + " s");
}

// ============================================================
// Criterion 3: offline > online > initial-only ordering
// ============================================================

void criterion_ordering(const std::optional<LoadedPair>& nsl, const std::string& problem,
                        const std::optional<Outcome>& online_seed1) {
    if (!nsl || !online_seed1) {
        skip_or_fail(3, problem);
        return;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t dim = nsl->train.schema.encoded_dim;
    const OnlineConfig cfg = nsl_config(dim, 1);

    // Same labeled prefix the online run started from, with the stream withheld.
    SplitResult split = split_initial(nsl->train, {0.2, cfg.chunk, cfg.seed});
    RunOptions opts;
    opts.train_attack_types = nsl->attack_types;
    const RunReport initial_rep =
        run_online(split.initial, {}, nsl->test, cfg, opts);
    const RunReport offline_rep = run_offline(nsl->train, nsl->test, cfg, opts);

    const double initial_acc = pct(initial_rep.test_metrics.accuracy);
    const double online_acc = online_seed1->acc;
    const double offline_acc = pct(offline_rep.test_metrics.accuracy);
    const double gain = online_acc - initial_acc;
    const bool ok = offline_acc > online_acc && online_acc > initial_acc &&
                    gain >= kOrderingMinGain;
    emit(3, ok ? "PASS" : "FAIL",
         "nsl-kdd acc offline " + fmt(offline_acc) + " > online " + fmt(online_acc) +
             " > initial " + fmt(initial_acc) + ", online-initial +" + fmt(gain) +
             " (floor +" + fmt(kOrderingMinGain, 1) + "), " + fmt(seconds_since(t0), 1) + " s");
}

// ============================================================
// Criterion 4: ablation directionality
// ============================================================

void criterion_ablations(const std::optional<LoadedPair>& nsl, const std::string& problem,
                         const std::optional<Outcome>& base) {
    if (!nsl || !base) {
        skip_or_fail(4, problem);
        return;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t dim = nsl->train.schema.encoded_dim;

    auto variant = [&](const char* name, auto mutate) {
        OnlineConfig cfg = nsl_config(dim, 1);
        mutate(cfg);
        const Outcome o = online_run(*nsl, cfg, 0.2);
        note(std::string("ablation ") + name + ": acc " + fmt(o.acc) + ", f1 " + fmt(o.f1));
        return o;
    };
    const Outcome infonce =
        variant("infonce", [](OnlineConfig& c) { c.loss.variant = LossVariant::InfoNCE; });
    const Outcome enc_only =
        variant("encoder-only", [](OnlineConfig& c) { c.heads = HeadMode::EncoderOnly; });
    const Outcome dec_only =
        variant("decoder-only", [](OnlineConfig& c) { c.heads = HeadMode::DecoderOnly; });
    const Outcome fixed = variant("fixed-threshold", [](OnlineConfig& c) {
        c.decision = DecisionRule::FixedThreshold;
        c.fixed_percentile = 5.0;
    });

    const bool loss_ok = base->f1 >= infonce.f1;
    const bool heads_ok = base->acc >= enc_only.acc && base->acc >= dec_only.acc;
    const bool rule_ok = base->acc >= fixed.acc;
    emit(4, (loss_ok && heads_ok && rule_ok) ? "PASS" : "FAIL",
         "nsl-kdd seed 1: f1 crc " + fmt(base->f1) + " vs infonce " + fmt(infonce.f1) +
             (loss_ok ? " ok" : " MISS") + "; acc both " + fmt(base->acc) + " vs encoder " +
             fmt(enc_only.acc) + "/decoder " + fmt(dec_only.acc) + (heads_ok ? " ok" : " MISS") +
             "; acc gaussian " + fmt(base->acc) + " vs fixed " + fmt(fixed.acc) +
             (rule_ok ? " ok" : " MISS") + ", " + fmt(seconds_since(t0), 1) + " s");
}

// ============================================================
// Criterion 5: unseen-attack recall per family
// ============================================================

void criterion_zero_day(const std::optional<LoadedPair>& nsl, const std::string& problem,
                        const std::optional<Outcome>& base) {
    if (!nsl || !base) {
        skip_or_fail(5, problem);
        return;
    }
    bool ok = true;
    std::string detail = "nsl-kdd unseen recall";
    for (const char* family : {"DoS", "Probe", "R2L", "U2R"}) {
        const std::string key = std::string(family) + "_unseen";
        const CategoryRecall* row = nullptr;
        for (const auto& c : base->rep.categories) {
            if (c.key == key) row = &c;
        }
        if (!row || row->total == 0) {
            ok = false;
            detail += std::string(" ") + family + " MISSING";
            continue;
        }
        const double r = row->recall * 100.0;
        if (r < kUnseenRecallFloor) ok = false;
        detail += std::string(" ") + family + " " + fmt(r) + "% (" +
                  std::to_string(row->detected) + "/" + std::to_string(row->total) + ")";
    }
    detail += ", floor " + fmt(kUnseenRecallFloor, 0) + "% each";
    emit(5, ok ? "PASS" : "FAIL", detail);
}

// ============================================================
// Criterion 6: embedded property suite (no datasets)
// ============================================================

using PropertyResult = std::optional<std::string>;  // nullopt = pass

PropertyResult property_loss_oracles() {
    auto g = rng::make_engine(77);
    std::size_t cases = 0;
    for (double tau : {1.0, 0.02}) {
        for (std::size_t ln = 2; ln <= 6; ++ln) {
            for (std::size_t la = 1; la <= 6; ++la) {
                const auto normals = synth::random_vectors(g, ln, 4);
                const auto abnormals = synth::random_vectors(g, la, 4);
                BatchRepresentations batch;
                for (const auto& v : normals) batch.normals.push_back(v);
                for (const auto& v : abnormals) batch.abnormals.push_back(v);
                const LossConfig crc{tau, LossVariant::CRC};
                const LossConfig nce{tau, LossVariant::InfoNCE};
                const double crc_got = crc_loss(batch, crc);
                const double crc_want = oracles::crc_reference(normals, abnormals, tau);
                const double nce_got = infonce_loss(batch, nce);
                const double nce_want = oracles::infonce_reference(normals, abnormals, tau);
                if (oracles::rel_err(crc_got, crc_want, 1e-12) > 1e-9) {
                    return "crc mismatch at tau=" + fmt(tau) + " ln=" + std::to_string(ln) +
                           " la=" + std::to_string(la);
                }
                if (oracles::rel_err(nce_got, nce_want, 1e-12) > 1e-9) {
                    return "infonce mismatch at tau=" + fmt(tau) + " ln=" + std::to_string(ln) +
                           " la=" + std::to_string(la);
                }
                ++cases;
            }
        }
    }
    if (cases != 60) return "expected 60 oracle cases, ran " + std::to_string(cases);
    return std::nullopt;
}

PropertyResult property_fd_gradients() {
    for (const auto& [hidden, seed] : std::vector<std::pair<Activation, std::uint64_t>>{
             {Activation::Tanh, 21}, {Activation::ReLU, 22}}) {
        LayerSpec spec;
        spec.sizes = {4, 3, 4};
        spec.hidden_activation = hidden;
        ModelParams params = init_params(spec, seed);

        auto g = rng::make_engine(seed + 100);
        const auto xs = synth::random_vectors(g, 5, 4);
        std::vector<SampleRef> batch;
        for (std::size_t i = 0; i < xs.size(); ++i) batch.push_back({&xs[i], i >= 3 ? 1 : 0});
        const LossConfig loss_cfg{0.5, LossVariant::CRC};

        ModelGrads grads = zero_grads(spec);
        (void)batch_gradients(params, batch, loss_cfg, HeadMode::Both, grads);

        const double h = 1e-5;
        for (std::size_t l = 0; l < params.weights.size(); ++l) {
            for (std::size_t i = 0; i < params.weights[l].size(); ++i) {
                double& w = params.weights[l][i];
                const double saved = w;
                w = saved + h;
                const double up = compute_batch_loss(params, batch, loss_cfg, HeadMode::Both);
                w = saved - h;
                const double dn = compute_batch_loss(params, batch, loss_cfg, HeadMode::Both);
                w = saved;
                const double fd = (up - dn) / (2.0 * h);
                const double diff = std::abs(grads.weights[l][i] - fd);
                if (diff > 1e-4 * std::max(1.0, std::abs(fd))) {
                    return "weight grad mismatch layer " + std::to_string(l) + " index " +
                           std::to_string(i) + " diff " + fmt(diff, 8);
                }
            }
            for (std::size_t i = 0; i < params.biases[l].size(); ++i) {
                double& b = params.biases[l][i];
                const double saved = b;
                b = saved + h;
                const double up = compute_batch_loss(params, batch, loss_cfg, HeadMode::Both);
                b = saved - h;
                const double dn = compute_batch_loss(params, batch, loss_cfg, HeadMode::Both);
                b = saved;
                const double fd = (up - dn) / (2.0 * h);
                const double diff = std::abs(grads.biases[l][i] - fd);
                if (diff > 1e-4 * std::max(1.0, std::abs(fd))) {
                    return "bias grad mismatch layer " + std::to_string(l) + " index " +
                           std::to_string(i) + " diff " + fmt(diff, 8);
                }
            }
        }
    }
    return std::nullopt;
}

PropertyResult property_em() {
    // Recovery of a well separated synthetic mixture.
    auto g = rng::make_engine(99);
    std::vector<double> scores;
    for (int i = 0; i < 250; ++i) scores.push_back(0.3 + 0.05 * rng::next_gaussian(g));
    for (int i = 0; i < 250; ++i) scores.push_back(0.9 + 0.02 * rng::next_gaussian(g));
    const GaussianPair fit = fit_two_gaussians(scores);
    if (std::abs(fit.abnormal.mu - 0.3) > 0.02 || std::abs(fit.normal.mu - 0.9) > 0.02) {
        return "mixture means off: " + fmt(fit.abnormal.mu, 4) + ", " + fmt(fit.normal.mu, 4);
    }

    // Label blindness: the refit decision depends on stored features only, so
    // permuting (here: inverting) pseudo-label values changes nothing.
    synth::BlobOptions opt;
    opt.normals = 40;
    opt.attacks = 20;
    opt.dim = 6;
    const Dataset initial = synth::make_blobs(opt);
    OnlineConfig cfg;
    cfg.layers.sizes = {6, 4, 6};
    cfg.loss.tau = 0.5;
    cfg.epoch0 = 1;
    cfg.train.batch_size = 16;
    OnlineState a = initialize(initial, cfg);
    OnlineState b = initialize(initial, cfg);
    auto g2 = rng::make_engine(5);
    const auto extra = synth::random_vectors(g2, 12, 6);
    for (std::size_t i = 0; i < extra.size(); ++i) {
        LabeledExample e;
        e.x = extra[i];
        e.provenance = Provenance::Pseudo;
        e.y = static_cast<int>(i % 2);
        a.X.push_back(e);
        e.y = 1 - e.y;
        b.X.push_back(e);
    }
    refresh_decision(a);
    refresh_decision(b);
    if (decision_context_to_json(a.decision) != decision_context_to_json(b.decision)) {
        return "decision refit is not label-blind";
    }
    return std::nullopt;
}

PropertyResult property_flip() {
    auto g = rng::make_engine(31);
    for (double lambda : {0.0, 0.1, 0.2, 0.33, 0.49}) {
        for (std::size_t m : {std::size_t(1), std::size_t(7), std::size_t(100), std::size_t(2000)}) {
            std::vector<int> labels(m, 0);
            for (std::size_t i = 0; i < m; i += 3) labels[i] = 1;
            const auto flipped = random_flip(labels, lambda, g);
            std::size_t diff = 0;
            for (std::size_t i = 0; i < m; ++i) diff += flipped[i] != labels[i];
            const auto want =
                static_cast<std::size_t>(std::floor(lambda * static_cast<double>(m) + 0.5));
            if (diff != want) {
                return "flip count " + std::to_string(diff) + " != round(lambda*m) " +
                       std::to_string(want) + " at lambda=" + fmt(lambda) +
                       " m=" + std::to_string(m);
            }
        }
    }
    // Involution on the chosen positions.
    std::vector<int> labels(101, 0);
    for (std::size_t i = 0; i < labels.size(); i += 2) labels[i] = 1;
    std::vector<std::size_t> positions;
    auto flipped = random_flip(labels, 0.3, g, &positions);
    for (std::size_t p : positions) flipped[p] = 1 - flipped[p];
    if (flipped != labels) return "double flip did not restore the labels";
    return std::nullopt;
}

struct MiniRun {
    RunReport rep;
    OnlineState state;
    std::size_t stream_size = 0;
};

MiniRun miniature_run() {
    synth::BlobOptions opt;
    opt.normals = 60;
    opt.attacks = 30;
    opt.dim = 6;
    opt.seed = 11;
    const Dataset whole = synth::make_blobs(opt);
    SplitResult split = split_initial(whole, {0.4, 18, 12});

    synth::BlobOptions topt = opt;
    topt.normals = 30;
    topt.attacks = 15;
    topt.seed = 13;
    const Dataset test = synth::make_blobs(topt);

    OnlineConfig cfg;
    cfg.layers.sizes = {6, 4, 6};
    cfg.loss.tau = 0.5;
    cfg.epoch0 = 2;
    cfg.epoch1 = 1;
    cfg.chunk = 18;  // 54 streamed rows -> 3 rounds
    cfg.lambda = 0.2;
    cfg.seed = 5;
    cfg.train.learning_rate = 0.005;
    cfg.train.batch_size = 16;

    MiniRun out;
    out.stream_size = split.stream.size();
    RunOptions opts;
    opts.final_state = &out.state;
    out.rep = run_online(split.initial, make_stream(split.stream), test, cfg, opts);
    return out;
}

PropertyResult property_hidden_label_audit() {
    const MiniRun run = miniature_run();
    if (run.rep.rounds.size() != 3) {
        return "expected a 3-round miniature run, got " + std::to_string(run.rep.rounds.size());
    }
    if (run.state.training_audit.reveals != 0) {
        return "training path revealed " + std::to_string(run.state.training_audit.reveals) +
               " hidden labels";
    }
    if (run.state.eval_audit.reveals != run.stream_size) {
        return "eval audit saw " + std::to_string(run.state.eval_audit.reveals) + " reveals, want " +
               std::to_string(run.stream_size);
    }
    return std::nullopt;
}

PropertyResult property_determinism() {
    const std::string a = miniature_run().rep.digest;
    const std::string b = miniature_run().rep.digest;
    if (a != b) return "identically seeded runs digested " + a + " vs " + b;
    if (a.size() != 16) return "digest is not 16 hex chars: " + a;
    return std::nullopt;
}

void criterion_properties() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::pair<const char*, PropertyResult (*)()>> props = {
        {"loss-oracles", property_loss_oracles},
        {"fd-gradients", property_fd_gradients},
        {"em-fit", property_em},
        {"random-flip", property_flip},
        {"hidden-label-audit", property_hidden_label_audit},
        {"determinism", property_determinism},
    };
    std::size_t passed = 0;
    std::string first_failure;
    for (const auto& [name, fn] : props) {
        const auto res = fn();
        if (res) {
            note(std::string("property ") + name + ": FAIL (" + *res + ")");
            if (first_failure.empty()) first_failure = std::string(name) + ": " + *res;
        } else {
            note(std::string("property ") + name + ": ok");
            ++passed;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool in_budget = elapsed < kPropertyBudget;
    const bool ok = passed == props.size() && in_budget;
    std::string detail = std::to_string(passed) + "/" + std::to_string(props.size()) +
                         " properties, " + fmt(elapsed, 1) + " s (budget " +
                         fmt(kPropertyBudget, 0) + " s)";
    if (!first_failure.empty()) detail += "; first failure " + first_failure;
    if (!in_budget) detail += "; OVER BUDGET";
    emit(6, ok ? "PASS" : "FAIL", detail);
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--require-data") == 0) {
            g_require_data = true;
        } else {
            std::cerr << "usage: acceptance [--require-data]\n";
            return 2;
        }
    }

    try {
        const auto root = data_root();
        const std::string no_data =
            "AOCIDS_DATA not set; point it at a directory with nsl-kdd/ and unsw-nb15/";

        std::optional<LoadedPair> nsl;
        std::string nsl_problem = no_data;
        if (root) {
            nsl = load_pair(*root, "nsl-kdd", "KDDTrain+.txt", "KDDTest+.txt", "nsl-kdd.json",
                            &nsl_problem);
        }

        const std::optional<Outcome> seed1 = criterion_nsl(nsl, nsl_problem);
        if (root) {
            criterion_unsw(*root);
        } else {
            skip_or_fail(2, no_data);
        }
        criterion_ordering(nsl, nsl_problem, seed1);
        criterion_ablations(nsl, nsl_problem, seed1);
        criterion_zero_day(nsl, nsl_problem, seed1);
        criterion_properties();
    } catch (const std::exception& e) {
        std::cout << "ERROR: " << e.what() << "\n";
        return 1;
    }

    std::cout << "RESULT: " << (g_any_fail ? "FAIL" : "PASS") << " (" << g_pass << " pass, "
              << g_skip << " skip, " << g_fail << " fail)\n";
    return g_any_fail ? 1 : 0;
}
