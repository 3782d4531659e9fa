// Command-line entry point: preprocess raw CSVs into encoded matrices, run
// the online protocol or the offline upper bound, and evaluate saved
// checkpoints. Dataset-keyed hyperparameter profiles keep the standard runs
// one command; every value can be overridden by a flag.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "aocids/aocids.hpp"

namespace fs = std::filesystem;
using namespace aocids;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

struct Profile {
    std::vector<std::size_t> layers;
    std::size_t epoch0 = 4;
    std::size_t epoch1 = 1;
    std::size_t chunk = 2000;
    double lambda = 0.2;
    double initial_fraction = 0.2;
    std::string descriptor;
};

std::map<std::string, Profile> builtin_profiles() {
    std::map<std::string, Profile> p;
    p["nsl-kdd"] = {{121, 64, 32, 64, 121}, 4, 1, 2000, 0.2, 0.2,
                    "configs/descriptors/nsl-kdd.json"};
    p["unsw-nb15"] = {{196, 128, 64, 128, 196}, 300, 3, 2784, 0.05, 0.2,
                      "configs/descriptors/unsw-nb15.json"};
    return p;
}

std::map<std::string, Profile> load_profiles(const std::string& explicit_path) {
    auto profiles = builtin_profiles();
    std::string path = explicit_path;
    if (path.empty()) {
        if (const char* env = std::getenv("AOCIDS_PROFILES")) path = env;
        else if (fs::exists("configs/profiles.json")) path = "configs/profiles.json";
    }
    if (path.empty()) return profiles;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("profiles: cannot open " + path);
    json j;
    in >> j;
    const fs::path base = fs::path(path).parent_path();
    for (auto& [name, jp] : j.items()) {
        Profile prof;
        prof.layers = jp.at("layers").get<std::vector<std::size_t>>();
        prof.epoch0 = jp.at("epoch0").get<std::size_t>();
        prof.epoch1 = jp.at("epoch1").get<std::size_t>();
        prof.chunk = jp.at("chunk").get<std::size_t>();
        prof.lambda = jp.at("lambda").get<double>();
        prof.initial_fraction = jp.at("initial_fraction").get<double>();
        if (jp.contains("descriptor")) {
            fs::path d = jp.at("descriptor").get<std::string>();
            prof.descriptor = d.is_absolute() ? d.string() : (base / d).string();
        }
        profiles[name] = std::move(prof);
    }
    return profiles;
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

bool is_encoded_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[8] = {};
    in.read(magic, 8);
    return in && std::memcmp(magic, kEncodedMagic, 8) == 0;
}

struct LoadedData {
    Dataset train;
    Dataset test;
    std::vector<std::string> train_attack_types;
    json descriptor_echo;  // raw descriptor JSON when CSVs were used
};

LoadedData load_inputs(const std::string& train_path, const std::string& test_path,
                       const std::string& descriptor_path, const std::string& schema_path) {
    LoadedData data;
    const bool train_enc = is_encoded_file(train_path);
    const bool test_enc = is_encoded_file(test_path);

    DatasetDescriptor desc;
    bool have_desc = false;
    if (!train_enc || !test_enc) {
        if (descriptor_path.empty()) {
            throw std::runtime_error("raw CSV input requires --descriptor (or a --dataset profile that provides one)");
        }
        desc = load_descriptor(descriptor_path);
        have_desc = true;
        std::ifstream in(descriptor_path);
        in >> data.descriptor_echo;
    }

    FeatureSchema schema;
    bool have_schema = false;
    if (train_enc) {
        data.train = load_encoded(train_path);
        if (!schema_path.empty()) {
            schema = load_schema(schema_path, &data.train_attack_types);
            data.train.schema = schema;
            have_schema = true;
        }
    } else {
        const RawTable raw = load_raw_csv(train_path, desc);
        schema = infer_schema(raw.records, raw.feature_columns, desc.declared_kinds);
        have_schema = true;
        data.train = encode_dataset(raw, schema, desc);
    }
    if (data.train_attack_types.empty()) data.train_attack_types = collect_attack_types(data.train);

    if (test_enc) {
        data.test = load_encoded(test_path);
    } else {
        if (!have_schema) {
            throw std::runtime_error("encoding a raw test CSV against an encoded train file requires --schema");
        }
        const RawTable raw = load_raw_csv(test_path, desc);
        data.test = encode_dataset(raw, schema, desc);
    }
    if (data.train.schema.encoded_dim != 0 &&
        data.test.schema.encoded_dim != data.train.schema.encoded_dim) {
        if (!data.test.examples.empty() &&
            data.test.examples.front().x.size() != data.train.schema.encoded_dim) {
            throw std::runtime_error("train/test encoded widths differ");
        }
    }
    (void)have_desc;
    return data;
}

// ---------------------------------------------------------------------------
// Config assembly
// ---------------------------------------------------------------------------

LossVariant parse_loss(const std::string& s) {
    if (s == "crc") return LossVariant::CRC;
    if (s == "infonce") return LossVariant::InfoNCE;
    throw std::runtime_error("--loss must be crc or infonce");
}

void parse_decision(const std::string& s, OnlineConfig& cfg) {
    if (s == "gaussian") {
        cfg.decision = DecisionRule::Gaussian;
        return;
    }
    if (s.rfind("fixed:", 0) == 0) {
        cfg.decision = DecisionRule::FixedThreshold;
        cfg.fixed_percentile = std::stod(s.substr(6));
        return;
    }
    throw std::runtime_error("--decision must be gaussian or fixed:P");
}

// the profile's layer sizes follow the standard encodings; other data widths
// keep the interior and adapt the input/output ends
LayerSpec adapt_layers(std::vector<std::size_t> sizes, std::size_t d) {
    LayerSpec spec;
    if (sizes.front() != d) {
        std::cerr << "note: adapting layer sizes to encoded width " << d << " (profile expects "
                  << sizes.front() << ")\n";
        sizes.front() = d;
        sizes.back() = d;
    }
    spec.sizes = std::move(sizes);
    spec.validate();
    return spec;
}

std::string resolve_out_dir(const std::string& out_flag, const std::string& fallback_name) {
    if (!out_flag.empty()) return out_flag;
    std::string root = "runs";
    if (const char* env = std::getenv("AOCIDS_OUT")) root = env;
    return root + "/" + fallback_name;
}

// ---------------------------------------------------------------------------
// Checkpoint container
// ---------------------------------------------------------------------------

void save_checkpoint(const std::string& path, const OnlineState& st, const FeatureSchema& schema,
                     const std::vector<std::string>& train_attack_types,
                     const json& descriptor_echo) {
    json j;
    j["format"] = "aocids-checkpoint";
    j["version"] = 1;
    j["config"] = config_to_json(st.config);
    j["model"] = model_to_json(st.params, {st.config.seed});
    j["decision"] = decision_context_to_json(st.decision);
    if (schema.encoded_dim != 0 && !schema.columns.empty()) {
        j["schema"] = schema_to_json(schema, train_attack_types);
    }
    j["train_attack_types"] = train_attack_types;
    if (!descriptor_echo.is_null()) j["descriptor"] = descriptor_echo;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
    out << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// Shared run plumbing
// ---------------------------------------------------------------------------

struct CliArgs {
    std::string dataset;
    std::string train_path;
    std::string test_path;
    std::string descriptor;
    std::string schema;
    std::string out;
    std::string profiles_path;
    std::uint64_t seed = 1;
    std::size_t runs = 1;
    bool offline = false;
    std::string loss = "crc";
    std::string heads = "both";
    std::string decision = "gaussian";
    std::uint64_t epoch0 = 0;
    std::uint64_t epoch1 = 0;
    std::uint64_t chunk = 0;
    double lambda = -1.0;
    double initial_fraction = -1.0;
    double tau = -1.0;
    double lr = -1.0;
    std::uint64_t batch = 0;
    bool pin_weights = false;
    bool snapshots = false;
    std::string resume;
    std::string log_level = "info";
};

void add_common_run_flags(CLI::App* cmd, CliArgs& a) {
    cmd->add_option("--dataset", a.dataset, "Dataset profile name (nsl-kdd, unsw-nb15)");
    cmd->add_option("--train", a.train_path, "Training input: raw CSV or encoded .enc")->required();
    cmd->add_option("--test", a.test_path, "Test input: raw CSV or encoded .enc")->required();
    cmd->add_option("--descriptor", a.descriptor, "Dataset descriptor JSON (raw CSV inputs)");
    cmd->add_option("--schema", a.schema, "Schema sidecar JSON (encoded train + raw test)");
    cmd->add_option("--out", a.out, "Output directory (default $AOCIDS_OUT/<name>)");
    cmd->add_option("--profiles", a.profiles_path, "Profiles JSON (default configs/profiles.json)");
    cmd->add_option("--seed", a.seed, "Base RNG seed");
    cmd->add_option("--runs", a.runs, "Number of seeds to aggregate (seed, seed+1, ...)");
    cmd->add_option("--epoch0", a.epoch0, "Initial training epochs");
    cmd->add_option("--epoch1", a.epoch1, "Fine-tuning epochs per round");
    cmd->add_option("--chunk", a.chunk, "Stream chunk size m");
    cmd->add_option("--lambda", a.lambda, "Pseudo-label flip fraction");
    cmd->add_option("--loss", a.loss, "Loss variant: crc or infonce")
        ->check(CLI::IsMember({"crc", "infonce"}));
    cmd->add_option("--heads", a.heads, "Heads: both, encoder, decoder")
        ->check(CLI::IsMember({"both", "encoder", "decoder"}));
    cmd->add_option("--decision", a.decision, "Decision rule: gaussian or fixed:P");
    cmd->add_option("--tau", a.tau, "Contrastive temperature");
    cmd->add_option("--lr", a.lr, "SGD learning rate");
    cmd->add_option("--batch", a.batch, "SGD batch size");
    cmd->add_flag("--pin-mixture-weights", a.pin_weights, "Keep both mixture weights at 0.5");
    cmd->add_option("--log-level", a.log_level, "info or debug (debug logs per-round decision structures)")
        ->check(CLI::IsMember({"info", "debug"}));
}

OnlineConfig assemble_config(const CLI::App* cmd, const CliArgs& a, const Profile& prof,
                             std::size_t encoded_dim) {
    OnlineConfig cfg;
    cfg.layers = adapt_layers(prof.layers, encoded_dim);
    cfg.epoch0 = cmd->count("--epoch0") ? a.epoch0 : prof.epoch0;
    cfg.epoch1 = cmd->count("--epoch1") ? a.epoch1 : prof.epoch1;
    cfg.chunk = cmd->count("--chunk") ? a.chunk : prof.chunk;
    cfg.lambda = cmd->count("--lambda") ? a.lambda : prof.lambda;
    cfg.loss.variant = parse_loss(a.loss);
    if (a.tau > 0.0) cfg.loss.tau = a.tau;
    cfg.heads = head_mode_from_name(a.heads);
    parse_decision(a.decision, cfg);
    if (a.lr > 0.0) cfg.train.learning_rate = a.lr;
    if (a.batch > 0) cfg.train.batch_size = a.batch;
    cfg.pin_mixture_weights = a.pin_weights;
    cfg.seed = a.seed;
    cfg.validate();
    return cfg;
}

Profile resolve_profile(const CliArgs& a, std::size_t encoded_dim) {
    if (!a.dataset.empty()) {
        const auto profiles = load_profiles(a.profiles_path);
        const auto it = profiles.find(a.dataset);
        if (it == profiles.end()) throw std::runtime_error("unknown dataset profile '" + a.dataset + "'");
        return it->second;
    }
    Profile prof;
    prof.layers = {encoded_dim, 64, 32, 64, encoded_dim};
    return prof;
}

void write_run_outputs(const fs::path& out_dir, const std::vector<ReportRow>& rows,
                       const std::vector<RunReport>& reports) {
    std::vector<ReportRow> all_rows = rows;
    if (reports.size() > 1) {
        std::vector<double> acc, pre, rec, f1;
        for (const auto& r : reports) {
            if (r.test_metrics.accuracy.defined) acc.push_back(r.test_metrics.accuracy.value);
            if (r.test_metrics.precision.defined) pre.push_back(r.test_metrics.precision.value);
            if (r.test_metrics.recall.defined) rec.push_back(r.test_metrics.recall.value);
            if (r.test_metrics.f1.defined) f1.push_back(r.test_metrics.f1.value);
        }
        auto stat_row = [&](const std::string& name, bool use_std) {
            Metrics m;
            auto fill = [&](MetricValue& mv, const std::vector<double>& v) {
                if (v.size() == reports.size()) {
                    const MeanStd s = aggregate(v);
                    mv = {use_std ? s.stddev : s.mean, true, ""};
                } else {
                    mv = {0.0, false, "undefined in some runs"};
                }
            };
            fill(m.accuracy, acc);
            fill(m.precision, pre);
            fill(m.recall, rec);
            fill(m.f1, f1);
            return ReportRow{name, m};
        };
        const std::string n = std::to_string(reports.size());
        all_rows.push_back(stat_row("mean(n=" + n + ")", false));
        all_rows.push_back(stat_row("std(n=" + n + ")", true));
    }
    emit_report(all_rows, ReportFormat::Csv, (out_dir / "report.csv").string());
    emit_report(all_rows, ReportFormat::Markdown, (out_dir / "report.md").string());
    emit_report(all_rows, ReportFormat::Json, (out_dir / "report_table.json").string());
    std::cout << render_report(all_rows, ReportFormat::Markdown);
}

int run_command(const CLI::App* cmd, CliArgs& a, bool offline_mode) {
    const LoadedData data = load_inputs(a.train_path, a.test_path, a.descriptor, a.schema);
    const std::size_t d = data.train.examples.empty() ? 0 : data.train.examples.front().x.size();
    if (d == 0) throw std::runtime_error("training input is empty");

    Profile prof = resolve_profile(a, d);
    if (!a.dataset.empty() && a.descriptor.empty() && !prof.descriptor.empty()) {
        // profile descriptors only matter for raw CSVs, which load_inputs already handled
    }
    OnlineConfig base_cfg = assemble_config(cmd, a, prof, d);
    const CLI::Option* frac_opt = cmd->get_option_no_throw("--initial-fraction");
    const double initial_fraction =
        frac_opt && frac_opt->count() ? a.initial_fraction : prof.initial_fraction;
    const bool offline = offline_mode || a.offline;

    const std::string mode = offline ? "offline" : "online";
    const fs::path out_dir = resolve_out_dir(
        a.out, (a.dataset.empty() ? mode : a.dataset + "-" + mode) + "-seed" +
                   std::to_string(a.seed));
    fs::create_directories(out_dir);

    std::ofstream alert_file(out_dir / "alerts.jsonl");
    std::ofstream debug_file;
    if (a.log_level == "debug") debug_file.open(out_dir / "debug.jsonl");

    std::vector<RunReport> reports;
    std::vector<ReportRow> rows;
    for (std::size_t r = 0; r < a.runs; ++r) {
        OnlineConfig cfg = base_cfg;
        cfg.seed = a.seed + r;

        Dataset initial;
        std::vector<StreamItem> stream;
        if (offline) {
            initial = data.train;
        } else {
            StreamPlan plan{initial_fraction, cfg.chunk, cfg.seed};
            SplitResult split = split_initial(data.train, plan);
            initial = std::move(split.initial);
            stream = make_stream(split.stream);
        }

        RunOptions opts;
        opts.alert_sink = &alert_file;
        if (debug_file.is_open()) opts.debug_sink = &debug_file;
        opts.train_attack_types = data.train_attack_types;
        if (a.snapshots) {
            const fs::path snap_dir = out_dir / ("snapshots_seed" + std::to_string(cfg.seed));
            fs::create_directories(snap_dir);
            opts.snapshot_dir = snap_dir.string();
        }
        if (!a.resume.empty() && r == 0) opts.resume_path = a.resume;
        OnlineState final_state;
        opts.final_state = &final_state;

        RunReport rep = run_online(initial, stream, data.test, cfg, opts);

        const std::string label = mode + "-seed" + std::to_string(cfg.seed);
        rows.push_back({label, rep.test_metrics});
        {
            std::ofstream rf(out_dir / ("report_seed" + std::to_string(cfg.seed) + ".json"));
            rf << report_to_json(rep).dump(2) << "\n";
        }
        const std::string ck_name =
            a.runs == 1 ? "checkpoint.json" : "checkpoint_seed" + std::to_string(cfg.seed) + ".json";
        save_checkpoint((out_dir / ck_name).string(), final_state, data.train.schema,
                        data.train_attack_types, data.descriptor_echo);
        reports.push_back(std::move(rep));
        std::cerr << label << ": digest " << reports.back().digest << ", "
                  << reports.back().rounds.size() << " rounds, "
                  << static_cast<long>(reports.back().wall_ms) << " ms\n";
    }

    write_run_outputs(out_dir, rows, reports);
    std::cout << "out_dir=" << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommand: preprocess
// ---------------------------------------------------------------------------

int preprocess_command(const CliArgs& a) {
    if (a.descriptor.empty()) throw std::runtime_error("preprocess requires --descriptor");
    const DatasetDescriptor desc = load_descriptor(a.descriptor);
    const RawTable train_raw = load_raw_csv(a.train_path, desc);
    const FeatureSchema schema =
        infer_schema(train_raw.records, train_raw.feature_columns, desc.declared_kinds);
    const Dataset train = encode_dataset(train_raw, schema, desc);

    const fs::path out_dir = resolve_out_dir(a.out, "preprocessed");
    fs::create_directories(out_dir);
    save_encoded((out_dir / "train.enc").string(), train);
    save_schema((out_dir / "schema.json").string(), schema, collect_attack_types(train));
    if (!a.test_path.empty()) {
        const RawTable test_raw = load_raw_csv(a.test_path, desc);
        const Dataset test = encode_dataset(test_raw, schema, desc);
        save_encoded((out_dir / "test.enc").string(), test);
    }
    std::cout << "encoded_dim=" << schema.encoded_dim << "\n";
    std::cout << "out_dir=" << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommand: evaluate
// ---------------------------------------------------------------------------

int evaluate_command(const CliArgs& a, const std::string& checkpoint_path, bool zero_day) {
    std::ifstream in(checkpoint_path);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + checkpoint_path);
    json j;
    in >> j;
    if (j.value("format", "") != "aocids-checkpoint" || j.value("version", 0) != 1) {
        throw std::runtime_error("checkpoint: unrecognized format/version");
    }

    OnlineState st;
    st.params = model_from_json(j.at("model"));
    st.decision = decision_context_from_json(j.at("decision"));
    st.config.layers = st.params.spec;
    st.config.heads = head_mode_from_name(j.at("config").at("heads").get<std::string>());
    st.config.seed = j.at("config").value("seed", 0ULL);

    std::vector<std::string> train_attack_types;
    if (j.contains("train_attack_types")) {
        train_attack_types = j["train_attack_types"].get<std::vector<std::string>>();
    }

    Dataset test;
    if (is_encoded_file(a.test_path)) {
        test = load_encoded(a.test_path);
    } else {
        if (!j.contains("schema")) {
            throw std::runtime_error("checkpoint lacks a schema; pass an encoded .enc test file");
        }
        const FeatureSchema schema = schema_from_json(j.at("schema"));
        DatasetDescriptor desc;
        if (!a.descriptor.empty()) {
            desc = load_descriptor(a.descriptor);
        } else if (j.contains("descriptor")) {
            // descriptor echo uses the same format as the descriptor file
            const auto tmp = fs::temp_directory_path() / "aocids_descriptor_echo.json";
            std::ofstream tf(tmp);
            tf << j["descriptor"].dump();
            tf.close();
            desc = load_descriptor(tmp.string());
        } else {
            throw std::runtime_error("raw CSV test input requires --descriptor");
        }
        const RawTable raw = load_raw_csv(a.test_path, desc);
        test = encode_dataset(raw, schema, desc);
    }

    const EvalResult eval = evaluate_dataset(st, test, train_attack_types);
    std::vector<ReportRow> rows{{"evaluate", eval.metrics}};
    std::cout << render_report(rows, ReportFormat::Markdown);
    if (zero_day) {
        std::cout << "\n| category | detected | total | recall |\n|---|---|---|---|\n";
        for (const auto& c : eval.categories) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", c.recall * 100.0);
            std::cout << "| " << c.key << " | " << c.detected << " | " << c.total << " | " << buf
                      << " |\n";
        }
    }
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        json out;
        out["metrics"] = detail::metrics_json(eval.metrics);
        json cats = json::array();
        for (const auto& c : eval.categories) {
            cats.push_back({{"key", c.key}, {"detected", c.detected}, {"total", c.total}, {"recall", c.recall}});
        }
        out["categories"] = std::move(cats);
        std::ofstream of(fs::path(a.out) / "evaluate.json");
        of << out.dump(2) << "\n";
        emit_report(rows, ReportFormat::Csv, (fs::path(a.out) / "evaluate.csv").string());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contrastive-autoencoder intrusion detection: preprocessing, online/offline runs, evaluation"};
    app.require_subcommand(1);

    CliArgs run_args, off_args, pre_args, eval_args;

    CLI::App* run_cmd = app.add_subcommand("run", "Online protocol: initial training, streaming pseudo-label rounds, final evaluation");
    add_common_run_flags(run_cmd, run_args);
    run_cmd->add_option("--initial-fraction", run_args.initial_fraction,
                        "Fraction of the training set used as labeled initial data");
    run_cmd->add_flag("--offline", run_args.offline, "Train on the full labeled set, no streaming");
    run_cmd->add_flag("--snapshots", run_args.snapshots, "Write a resumable state snapshot after every round");
    run_cmd->add_option("--resume", run_args.resume, "Resume from a snapshot file");

    CLI::App* off_cmd = app.add_subcommand("offline", "Offline upper bound: full labeled training, no streaming");
    add_common_run_flags(off_cmd, off_args);

    CLI::App* pre_cmd = app.add_subcommand("preprocess", "Encode raw CSVs into .enc matrices plus a schema sidecar");
    pre_cmd->add_option("--train", pre_args.train_path, "Training CSV")->required();
    pre_cmd->add_option("--test", pre_args.test_path, "Test CSV (optional)");
    pre_cmd->add_option("--descriptor", pre_args.descriptor, "Dataset descriptor JSON")->required();
    pre_cmd->add_option("--out", pre_args.out, "Output directory");

    std::string checkpoint_path;
    bool zero_day = false;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "Inference-only evaluation of a saved checkpoint");
    eval_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint JSON from a run")->required();
    eval_cmd->add_option("--test", eval_args.test_path, "Test input: raw CSV or encoded .enc")->required();
    eval_cmd->add_option("--descriptor", eval_args.descriptor, "Descriptor override for raw CSV input");
    eval_cmd->add_option("--out", eval_args.out, "Directory for evaluate.json/evaluate.csv");
    eval_cmd->add_flag("--zero-day", zero_day, "Print the per-family seen/unseen recall breakdown");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run_cmd->parsed()) return run_command(run_cmd, run_args, false);
        if (off_cmd->parsed()) return run_command(off_cmd, off_args, true);
        if (pre_cmd->parsed()) return preprocess_command(pre_args);
        if (eval_cmd->parsed()) return evaluate_command(eval_args, checkpoint_path, zero_day);
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
