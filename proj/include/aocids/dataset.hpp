// Data pipeline: raw CSV flow records -> typed schema -> fixed-width encoded
// vectors, plus the initial/stream split and chunking used by the online
// protocol, and the on-disk formats (descriptor JSON, schema sidecar JSON,
// encoded binary matrix).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "aocids/csv.hpp"
#include "aocids/rng.hpp"

namespace aocids {

using Vec = std::vector<double>;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// One raw flow record: ordered feature cells plus the label token and an
// optional attack-family tag (used only for reporting, never for training).
struct RawRecord {
    std::vector<std::string> values;
    std::string label_text;
    std::string category_text;  // empty = untagged
};

enum class ColumnKind { Continuous, Categorical, Constant };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Continuous;
    std::vector<std::string> vocab;  // categorical only, duplicate-free, insertion order
    double min = 0.0;                // continuous only
    double max = 0.0;
};

struct FeatureSchema {
    std::vector<ColumnSpec> columns;
    std::size_t encoded_dim = 0;

    std::size_t retained_columns() const {
        std::size_t n = 0;
        for (const auto& c : columns)
            if (c.kind != ColumnKind::Constant) ++n;
        return n;
    }
};

enum class Provenance { True, Pseudo };

struct LabeledExample {
    Vec x;
    int y = 0;  // 0 normal, 1 abnormal
    Provenance provenance = Provenance::True;
    std::string category;     // attack family tag, empty for normal/untagged
    std::string attack_type;  // raw label token for attacks (seen/unseen split)
};

struct Dataset {
    std::vector<LabeledExample> examples;
    FeatureSchema schema;

    std::size_t normal_count() const {
        std::size_t n = 0;
        for (const auto& e : examples) n += (e.y == 0);
        return n;
    }
    std::size_t abnormal_count() const { return examples.size() - normal_count(); }
};

struct StreamPlan {
    double initial_fraction = 0.2;
    std::size_t chunk_size = 2000;
    std::uint64_t order_seed = 0;
};

// Maps a raw CSV layout onto the pipeline: which column carries the label,
// which token means "normal", where the family tag comes from, and which
// columns are not features at all.
struct DatasetDescriptor {
    bool has_header = true;
    std::vector<std::string> column_names;             // required when !has_header
    std::string label_column;
    std::string normal_token;
    std::string category_column;                       // optional
    std::map<std::string, std::string> category_map;   // label token -> family (optional)
    std::vector<std::string> drop_columns;
    std::map<std::string, ColumnKind> declared_kinds;  // optional per-column overrides
};

// ---------------------------------------------------------------------------
// Numeric cell parsing
// ---------------------------------------------------------------------------

inline std::optional<double> parse_numeric(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end != begin + cell.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
    return v;
}

// ---------------------------------------------------------------------------
// Schema inference
// ---------------------------------------------------------------------------

// Column typing rules: a column whose every cell parses as a finite number is
// continuous, unless all parsed values are identical, in which case it carries
// no information and is dropped as constant. Any column with a non-numeric
// cell is categorical; a single-category column still gets a width-1 one-hot.
inline FeatureSchema infer_schema(const std::vector<RawRecord>& records,
                                  const std::vector<std::string>& column_names,
                                  const std::map<std::string, ColumnKind>& declared_kinds = {}) {
    if (records.empty()) throw std::runtime_error("infer_schema: no records");
    const std::size_t ncols = column_names.size();
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (records[r].values.size() != ncols) {
            throw std::runtime_error("infer_schema: row " + std::to_string(r + 1) + " has " +
                                     std::to_string(records[r].values.size()) +
                                     " cells, expected " + std::to_string(ncols));
        }
    }

    FeatureSchema schema;
    schema.columns.resize(ncols);
    for (std::size_t c = 0; c < ncols; ++c) {
        ColumnSpec& col = schema.columns[c];
        col.name = column_names[c];

        bool all_numeric = true;
        double lo = 0.0, hi = 0.0;
        bool numeric_constant = true;
        double first_value = 0.0;
        for (std::size_t r = 0; r < records.size(); ++r) {
            const auto parsed = parse_numeric(records[r].values[c]);
            if (!parsed) {
                all_numeric = false;
                break;
            }
            if (r == 0) {
                lo = hi = first_value = *parsed;
            } else {
                lo = std::min(lo, *parsed);
                hi = std::max(hi, *parsed);
                numeric_constant = numeric_constant && (*parsed == first_value);
            }
        }

        ColumnKind kind;
        if (auto it = declared_kinds.find(col.name); it != declared_kinds.end()) {
            kind = it->second;
        } else if (all_numeric) {
            kind = numeric_constant ? ColumnKind::Constant : ColumnKind::Continuous;
        } else {
            kind = ColumnKind::Categorical;
        }
        col.kind = kind;

        if (kind == ColumnKind::Continuous) {
            if (!all_numeric) {
                throw std::runtime_error("infer_schema: column '" + col.name +
                                         "' declared continuous but holds non-numeric cells");
            }
            col.min = lo;
            col.max = hi;
        } else if (kind == ColumnKind::Categorical) {
            std::set<std::string> seen;
            for (const auto& rec : records) {
                const std::string& cell = rec.values[c];
                if (seen.insert(cell).second) col.vocab.push_back(cell);
            }
        }
    }

    schema.encoded_dim = 0;
    for (const auto& col : schema.columns) {
        if (col.kind == ColumnKind::Continuous) schema.encoded_dim += 1;
        if (col.kind == ColumnKind::Categorical) schema.encoded_dim += col.vocab.size();
    }
    if (schema.encoded_dim == 0) throw std::runtime_error("infer_schema: no usable columns");
    return schema;
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

// Precomputed vocab lookups for bulk encoding; the schema stays immutable.
class Encoder {
public:
    explicit Encoder(const FeatureSchema& schema) : schema_(&schema) {
        vocab_index_.resize(schema.columns.size());
        for (std::size_t c = 0; c < schema.columns.size(); ++c) {
            const auto& col = schema.columns[c];
            for (std::size_t v = 0; v < col.vocab.size(); ++v) vocab_index_[c][col.vocab[v]] = v;
        }
    }

    // Continuous cells are min-max scaled with the schema's training-corpus
    // range and clamped to [0,1]; categorical cells one-hot, with categories
    // unseen at schema time encoded as an all-zero block.
    Vec encode_features(const RawRecord& record) const {
        const auto& cols = schema_->columns;
        if (record.values.size() != cols.size()) {
            throw std::runtime_error("encode: record has " + std::to_string(record.values.size()) +
                                     " cells, schema expects " + std::to_string(cols.size()));
        }
        Vec x(schema_->encoded_dim, 0.0);
        std::size_t offset = 0;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto& col = cols[c];
            if (col.kind == ColumnKind::Constant) continue;
            if (col.kind == ColumnKind::Continuous) {
                const auto parsed = parse_numeric(record.values[c]);
                if (!parsed) {
                    throw std::runtime_error("encode: non-numeric cell '" + record.values[c] +
                                             "' in continuous column '" + col.name + "'");
                }
                const double denom = col.max - col.min;
                double t = denom > 0.0 ? (*parsed - col.min) / denom : 0.0;
                x[offset++] = std::clamp(t, 0.0, 1.0);
            } else {
                const auto& index = vocab_index_[c];
                if (auto it = index.find(record.values[c]); it != index.end()) {
                    x[offset + it->second] = 1.0;
                }
                offset += col.vocab.size();
            }
        }
        return x;
    }

    LabeledExample encode(const RawRecord& record, const std::string& normal_token) const {
        LabeledExample e;
        e.x = encode_features(record);
        e.y = record.label_text == normal_token ? 0 : 1;
        e.provenance = Provenance::True;
        if (e.y == 1) {
            e.category = record.category_text;
            e.attack_type = record.label_text;
        }
        return e;
    }

private:
    const FeatureSchema* schema_;
    std::vector<std::unordered_map<std::string, std::size_t>> vocab_index_;
};

inline LabeledExample encode(const RawRecord& record, const FeatureSchema& schema,
                             const std::string& normal_token = "normal") {
    return Encoder(schema).encode(record, normal_token);
}

// ---------------------------------------------------------------------------
// Descriptor-driven CSV loading
// ---------------------------------------------------------------------------

inline DatasetDescriptor load_descriptor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("descriptor: cannot open " + path);
    json j;
    in >> j;
    if (j.value("format", "") != "aocids-descriptor") {
        throw std::runtime_error("descriptor: missing format tag in " + path);
    }
    DatasetDescriptor d;
    d.has_header = j.value("has_header", true);
    if (j.contains("columns")) d.column_names = j["columns"].get<std::vector<std::string>>();
    d.label_column = j.at("label_column").get<std::string>();
    d.normal_token = j.at("normal_token").get<std::string>();
    d.category_column = j.value("category_column", "");
    if (j.contains("category_map")) {
        for (auto& [k, v] : j["category_map"].items()) d.category_map[k] = v.get<std::string>();
    }
    if (j.contains("drop_columns")) d.drop_columns = j["drop_columns"].get<std::vector<std::string>>();
    if (j.contains("declared_kinds")) {
        for (auto& [k, v] : j["declared_kinds"].items()) {
            const std::string kind = v.get<std::string>();
            if (kind == "continuous") d.declared_kinds[k] = ColumnKind::Continuous;
            else if (kind == "categorical") d.declared_kinds[k] = ColumnKind::Categorical;
            else if (kind == "constant") d.declared_kinds[k] = ColumnKind::Constant;
            else throw std::runtime_error("descriptor: unknown kind '" + kind + "'");
        }
    }
    return d;
}

struct RawTable {
    std::vector<std::string> feature_columns;
    std::vector<RawRecord> records;
};

// Applies a descriptor to a parsed CSV: selects feature columns, pulls out
// the label and family tag per row.
inline RawTable extract_records(const csv::Table& table, const DatasetDescriptor& d) {
    const auto& header = table.header;
    auto find_col = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("descriptor: column '" + name + "' not found in CSV header");
    };

    const std::size_t label_idx = find_col(d.label_column);
    std::optional<std::size_t> category_idx;
    if (!d.category_column.empty()) category_idx = find_col(d.category_column);

    std::set<std::size_t> excluded{label_idx};
    if (category_idx) excluded.insert(*category_idx);
    for (const auto& name : d.drop_columns) excluded.insert(find_col(name));

    RawTable out;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (!excluded.count(i)) out.feature_columns.push_back(header[i]);

    out.records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        RawRecord rec;
        rec.values.reserve(out.feature_columns.size());
        for (std::size_t i = 0; i < header.size(); ++i)
            if (!excluded.count(i)) rec.values.push_back(row[i]);
        rec.label_text = row[label_idx];
        if (category_idx) {
            rec.category_text = row[*category_idx];
        } else if (auto it = d.category_map.find(rec.label_text); it != d.category_map.end()) {
            rec.category_text = it->second;
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

inline RawTable load_raw_csv(const std::string& path, const DatasetDescriptor& d) {
    csv::Table table = csv::read_file(path, d.has_header, d.has_header ? std::vector<std::string>{} : d.column_names);
    return extract_records(table, d);
}

inline Dataset encode_dataset(const RawTable& raw, const FeatureSchema& schema,
                              const DatasetDescriptor& d) {
    Dataset out;
    out.schema = schema;
    out.examples.reserve(raw.records.size());
    Encoder encoder(schema);
    for (std::size_t r = 0; r < raw.records.size(); ++r) {
        try {
            out.examples.push_back(encoder.encode(raw.records[r], d.normal_token));
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string(e.what()) + " at row " + std::to_string(r + 1));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Initial/stream split and chunking
// ---------------------------------------------------------------------------

struct SplitResult {
    Dataset initial;
    std::vector<LabeledExample> stream;
};

// Uniform seeded split; the initial part keeps true labels, the remainder
// becomes the (shuffled) stream.
inline SplitResult split_initial(const Dataset& dataset, const StreamPlan& plan) {
    if (plan.initial_fraction <= 0.0 || plan.initial_fraction > 1.0) {
        throw std::invalid_argument("split_initial: initial_fraction must be in (0,1]");
    }
    const std::size_t n = dataset.examples.size();
    auto n_init = static_cast<std::size_t>(std::llround(plan.initial_fraction * static_cast<double>(n)));
    n_init = std::min(n_init, n);

    auto engine = rng::make_engine(plan.order_seed);
    const auto perm = rng::permutation(n, engine);

    SplitResult out;
    out.initial.schema = dataset.schema;
    out.initial.examples.reserve(n_init);
    out.stream.reserve(n - n_init);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = dataset.examples[perm[i]];
        if (i < n_init) out.initial.examples.push_back(e);
        else out.stream.push_back(e);
    }
    if (out.initial.normal_count() == 0) {
        throw std::runtime_error("split_initial: initial split has no normal examples");
    }
    return out;
}

struct ChunkRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    std::size_t size() const { return end - begin; }
};

// Consecutive [i·m, (i+1)·m) windows over n items; the final window holds the
// remainder.
inline std::vector<ChunkRange> chunk_ranges(std::size_t n, std::size_t m) {
    if (m == 0) throw std::invalid_argument("chunk_ranges: m must be positive");
    std::vector<ChunkRange> out;
    for (std::size_t b = 0; b < n; b += m) out.push_back({b, std::min(b + m, n)});
    return out;
}

template <typename T>
std::vector<std::vector<T>> chunks(const std::vector<T>& stream, std::size_t m) {
    std::vector<std::vector<T>> out;
    for (const auto& r : chunk_ranges(stream.size(), m)) {
        out.emplace_back(stream.begin() + static_cast<std::ptrdiff_t>(r.begin),
                         stream.begin() + static_cast<std::ptrdiff_t>(r.end));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schema sidecar (JSON)
// ---------------------------------------------------------------------------

inline json schema_to_json(const FeatureSchema& schema,
                           const std::vector<std::string>& train_attack_types = {}) {
    json cols = json::array();
    for (const auto& c : schema.columns) {
        json jc;
        jc["name"] = c.name;
        switch (c.kind) {
            case ColumnKind::Continuous:
                jc["kind"] = "continuous";
                jc["min"] = c.min;
                jc["max"] = c.max;
                break;
            case ColumnKind::Categorical:
                jc["kind"] = "categorical";
                jc["vocab"] = c.vocab;
                break;
            case ColumnKind::Constant:
                jc["kind"] = "constant";
                break;
        }
        cols.push_back(std::move(jc));
    }
    json j;
    j["format"] = "aocids-schema";
    j["version"] = 1;
    j["encoded_dim"] = schema.encoded_dim;
    j["columns"] = std::move(cols);
    if (!train_attack_types.empty()) j["train_attack_types"] = train_attack_types;
    return j;
}

inline FeatureSchema schema_from_json(const json& j,
                                      std::vector<std::string>* train_attack_types = nullptr) {
    if (j.value("format", "") != "aocids-schema" || j.value("version", 0) != 1) {
        throw std::runtime_error("schema: unrecognized format/version");
    }
    FeatureSchema schema;
    for (const auto& jc : j.at("columns")) {
        ColumnSpec c;
        c.name = jc.at("name").get<std::string>();
        const std::string kind = jc.at("kind").get<std::string>();
        if (kind == "continuous") {
            c.kind = ColumnKind::Continuous;
            c.min = jc.at("min").get<double>();
            c.max = jc.at("max").get<double>();
        } else if (kind == "categorical") {
            c.kind = ColumnKind::Categorical;
            c.vocab = jc.at("vocab").get<std::vector<std::string>>();
        } else if (kind == "constant") {
            c.kind = ColumnKind::Constant;
        } else {
            throw std::runtime_error("schema: unknown column kind '" + kind + "'");
        }
        schema.columns.push_back(std::move(c));
    }
    schema.encoded_dim = j.at("encoded_dim").get<std::size_t>();
    if (train_attack_types && j.contains("train_attack_types")) {
        *train_attack_types = j["train_attack_types"].get<std::vector<std::string>>();
    }
    return schema;
}

inline void save_schema(const std::string& path, const FeatureSchema& schema,
                        const std::vector<std::string>& train_attack_types = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("schema: cannot write " + path);
    out << schema_to_json(schema, train_attack_types).dump(2) << "\n";
}

inline FeatureSchema load_schema(const std::string& path,
                                 std::vector<std::string>* train_attack_types = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("schema: cannot open " + path);
    json j;
    in >> j;
    return schema_from_json(j, train_attack_types);
}

// ---------------------------------------------------------------------------
// Encoded dataset binary format
// ---------------------------------------------------------------------------
// Little-endian layout:
//   magic "AOCIDSEN" | u32 version | u64 n | u64 d
//   n x ( d x f64 | u8 y | u8 provenance | u32 cat_len | cat | u32 type_len | type )

namespace detail {

inline void write_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_le(std::ostream& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    write_bytes(out, buf, sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw std::runtime_error("encoded dataset: truncated file");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

inline void write_string(std::ostream& out, const std::string& s) {
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    write_bytes(out, s.data(), s.size());
}

inline std::string read_string(std::istream& in) {
    const auto len = read_le<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw std::runtime_error("encoded dataset: truncated string");
    return s;
}

}  // namespace detail

inline constexpr char kEncodedMagic[8] = {'A', 'O', 'C', 'I', 'D', 'S', 'E', 'N'};

inline void save_encoded(const std::string& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("encoded dataset: cannot write " + path);
    detail::write_bytes(out, kEncodedMagic, sizeof(kEncodedMagic));
    detail::write_le<std::uint32_t>(out, 1);
    detail::write_le<std::uint64_t>(out, dataset.examples.size());
    detail::write_le<std::uint64_t>(out, dataset.schema.encoded_dim);
    for (const auto& e : dataset.examples) {
        if (e.x.size() != dataset.schema.encoded_dim) {
            throw std::runtime_error("encoded dataset: example width mismatch");
        }
        for (double v : e.x) detail::write_le<double>(out, v);
        detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(e.y));
        detail::write_le<std::uint8_t>(out, e.provenance == Provenance::Pseudo ? 1 : 0);
        detail::write_string(out, e.category);
        detail::write_string(out, e.attack_type);
    }
    if (!out) throw std::runtime_error("encoded dataset: write failed for " + path);
}

// Loads examples only; pair with the schema sidecar for column metadata.
inline Dataset load_encoded(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("encoded dataset: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kEncodedMagic, 8) != 0) {
        throw std::runtime_error("encoded dataset: bad magic in " + path);
    }
    const auto version = detail::read_le<std::uint32_t>(in);
    if (version != 1) {
        throw std::runtime_error("encoded dataset: unsupported version " + std::to_string(version));
    }
    const auto n = detail::read_le<std::uint64_t>(in);
    const auto d = detail::read_le<std::uint64_t>(in);
    Dataset out;
    out.schema.encoded_dim = d;
    out.examples.resize(n);
    for (auto& e : out.examples) {
        e.x.resize(d);
        for (auto& v : e.x) v = detail::read_le<double>(in);
        e.y = detail::read_le<std::uint8_t>(in);
        e.provenance = detail::read_le<std::uint8_t>(in) ? Provenance::Pseudo : Provenance::True;
        e.category = detail::read_string(in);
        e.attack_type = detail::read_string(in);
    }
    return out;
}

inline std::vector<std::string> collect_attack_types(const Dataset& dataset) {
    std::set<std::string> types;
    for (const auto& e : dataset.examples)
        if (e.y == 1 && !e.attack_type.empty()) types.insert(e.attack_type);
    return {types.begin(), types.end()};
}

}  // namespace aocids
