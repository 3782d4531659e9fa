// Evaluation: confusion counts, accuracy/precision/recall/F1 with explicit
// absent-when-undefined handling, per-family recall split into seen and
// unseen attack types, multi-run aggregation, and report emission in JSON,
// CSV, and Markdown with a stable column order.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace aocids {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

// attack = positive class
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
};

struct MetricValue {
    double value = 0.0;
    bool defined = false;
    std::string reason;  // set when undefined
};

struct Metrics {
    ConfusionCounts counts;
    MetricValue accuracy;
    MetricValue precision;
    MetricValue recall;
    MetricValue f1;
};

inline ConfusionCounts confusion(const std::vector<int>& predictions,
                                 const std::vector<int>& truths) {
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("metrics: predictions/truths length mismatch");
    }
    if (predictions.empty()) throw std::invalid_argument("metrics: empty input");
    ConfusionCounts c;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool pred = predictions[i] != 0;
        const bool truth = truths[i] != 0;
        if (pred && truth) ++c.tp;
        else if (pred && !truth) ++c.fp;
        else if (!pred && truth) ++c.fn;
        else ++c.tn;
    }
    return c;
}

inline Metrics metrics_from_counts(const ConfusionCounts& c) {
    Metrics m;
    m.counts = c;
    const auto dd = [](std::size_t a, std::size_t b) {
        return static_cast<double>(a) / static_cast<double>(b);
    };
    m.accuracy = {dd(c.tp + c.tn, c.total()), true, ""};
    if (c.tp + c.fp > 0) m.precision = {dd(c.tp, c.tp + c.fp), true, ""};
    else m.precision = {0.0, false, "no positive predictions"};
    if (c.tp + c.fn > 0) m.recall = {dd(c.tp, c.tp + c.fn), true, ""};
    else m.recall = {0.0, false, "no positive examples"};
    if (m.precision.defined && m.recall.defined && m.precision.value + m.recall.value > 0.0) {
        m.f1 = {2.0 * m.precision.value * m.recall.value / (m.precision.value + m.recall.value),
                true, ""};
    } else {
        m.f1 = {0.0, false, "precision or recall undefined or both zero"};
    }
    return m;
}

inline Metrics metrics(const std::vector<int>& predictions, const std::vector<int>& truths) {
    return metrics_from_counts(confusion(predictions, truths));
}

// ---------------------------------------------------------------------------
// Per-category recall, seen/unseen split
// ---------------------------------------------------------------------------

struct CategoryTag {
    bool attack = false;
    std::string family;  // empty -> reported as "untagged"
    bool unseen = false;
};

struct CategoryRecall {
    std::string key;  // "<family>_seen" or "<family>_unseen"
    std::size_t detected = 0;
    std::size_t total = 0;
    double recall = 0.0;
};

// Indicator-sum recall per subdivided category; normal examples are excluded
// from every denominator. Output sorted by key.
inline std::vector<CategoryRecall> zero_day_recall(const std::vector<int>& predictions,
                                                   const std::vector<CategoryTag>& tags) {
    if (predictions.size() != tags.size()) {
        throw std::invalid_argument("zero_day_recall: predictions/tags length mismatch");
    }
    std::map<std::string, CategoryRecall> by_key;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (!tags[i].attack) continue;
        const std::string family = tags[i].family.empty() ? "untagged" : tags[i].family;
        const std::string key = family + (tags[i].unseen ? "_unseen" : "_seen");
        auto& entry = by_key[key];
        entry.key = key;
        entry.total += 1;
        entry.detected += predictions[i] != 0;
    }
    std::vector<CategoryRecall> out;
    out.reserve(by_key.size());
    for (auto& [key, entry] : by_key) {
        entry.recall = static_cast<double>(entry.detected) / static_cast<double>(entry.total);
        out.push_back(entry);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multi-run aggregation
// ---------------------------------------------------------------------------

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single run
    std::size_t n = 0;
};

inline MeanStd aggregate(const std::vector<double>& values) {
    MeanStd out;
    out.n = values.size();
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

enum class ReportFormat { Json, Csv, Markdown };

struct ReportRow {
    std::string name;
    Metrics metrics;
};

namespace detail {

// fractions rendered as percentages with two decimals; absent values as "n/a"
inline std::string percent_cell(const MetricValue& v) {
    if (!v.defined) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v.value * 100.0);
    return buf;
}

}  // namespace detail

inline std::string render_report(const std::vector<ReportRow>& rows, ReportFormat format) {
    if (rows.empty()) throw std::invalid_argument("emit_report: no rows");
    static constexpr const char* kColumns[] = {"accuracy", "precision", "recall", "f1"};
    auto cells = [](const Metrics& m) {
        return std::vector<std::string>{detail::percent_cell(m.accuracy),
                                        detail::percent_cell(m.precision),
                                        detail::percent_cell(m.recall),
                                        detail::percent_cell(m.f1)};
    };
    std::ostringstream out;
    switch (format) {
        case ReportFormat::Json: {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& row : rows) {
                nlohmann::json r;
                r["name"] = row.name;
                const auto c = cells(row.metrics);
                for (std::size_t i = 0; i < 4; ++i) r[kColumns[i]] = c[i];
                j.push_back(std::move(r));
            }
            out << j.dump(2) << "\n";
            break;
        }
        case ReportFormat::Csv: {
            out << "name,accuracy,precision,recall,f1\n";
            for (const auto& row : rows) {
                out << row.name;
                for (const auto& c : cells(row.metrics)) out << "," << c;
                out << "\n";
            }
            break;
        }
        case ReportFormat::Markdown: {
            out << "| name | accuracy | precision | recall | f1 |\n";
            out << "| --- | --- | --- | --- | --- |\n";
            for (const auto& row : rows) {
                out << "| " << row.name;
                for (const auto& c : cells(row.metrics)) out << " | " << c;
                out << " |\n";
            }
            break;
        }
    }
    return out.str();
}

inline void emit_report(const std::vector<ReportRow>& rows, ReportFormat format,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot write " + path);
    out << render_report(rows, format);
    if (!out) throw std::runtime_error("emit_report: write failed for " + path);
}

}  // namespace aocids
