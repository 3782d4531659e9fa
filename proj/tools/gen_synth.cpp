// Deterministic synthetic flow-record generator: writes train/test CSVs plus
// a matching descriptor so the full pipeline can be exercised without any
// real dataset. The test set carries attack types absent from training (for
// the seen/unseen recall split), one category value the schema never saw, and
// out-of-range continuous cells.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "aocids/rng.hpp"

namespace fs = std::filesystem;

namespace {

struct Row {
    double dur;
    std::string proto;
    std::string service;
    double src_bytes;
    double dst_bytes;
    double err_rate;
    std::string label;
};

struct TypeModel {
    std::string label;
    double dur_mu, dur_sd;
    std::string proto;
    std::string service;
    double src_mu, src_sd;
    double dst_mu, dst_sd;
    double err_mu, err_sd;
};

const TypeModel kSeenAttacks[] = {
    {"flood", 0.2, 0.1, "tcp", "http", 3000, 500, 100, 50, 0.80, 0.10},
    {"sweep", 0.1, 0.05, "icmp", "dns", 60, 20, 40, 10, 0.70, 0.10},
    {"crack", 8.0, 2.0, "tcp", "ssh", 150, 60, 120, 50, 0.45, 0.10},
};

const TypeModel kUnseenAttacks[] = {
    {"burst", 0.15, 0.05, "udp", "http", 5000, 600, 80, 30, 0.90, 0.05},
    {"stealth", 0.05, 0.02, "icmp", "smtp", 50, 15, 30, 10, 0.60, 0.10},
    {"hijack", 12.0, 2.0, "tcp", "ssh", 180, 60, 150, 50, 0.50, 0.10},
    {"rootkit", 20.0, 3.0, "tcp", "ssh", 30, 10, 2000, 300, 0.30, 0.10},
};

double clipped_gauss(aocids::rng::Engine& g, double mu, double sd, double lo) {
    return std::max(lo, mu + sd * aocids::rng::next_gaussian(g));
}

Row make_normal(aocids::rng::Engine& g) {
    Row r;
    r.dur = clipped_gauss(g, 2.0, 1.0, 0.0);
    r.proto = aocids::rng::next_unit(g) < 0.7 ? "tcp" : "udp";
    const char* services[] = {"http", "dns", "smtp"};
    r.service = services[aocids::rng::next_index(g, 3)];
    r.src_bytes = clipped_gauss(g, 500, 150, 0.0);
    r.dst_bytes = clipped_gauss(g, 800, 200, 0.0);
    r.err_rate = std::clamp(clipped_gauss(g, 0.05, 0.05, 0.0), 0.0, 1.0);
    r.label = "normal";
    return r;
}

Row make_attack(aocids::rng::Engine& g, const TypeModel& m) {
    Row r;
    r.dur = clipped_gauss(g, m.dur_mu, m.dur_sd, 0.0);
    r.proto = m.proto;
    r.service = m.service;
    r.src_bytes = clipped_gauss(g, m.src_mu, m.src_sd, 0.0);
    r.dst_bytes = clipped_gauss(g, m.dst_mu, m.dst_sd, 0.0);
    r.err_rate = std::clamp(clipped_gauss(g, m.err_mu, m.err_sd, 0.0), 0.0, 1.0);
    r.label = m.label;
    return r;
}

void write_csv(const fs::path& path, std::vector<Row>& rows, aocids::rng::Engine& g) {
    aocids::rng::shuffle(rows, g);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "dur,proto,service,src_bytes,dst_bytes,err_rate,const_flag,label\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.4f", r.dur);
        out << buf << "," << r.proto << "," << r.service << ",";
        std::snprintf(buf, sizeof(buf), "%.1f", r.src_bytes);
        out << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.1f", r.dst_bytes);
        out << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.4f", r.err_rate);
        out << buf << ",0," << r.label << "\n";
    }
}

const char* kDescriptor = R"({
  "format": "aocids-descriptor",
  "has_header": true,
  "label_column": "label",
  "normal_token": "normal",
  "category_map": {
    "flood": "DoS", "burst": "DoS",
    "sweep": "Probe", "stealth": "Probe",
    "crack": "R2L", "hijack": "R2L",
    "rootkit": "U2R"
  }
}
)";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate deterministic synthetic train/test CSVs plus a descriptor"};
    std::string out_dir = "synth";
    std::uint64_t seed = 7;
    std::size_t train_normals = 600;
    std::size_t train_per_attack = 120;
    std::size_t test_normals = 300;
    std::size_t test_per_attack = 45;
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--train-normals", train_normals, "Normal rows in train.csv");
    app.add_option("--train-attacks", train_per_attack, "Rows per seen attack type in train.csv");
    app.add_option("--test-normals", test_normals, "Normal rows in test.csv");
    app.add_option("--test-attacks", test_per_attack, "Rows per attack type in test.csv");
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        auto g = aocids::rng::make_engine(seed);

        std::vector<Row> train;
        for (std::size_t i = 0; i < train_normals; ++i) train.push_back(make_normal(g));
        for (const auto& m : kSeenAttacks) {
            for (std::size_t i = 0; i < train_per_attack; ++i) train.push_back(make_attack(g, m));
        }

        std::vector<Row> test;
        for (std::size_t i = 0; i < test_normals; ++i) test.push_back(make_normal(g));
        for (const auto& m : kSeenAttacks) {
            for (std::size_t i = 0; i < test_per_attack; ++i) test.push_back(make_attack(g, m));
        }
        for (const auto& m : kUnseenAttacks) {
            for (std::size_t i = 0; i < test_per_attack; ++i) test.push_back(make_attack(g, m));
        }
        // schema-stress rows: a category never seen in training and continuous
        // values far outside the training range
        for (std::size_t i = 0; i < 5 && i < test.size(); ++i) {
            Row r = make_attack(g, kSeenAttacks[0]);
            r.proto = "sctp";
            r.src_bytes = 999999.0;
            test.push_back(r);
        }

        write_csv(fs::path(out_dir) / "train.csv", train, g);
        write_csv(fs::path(out_dir) / "test.csv", test, g);
        std::ofstream desc(fs::path(out_dir) / "descriptor.json");
        desc << kDescriptor;

        std::cout << "out_dir=" << out_dir << " train_rows=" << train.size()
                  << " test_rows=" << test.size() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
