// In-memory synthetic fixtures shared by the unit tests. Two well-separated
// clusters in [0,1]^d: benign mass near one corner, attack mass near the
// other, with per-example jitter. Small, fast, and fully deterministic.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "aocids/dataset.hpp"
#include "aocids/rng.hpp"

namespace synth {

using aocids::Dataset;
using aocids::LabeledExample;
using aocids::Provenance;

struct BlobOptions {
    std::size_t normals = 80;
    std::size_t attacks = 40;
    std::size_t dim = 8;
    std::uint64_t seed = 11;
    double normal_center = 0.25;
    double attack_center = 0.75;
    double jitter = 0.08;
    // Attack types cycle through this list; families come from the
    // parallel list below.
    std::vector<std::string> attack_types = {"flood", "sweep", "crack"};
    std::vector<std::string> families = {"DoS", "Probe", "R2L"};
};

inline LabeledExample make_point(aocids::rng::Engine& g, std::size_t dim, double center,
                                 double jitter, int y) {
    LabeledExample ex;
    ex.x.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        double v = center + jitter * aocids::rng::next_gaussian(g);
        if (v < 0.0) v = 0.0;
        if (v > 1.0) v = 1.0;
        ex.x[i] = v;
    }
    ex.y = y;
    ex.provenance = Provenance::True;
    return ex;
}

// Labeled two-cluster dataset. The schema is minimal: tests that need a
// real schema (encoders, descriptors) build one from CSV text instead.
inline Dataset make_blobs(const BlobOptions& opt = {}) {
    Dataset ds;
    ds.schema.encoded_dim = opt.dim;
    auto g = aocids::rng::make_engine(opt.seed);
    for (std::size_t i = 0; i < opt.normals; ++i) {
        ds.examples.push_back(make_point(g, opt.dim, opt.normal_center, opt.jitter, 0));
    }
    for (std::size_t i = 0; i < opt.attacks; ++i) {
        auto ex = make_point(g, opt.dim, opt.attack_center, opt.jitter, 1);
        const std::size_t t = i % opt.attack_types.size();
        ex.attack_type = opt.attack_types[t];
        ex.category = opt.families[t % opt.families.size()];
        ds.examples.push_back(ex);
    }
    return ds;
}

// Random batch of L2-reasonable representation vectors for loss tests.
inline std::vector<std::vector<double>> random_vectors(aocids::rng::Engine& g, std::size_t count,
                                                       std::size_t dim) {
    std::vector<std::vector<double>> out(count, std::vector<double>(dim));
    for (auto& v : out) {
        for (auto& x : v) x = aocids::rng::next_gaussian(g);
    }
    return out;
}

}  // namespace synth
