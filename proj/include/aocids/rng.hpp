// Deterministic randomness helpers.
//
// All stochastic behavior in the library flows through these functions so
// that a (seed, call-order) pair pins the exact result on every platform.
// std::mt19937_64 is the engine; the distribution code is hand-rolled
// because the standard distributions are implementation-defined.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aocids::rng {

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Uniform double in [0, 1) with 53 random bits.
inline double next_unit(Engine& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1]; safe as a log() argument.
inline double next_unit_open(Engine& g) { return 1.0 - next_unit(g); }

// Unbiased integer in [0, n) via Lemire's multiply-shift rejection.
inline std::uint64_t next_index(Engine& g, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_index: n must be positive");
    unsigned __int128 m = static_cast<unsigned __int128>(g()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(g()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Standard normal via Box-Muller (two fresh uniforms per draw, no cached spare).
inline double next_gaussian(Engine& g) {
    const double u1 = next_unit_open(g);
    const double u2 = next_unit(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

template <typename T>
void shuffle(std::vector<T>& items, Engine& g) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(next_index(g, i));
        std::swap(items[i - 1], items[j]);
    }
}

inline std::vector<std::size_t> permutation(std::size_t n, Engine& g) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(idx, g);
    return idx;
}

// k distinct indices from [0, n), uniform without replacement (partial Fisher-Yates).
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Engine& g) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(next_index(g, n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

inline std::string save_state(const Engine& g) {
    std::ostringstream os;
    os << g;
    return os.str();
}

inline void load_state(Engine& g, const std::string& state) {
    std::istringstream is(state);
    is >> g;
    if (is.fail()) throw std::runtime_error("rng: malformed engine state string");
}

}  // namespace aocids::rng
