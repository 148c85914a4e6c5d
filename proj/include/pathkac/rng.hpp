#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "pathkac/grid_path.hpp"

namespace pathkac {

/// Philox 4x64 counter-based generator, 10 rounds.
///
/// Stateless: every 256-bit counter block maps to four 64-bit words under a
/// 128-bit key. Streams are carved out by convention, counter = (step, block,
/// path, stream) under key = (seed, salt), so any draw is addressable directly
/// and batches are reproducible bit-for-bit regardless of evaluation order.
namespace philox {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

using Block = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

inline Block generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = Block{hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

}  // namespace philox

/// Uniform double in (0, 1], built from the top 53 bits of a word.
inline double to_unit_open0(std::uint64_t w) {
    return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform double in [0, 1).
inline double to_unit(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

/// Addressable stream of N(0,1) draws keyed by (seed, path, step).
///
/// Each (path, step) owns draw slots 0,1,2,...; a Philox block yields four
/// words, turned into two Box-Muller pairs. The `stream` word separates
/// independent uses of the same seed (path noise, path synthesis, validators).
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream = 0) : key_{seed, 0x243F6A8885A308D3ULL}, stream_(stream) {}

    /// Draw `out.size()` normals for a (path, step) cell.
    void fill(std::uint64_t path, std::uint64_t step, std::span<double> out) const {
        std::size_t produced = 0;
        std::uint64_t block = 0;
        while (produced < out.size()) {
            auto words = philox::generate(philox::Block{step, block, path, stream_}, key_);
            double n[4];
            box_muller(words[0], words[1], n[0], n[1]);
            box_muller(words[2], words[3], n[2], n[3]);
            for (int j = 0; j < 4 && produced < out.size(); ++j) out[produced++] = n[j];
            ++block;
        }
    }

    double one(std::uint64_t path, std::uint64_t step) const {
        double v;
        fill(path, step, {&v, 1});
        return v;
    }

    /// Uniform draws in [0,1) for the same addressing scheme.
    void fill_uniform(std::uint64_t path, std::uint64_t step, std::span<double> out) const {
        std::size_t produced = 0;
        std::uint64_t block = 0;
        while (produced < out.size()) {
            auto words = philox::generate(philox::Block{step, block, path, stream_ ^ 0x5851F42D4C957F2DULL}, key_);
            for (int j = 0; j < 4 && produced < out.size(); ++j) out[produced++] = to_unit(words[j]);
            ++block;
        }
    }

private:
    static void box_muller(std::uint64_t w0, std::uint64_t w1, double& n0, double& n1) {
        double u1 = to_unit_open0(w0);
        double u2 = to_unit(w1);
        double r = std::sqrt(-2.0 * std::log(u1));
        n0 = r * std::cos(2.0 * M_PI * u2);
        n1 = r * std::sin(2.0 * M_PI * u2);
    }

    philox::Key key_;
    std::uint64_t stream_;
};

/// Random smooth path: a low-order random Fourier sum per coordinate,
/// rescaled so the sup norm over the grid equals `amplitude` exactly.
/// Deterministic in (seed, index); used by samplers and the acceptance suite.
inline GridPath random_smooth_path(std::uint64_t seed, std::uint64_t index, double dt, double T,
                                   std::size_t dim, double amplitude, int n_modes = 5) {
    NormalStream ns(seed, /*stream=*/0xA11CE5ULL);
    auto n = static_cast<std::size_t>(std::round(T / dt)) + 1;
    GridPath p(0.0, dt, dim, n);
    std::vector<double> coeff(2 * static_cast<std::size_t>(n_modes) * dim);
    ns.fill(index, /*step=*/0, coeff);
    for (std::size_t k = 0; k < dim; ++k) {
        const double* a = coeff.data() + 2 * n_modes * k;
        const double* b = a + n_modes;
        for (std::size_t i = 0; i < n; ++i) {
            double t = static_cast<double>(i) * dt / T;
            double v = 0.0;
            for (int j = 0; j < n_modes; ++j) {
                double w = 2.0 * M_PI * (j + 1) * t;
                v += (a[j] * std::cos(w) + b[j] * std::sin(w)) / ((j + 1.0) * (j + 1.0));
            }
            p.mutable_at(i)[k] = v;
        }
    }
    double s = sup_norm(p);
    if (s > 0.0) {
        double scale = amplitude / s;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < dim; ++k) p.mutable_at(i)[k] *= scale;
    }
    return p;
}

}  // namespace pathkac
