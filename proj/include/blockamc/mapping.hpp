// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "blockamc/random.hpp"
#include "blockamc/types.hpp"

namespace blockamc::mapping {

/// Conductance-mapping parameters. Defaults follow the usual operating
/// point: G0 = 100 uS unit conductance, 5% relative programming noise,
/// quantization interfaces disabled.
struct MapConfig {
    double g0 = 100e-6;        ///< unit conductance [S]
    double sigma_rel = 0.05;   ///< programming-noise std, relative to g0
    double clip_floor = 0.0;   ///< minimum programmable conductance [S]
    int dac_bits = 0;          ///< 0 disables input quantization
    int adc_bits = 0;          ///< 0 disables output quantization
    double adc_full_scale = 1.0;
};

inline void validate(const MapConfig& c) {
    if (!(c.g0 > 0)) throw ConfigError("g0 must be > 0");
    if (c.sigma_rel < 0) throw ConfigError("sigma_rel must be >= 0");
    if (c.clip_floor < 0) throw ConfigError("clip_floor must be >= 0");
    if (c.dac_bits < 0 || c.adc_bits < 0) throw ConfigError("bit widths must be >= 0");
    if (!(c.adc_full_scale > 0)) throw ConfigError("adc_full_scale must be > 0");
}

/// A signed pair of nonnegative conductance arrays with programming
/// metadata. Noise is drawn once at programming time and frozen: reusing
/// the array in several algorithm steps sees identical conductances.
struct ProgrammedArray {
    Matrix g_plus;   ///< [S]
    Matrix g_minus;  ///< [S]
    double scale = 1.0;  ///< normalization factor of the source matrix
    double g0 = 100e-6;
    std::uint64_t seed = 0;

    Index rows() const { return g_plus.rows(); }
    Index cols() const { return g_plus.cols(); }

    /// (g_plus - g_minus)/g0: the dimensionless matrix the circuit acts
    /// with (source matrix / scale, plus frozen noise).
    Matrix effective() const { return (g_plus - g_minus) / g0; }
};

/// Scales A so its largest |entry| is exactly 1. Returns (A/s, s).
inline std::pair<Matrix, double> normalize(const Matrix& a) {
    const double s = a.cwiseAbs().maxCoeff();
    if (s == 0.0) throw RangeError("cannot normalize an all-zero matrix");
    return {a / s, s};
}

/// A = A_plus - A_minus with both parts nonnegative and disjoint supports.
inline std::pair<Matrix, Matrix> split_signed(const Matrix& a) {
    Matrix plus = a.cwiseMax(0.0);
    Matrix minus = (-a).cwiseMax(0.0);
    return {std::move(plus), std::move(minus)};
}

/// Programs a normalized matrix onto a signed conductance pair:
/// G = A_sign*g0 + eps, eps ~ N(0, (sigma_rel*g0)^2) i.i.d. per cell,
/// clipped below at clip_floor. Draw order: g_plus row-major, then
/// g_minus row-major.
inline ProgrammedArray program(const Matrix& a, const MapConfig& cfg,
                               std::uint64_t seed, double scale = 1.0) {
    validate(cfg);
    if (!all_finite(a)) throw RangeError("matrix has non-finite entries");
    if (a.cwiseAbs().maxCoeff() > 1.0)
        throw RangeError("matrix entry exceeds the device dynamic range (|a| > 1)");

    auto [plus, minus] = split_signed(a);
    ProgrammedArray arr;
    arr.scale = scale;
    arr.g0 = cfg.g0;
    arr.seed = seed;
    arr.g_plus = plus * cfg.g0;
    arr.g_minus = minus * cfg.g0;

    if (cfg.sigma_rel > 0) {
        auto rng = make_rng(seed);
        std::normal_distribution<double> noise(0.0, cfg.sigma_rel * cfg.g0);
        for (Index i = 0; i < arr.g_plus.rows(); ++i)
            for (Index j = 0; j < arr.g_plus.cols(); ++j)
                arr.g_plus(i, j) += noise(rng);
        for (Index i = 0; i < arr.g_minus.rows(); ++i)
            for (Index j = 0; j < arr.g_minus.cols(); ++j)
                arr.g_minus(i, j) += noise(rng);
    }
    arr.g_plus = arr.g_plus.cwiseMax(cfg.clip_floor);
    arr.g_minus = arr.g_minus.cwiseMax(cfg.clip_floor);
    return arr;
}

/// normalize + program in one go; the normalization factor is carried in
/// the array and folded back by the solver.
inline ProgrammedArray program_matrix(const Matrix& a_raw, const MapConfig& cfg,
                                      std::uint64_t seed) {
    auto [a, s] = normalize(a_raw);
    return program(a, cfg, seed, s);
}

/// Uniform mid-rise quantizer onto [-full_scale, +full_scale]; values
/// outside the range saturate to the outermost levels.
inline double quantize(double x, int bits, double full_scale) {
    if (bits < 1) throw ConfigError("quantize: bits must be >= 1");
    if (!(full_scale > 0)) throw ConfigError("quantize: full_scale must be > 0");
    const double step = 2.0 * full_scale / static_cast<double>(1LL << bits);
    const double top = full_scale - step / 2.0;
    double q = (std::floor(x / step) + 0.5) * step;
    if (q > top) q = top;
    if (q < -top) q = -top;
    return q;
}

inline Vector quantize(const Vector& v, int bits, double full_scale) {
    Vector out(v.size());
    for (Index i = 0; i < v.size(); ++i) out(i) = quantize(v(i), bits, full_scale);
    return out;
}

} // namespace blockamc::mapping
