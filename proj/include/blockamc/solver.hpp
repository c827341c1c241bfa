// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blockamc/analog.hpp"
#include "blockamc/mapping.hpp"
#include "blockamc/random.hpp"
#include "blockamc/types.hpp"

namespace blockamc::solver {

using mapping::ProgrammedArray;

/// How source matrices are scaled into the device dynamic range:
/// per_array normalizes every programmed block independently (maximum
/// dynamic range per array); global uses one scale for the whole solve.
enum class NormMode { per_array, global };

/// Recursion plan: depth 0 solves on a single array (the original AMC
/// circuit), depth 1 is the five-step block cascade, depth >= 2 solves
/// each INV sub-problem with the next-stage cascade. array_max, when
/// positive, is the largest physical array dimension that may be
/// programmed.
struct StagePlan {
    int depth = 1;
    Index array_max = 0;  ///< 0 = unlimited
};

struct SolveOptions {
    mapping::MapConfig map;
    analog::CircuitConfig circuit;
    StagePlan plan;
    NormMode norm = NormMode::per_array;
    std::uint64_t seed = 0;
    Index split = 0;  ///< top-stage pivot-block size k; 0 = ceil(n/2)
    bool keep_intermediates = true;
};

/// The four blocks of A plus the matching split of b.
struct BlockPartition {
    Matrix a1, a2, a3, a4;
    Index k = 0;
    Vector f, g;
};

/// One programmed physical array, for reporting and replay.
struct ArrayInfo {
    std::string name;
    Index rows = 0, cols = 0;
    double scale = 1.0;
    std::uint64_t seed = 0;
};

struct SolveReport {
    Vector x_hat;
    /// Named intermediates, path-prefixed for nested stages ("y_t",
    /// "A1.z", ...). step*_in/out entries carry the signs actually
    /// present on the analog path (-y_t, g_t, -g_s, z, -f_t, f_s, -y).
    std::map<std::string, Vector> intermediates;
    Matrix schur;  ///< top-stage A4s (empty for the original solver)
    std::vector<ArrayInfo> arrays;
    std::string solver;
    int depth = 0;
    Index k = 0;
    std::uint64_t seed = 0;
    double relative_error = std::numeric_limits<double>::quiet_NaN();
};

inline std::string solver_name(int depth) {
    if (depth <= 0) return "original";
    if (depth == 1) return "one_stage";
    if (depth == 2) return "two_stage";
    return "multi_stage_d" + std::to_string(depth);
}

namespace detail {

/// Matrix-only block split (partition() adds the rhs halves).
inline void split_blocks(const Matrix& a, Index k, Matrix& a1, Matrix& a2,
                         Matrix& a3, Matrix& a4) {
    const Index n = a.rows();
    a1 = a.topLeftCorner(k, k);
    a2 = a.topRightCorner(k, n - k);
    a3 = a.bottomLeftCorner(n - k, k);
    a4 = a.bottomRightCorner(n - k, n - k);
}

inline Index default_split(Index n) { return (n + 1) / 2; }

} // namespace detail

/// Exact block copy of A and b; no arithmetic. Default k = ceil(n/2).
inline BlockPartition partition(const Matrix& a, const Vector& b,
                                std::optional<Index> k_opt = {}) {
    const Index n = a.rows();
    if (a.cols() != n) throw DimensionError("partition: matrix must be square");
    if (b.size() != n) throw DimensionError("partition: rhs length mismatch");
    const Index k = k_opt.value_or(detail::default_split(n));
    if (k < 1 || k > n - 1) throw ConfigError("partition: split index out of range");
    BlockPartition p;
    p.k = k;
    detail::split_blocks(a, k, p.a1, p.a2, p.a3, p.a4);
    p.f = b.head(k);
    p.g = b.tail(n - k);
    return p;
}

inline Matrix reassemble(const BlockPartition& p) {
    const Index n = p.a1.rows() + p.a4.rows();
    Matrix a(n, n);
    a.topLeftCorner(p.a1.rows(), p.a1.cols()) = p.a1;
    a.topRightCorner(p.a2.rows(), p.a2.cols()) = p.a2;
    a.bottomLeftCorner(p.a3.rows(), p.a3.cols()) = p.a3;
    a.bottomRightCorner(p.a4.rows(), p.a4.cols()) = p.a4;
    return a;
}

inline Vector reassemble_rhs(const BlockPartition& p) {
    Vector b(p.f.size() + p.g.size());
    b << p.f, p.g;
    return b;
}

namespace detail {

inline Matrix schur_of(const Matrix& a1, const Matrix& a2, const Matrix& a3,
                       const Matrix& a4) {
    // A4s = A4 when a coupling block vanishes; the exact A4 is stored.
    if (a2.size() == 0 || a3.size() == 0) return a4;
    if (a2.cwiseAbs().maxCoeff() == 0.0 || a3.cwiseAbs().maxCoeff() == 0.0) return a4;
    Eigen::PartialPivLU<Matrix> lu(a1);
    const Vector d = lu.matrixLU().diagonal().cwiseAbs();
    const double dmax = d.maxCoeff();
    if (!(dmax > 0.0) ||
        d.minCoeff() <= dmax * static_cast<double>(a1.rows()) *
                            std::numeric_limits<double>::epsilon())
        throw SingularMatrixError("schur_complement: pivot block A1 is singular");
    return a4 - a3 * lu.solve(a2);
}

} // namespace detail

/// A4s = A4 - A3 A1^-1 A2, computed digitally in full precision (the
/// pre-processing step; not an analog operation).
inline Matrix schur_complement(const BlockPartition& p) {
    return detail::schur_of(p.a1, p.a2, p.a3, p.a4);
}

namespace detail {

struct SolveContext {
    const SolveOptions& opt;
    double global_scale = 0.0;
    std::map<std::string, ProgrammedArray> store;
    std::vector<std::string> order;
    std::map<std::string, Vector> inter;
    Matrix top_schur;

    explicit SolveContext(const SolveOptions& o) : opt(o) {}

    const ProgrammedArray& get_array(const Matrix& m, const std::string& path) {
        auto it = store.find(path);
        if (it != store.end()) return it->second;
        if (opt.plan.array_max > 0 &&
            std::max(m.rows(), m.cols()) > opt.plan.array_max)
            throw ConfigError("array '" + path + "' (" + std::to_string(m.rows()) +
                              "x" + std::to_string(m.cols()) + ") exceeds array_max " +
                              std::to_string(opt.plan.array_max));
        Matrix normed;
        double scale = 1.0;
        if (opt.norm == NormMode::global) {
            scale = global_scale;
            normed = m / scale;
        } else {
            std::tie(normed, scale) = mapping::normalize(m);
        }
        const std::uint64_t seed = derive_seed(opt.seed, "array", fnv1a64(path));
        auto [pos, ok] = store.emplace(path, mapping::program(normed, opt.map, seed, scale));
        (void)ok;
        order.push_back(path);
        return pos->second;
    }

    void record(const std::string& key, const Vector& v) {
        if (opt.keep_intermediates) inter[key] = v;
    }
};

/// Runs one INV circuit step: input scaled to a unit supply (and DAC
/// quantized when it enters from the digital side), circuit output
/// optionally ADC quantized, then voltage and array normalization scales
/// folded back. Returns -M^-1 v in problem units.
inline Vector apply_inv(SolveContext& cx, const ProgrammedArray& arr, const Vector& v,
                        bool dac_in, bool adc_out) {
    const double u = v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
    if (u == 0.0) return Vector::Zero(arr.cols());
    Vector vin = v / u;
    if (dac_in && cx.opt.map.dac_bits > 0)
        vin = mapping::quantize(vin, cx.opt.map.dac_bits, 1.0);
    Vector out = analog::run_inv(arr, vin, cx.opt.circuit);
    if (adc_out && cx.opt.map.adc_bits > 0)
        out = mapping::quantize(out, cx.opt.map.adc_bits, cx.opt.map.adc_full_scale);
    return out * (u / arr.scale);
}

/// Same for the MVM circuit. Returns -M v in problem units.
inline Vector apply_mvm(SolveContext& cx, const ProgrammedArray& arr, const Vector& v,
                        bool dac_in, bool adc_out) {
    const double u = v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
    if (u == 0.0) return Vector::Zero(arr.rows());
    Vector vin = v / u;
    if (dac_in && cx.opt.map.dac_bits > 0)
        vin = mapping::quantize(vin, cx.opt.map.dac_bits, 1.0);
    Vector out = analog::run_mvm(arr, vin, cx.opt.circuit);
    if (adc_out && cx.opt.map.adc_bits > 0)
        out = mapping::quantize(out, cx.opt.map.adc_bits, cx.opt.map.adc_full_scale);
    return out * (u * arr.scale);
}

Vector stage_solve(SolveContext& cx, const Matrix& a, const Vector& b, int stages,
                   const std::string& prefix);

/// Circuit-convention INV: returns -M^-1 v. With one stage left this runs
/// on a single programmed array; deeper it is solved by the next-stage
/// cascade (whose result crosses a digital boundary, so the sign flip is
/// free).
inline Vector circuit_inv(SolveContext& cx, const Matrix& m, const Vector& v,
                          int stages, const std::string& path, bool dac_in,
                          bool adc_out) {
    if (stages <= 1) return apply_inv(cx, cx.get_array(m, path), v, dac_in, adc_out);
    return -stage_solve(cx, m, v, stages - 1, path + ".");
}

/// Tiled MVM over arrays no larger than the plan's array_max (default:
/// half the matrix per side). Tile results are converted and accumulated
/// digitally. Returns -M v.
inline Vector tiled_mvm(SolveContext& cx, const Matrix& m, const Vector& v,
                        const std::string& path) {
    Index tile = cx.opt.plan.array_max;
    if (tile <= 0) tile = (std::max(m.rows(), m.cols()) + 1) / 2;
    Vector out = Vector::Zero(m.rows());
    for (Index r = 0, bi = 0; r < m.rows(); r += tile, ++bi) {
        const Index h = std::min(tile, m.rows() - r);
        for (Index c = 0, bj = 0; c < m.cols(); c += tile, ++bj) {
            const Index w = std::min(tile, m.cols() - c);
            const Matrix block = m.block(r, c, h, w);
            if (block.cwiseAbs().maxCoeff() == 0.0) continue;  // zero tile: no current
            const std::string name =
                path + ".t" + std::to_string(bi) + "x" + std::to_string(bj);
            out.segment(r, h) +=
                apply_mvm(cx, cx.get_array(block, name), v.segment(c, w), true, true);
        }
    }
    return out;
}

/// Circuit-convention MVM: returns -M v.
inline Vector circuit_mvm(SolveContext& cx, const Matrix& m, const Vector& v,
                          int stages, const std::string& path) {
    if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) return Vector::Zero(m.rows());
    if (stages <= 1) return apply_mvm(cx, cx.get_array(m, path), v, false, false);
    return tiled_mvm(cx, m, v, path);
}

/// The five-step cascade (three INV, two MVM) with the circuit sign
/// conventions, recursing on the INV sub-problems while stages remain.
/// stages == 0 is the original single-array solver.
inline Vector stage_solve(SolveContext& cx, const Matrix& a, const Vector& b,
                          int stages, const std::string& prefix) {
    const Index n = a.rows();
    if (a.cols() != n) throw DimensionError("solve: matrix must be square");
    if (b.size() != n) throw DimensionError("solve: rhs length mismatch");

    if (stages <= 0) {
        const Vector minus_x = apply_inv(cx, cx.get_array(a, prefix + "A"), b, true, true);
        return -minus_x;  // the circuit returns -x
    }

    const Index k = (prefix.empty() && cx.opt.split > 0) ? cx.opt.split
                                                         : default_split(n);
    BlockPartition p = partition(a, b, k);
    const Matrix a4s = schur_of(p.a1, p.a2, p.a3, p.a4);
    if (prefix.empty()) cx.top_schur = a4s;

    // step 1: INV(A1, f) -> -y_t
    const Vector minus_yt = circuit_inv(cx, p.a1, p.f, stages, prefix + "A1", true, false);
    // step 2: MVM(A3, -y_t) -> g_t (the circuit removes the minus)
    const Vector gt = circuit_mvm(cx, p.a3, minus_yt, stages, prefix + "A3");
    // step 3: INV(A4s, -g_s) -> z, with -g_s = -g + g_t summed at the input node
    const Vector minus_gs = gt - p.g;
    const Vector z = circuit_inv(cx, a4s, minus_gs, stages, prefix + "A4s", true, true);
    // step 4: MVM(A2, z) -> -f_t
    const Vector minus_ft = circuit_mvm(cx, p.a2, z, stages, prefix + "A2");
    // step 5: INV(A1, f_s) -> -y, with f_s = -f_t + f (A1 array reused)
    const Vector fs = p.f + minus_ft;
    const Vector minus_y = circuit_inv(cx, p.a1, fs, stages, prefix + "A1", true, true);
    const Vector y = -minus_y;

    cx.record(prefix + "y_t", -minus_yt);
    cx.record(prefix + "g_t", gt);
    cx.record(prefix + "g_s", -minus_gs);
    cx.record(prefix + "z", z);
    cx.record(prefix + "f_t", -minus_ft);
    cx.record(prefix + "f_s", fs);
    cx.record(prefix + "y", y);
    cx.record(prefix + "step1_out", minus_yt);
    cx.record(prefix + "step2_out", gt);
    cx.record(prefix + "step3_in", minus_gs);
    cx.record(prefix + "step3_out", z);
    cx.record(prefix + "step4_out", minus_ft);
    cx.record(prefix + "step5_in", fs);
    cx.record(prefix + "step5_out", minus_y);

    Vector x(n);
    x << y, z;
    return x;
}

/// Largest |entry| over every matrix the plan will program (blocks and
/// stage Schur complements), for global normalization.
inline double collect_program_max(const Matrix& a, int stages, Index top_split,
                                  bool top = true) {
    if (stages <= 0) return a.cwiseAbs().maxCoeff();
    const Index n = a.rows();
    const Index k = (top && top_split > 0) ? top_split : default_split(n);
    Matrix a1, a2, a3, a4;
    split_blocks(a, k, a1, a2, a3, a4);
    const Matrix a4s = schur_of(a1, a2, a3, a4);
    double m = collect_program_max(a1, stages - 1, 0, false);
    m = std::max(m, collect_program_max(a4s, stages - 1, 0, false));
    if (a2.size() > 0) m = std::max(m, a2.cwiseAbs().maxCoeff());
    if (a3.size() > 0) m = std::max(m, a3.cwiseAbs().maxCoeff());
    return m;
}

inline SolveReport run_solver(const Matrix& a, const Vector& b,
                              const SolveOptions& opt) {
    mapping::validate(opt.map);
    analog::validate(opt.circuit);
    if (opt.plan.depth < 0) throw ConfigError("plan depth must be >= 0");

    SolveContext cx(opt);
    if (opt.norm == NormMode::global) {
        cx.global_scale = collect_program_max(a, opt.plan.depth, opt.split);
        if (cx.global_scale == 0.0) throw RangeError("cannot normalize an all-zero matrix");
    }
    SolveReport rep;
    rep.x_hat = stage_solve(cx, a, b, opt.plan.depth, "");
    rep.intermediates = std::move(cx.inter);
    rep.schur = std::move(cx.top_schur);
    rep.depth = opt.plan.depth;
    rep.solver = solver_name(opt.plan.depth);
    rep.k = opt.plan.depth > 0
                ? ((opt.split > 0) ? opt.split : detail::default_split(a.rows()))
                : 0;
    rep.seed = opt.seed;
    rep.arrays.reserve(cx.order.size());
    for (const auto& name : cx.order) {
        const auto& arr = cx.store.at(name);
        rep.arrays.push_back({name, arr.rows(), arr.cols(), arr.scale, arr.seed});
    }
    return rep;
}

} // namespace detail

/// Baseline: a single INV circuit on one programmed n x n array pair.
inline SolveReport solve_original(const Matrix& a, const Vector& b,
                                  SolveOptions opt) {
    opt.plan.depth = 0;
    return detail::run_solver(a, b, opt);
}

/// The five-step one-stage cascade over the four block arrays.
inline SolveReport solve_one_stage(const Matrix& a, const Vector& b,
                                   SolveOptions opt) {
    opt.plan.depth = 1;
    return detail::run_solver(a, b, opt);
}

/// Multi-stage recursion per the plan; depth 1 behaves identically to
/// solve_one_stage, depth 0 to solve_original.
inline SolveReport solve_multi_stage(const Matrix& a, const Vector& b,
                                     const StagePlan& plan, SolveOptions opt) {
    opt.plan = plan;
    return detail::run_solver(a, b, opt);
}

/// Tiles A into blocks no larger than array_max per side, performs
/// per-tile analog MVM and accumulates the partial results digitally.
/// Circuit convention: returns -A v (equal to mvm over the whole matrix
/// under the ideal engine).
inline Vector block_mvm(const Matrix& a, const Vector& v, Index array_max,
                        SolveOptions opt) {
    if (a.cols() != v.size()) throw DimensionError("block_mvm: length mismatch");
    opt.plan.array_max = array_max;
    detail::SolveContext cx(opt);
    if (opt.norm == NormMode::global) {
        cx.global_scale = a.cwiseAbs().maxCoeff();
        if (cx.global_scale == 0.0) return Vector::Zero(a.rows());
    }
    return detail::tiled_mvm(cx, a, v, "A");
}

} // namespace blockamc::solver
