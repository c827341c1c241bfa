// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <ostream>
#include <vector>

#include "blockamc/io.hpp"
#include "blockamc/mapping.hpp"
#include "blockamc/types.hpp"

namespace blockamc::analog {

using mapping::ProgrammedArray;

enum class Engine { ideal, network };
enum class Side { near, far };
enum class NetMode { mvm, inv };

/// Circuit-level configuration shared by both engines. The network engine
/// models one wire segment of r_seg between adjacent cells along every
/// bitline/wordline plus one boundary segment to each driver and
/// amplifier; the ideal engine ignores r_seg.
struct CircuitConfig {
    Engine engine = Engine::ideal;
    double r_seg = 1.0;          ///< wire segment resistance [ohm]
    Side driver_side = Side::near;  ///< bitline end carrying the drivers
    Side sense_side = Side::far;    ///< wordline end carrying the amplifiers
    double solver_tol = 1e-10;   ///< relative KCL residual tolerance
    int max_refinements = 8;
};

inline void validate(const CircuitConfig& c) {
    if (c.r_seg < 0) throw ConfigError("r_seg must be >= 0");
    if (!(c.solver_tol > 0)) throw ConfigError("solver_tol must be > 0");
    if (c.max_refinements < 0) throw ConfigError("max_refinements must be >= 0");
}

/// v_out = -((g_plus - g_minus)/g0) * v_in, the one-step transfer function
/// of the MVM circuit including its minus sign.
inline Vector mvm_ideal(const ProgrammedArray& arr, const Vector& v_in) {
    if (arr.cols() != v_in.size())
        throw DimensionError("mvm: input length does not match array columns");
    return -(arr.effective() * v_in);
}

/// v_out = -((g_plus - g_minus)/g0)^-1 * v_in, the equilibrium of the INV
/// circuit, via a dense factorization with partial pivoting.
inline Vector inv_ideal(const ProgrammedArray& arr, const Vector& v_in) {
    if (arr.rows() != arr.cols())
        throw DimensionError("inv: array must be square");
    if (arr.cols() != v_in.size())
        throw DimensionError("inv: input length does not match array size");
    return solve_dense(arr.effective(), -v_in);
}

/// Post-solve diagnostics of one network solve.
struct SolveStats {
    double residual = 0.0;   ///< final KCL residual, infinity norm
    double rhs_scale = 0.0;  ///< total injected current magnitude (1-norm of rhs)
    int refinements = 0;
};

/// Resistive-network model of one programmed array in MVM or INV
/// configuration. Unknowns are the bitline/wordline node voltages of every
/// electrically active sign array (a sign array whose cells are all zero
/// carries no current and is dropped), plus the amplifier output voltages
/// in INV mode. Equations are KCL at every internal node plus, in INV
/// mode, KCL at each virtual-ground amplifier input.
class NetworkModel {
public:
    NetworkModel(const ProgrammedArray& arr, const CircuitConfig& cfg, NetMode mode)
        : cfg_(cfg), mode_(mode), rows_(arr.rows()), cols_(arr.cols()), g0_(arr.g0) {
        validate(cfg);
        if (!(cfg.r_seg > 0))
            throw ConfigError("NetworkModel requires r_seg > 0; use the ideal engine otherwise");
        if (mode == NetMode::inv && rows_ != cols_)
            throw DimensionError("inv: array must be square");

        cells_[0] = arr.g_plus;
        cells_[1] = arr.g_minus;
        included_[0] = (cells_[0].cwiseAbs().maxCoeff() != 0.0);
        included_[1] = (cells_[1].cwiseAbs().maxCoeff() != 0.0);

        Index base = 0;
        for (int a = 0; a < 2; ++a) {
            base_[a] = included_[a] ? base : -1;
            if (included_[a]) base += 2 * rows_ * cols_;
        }
        u_base_ = (mode == NetMode::inv) ? base : -1;
        n_unknowns_ = base + (mode == NetMode::inv ? cols_ : 0);

        if (n_unknowns_ > 0) assemble();
    }

    Index unknowns() const { return n_unknowns_; }
    bool array_included(int a) const { return included_[a]; }

    /// Unknown index of bitline node B(i,j) of sign array a (0 = plus).
    Index b_index(int a, Index i, Index j) const { return base_[a] + i * cols_ + j; }
    /// Unknown index of wordline node W(i,j) of sign array a.
    Index w_index(int a, Index i, Index j) const {
        return base_[a] + rows_ * cols_ + i * cols_ + j;
    }

    const Eigen::SparseMatrix<double>& system() const { return sys_; }

    /// Assembled sparse system in Matrix Market coordinate text format,
    /// for cross-checking in external tools.
    void write_matrix_market(std::ostream& os) const {
        os << "%%MatrixMarket matrix coordinate real general\n";
        os << sys_.rows() << ' ' << sys_.cols() << ' ' << sys_.nonZeros() << '\n';
        for (int k = 0; k < sys_.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sys_, k); it; ++it)
                os << it.row() + 1 << ' ' << it.col() + 1 << ' '
                   << format_double(it.value()) << '\n';
    }

    /// Solves the network for one input vector and returns the amplifier
    /// outputs. Iteratively refines until the KCL residual at every
    /// non-driven node is below solver_tol x (total injected current).
    Vector solve(const Vector& v_in, SolveStats* stats = nullptr) {
        const Index in_len = (mode_ == NetMode::mvm) ? cols_ : rows_;
        if (v_in.size() != in_len)
            throw DimensionError("network: input length does not match array");

        if (n_unknowns_ == 0) {
            if (stats) *stats = SolveStats{};
            return Vector::Zero(mode_ == NetMode::mvm ? rows_ : cols_);
        }

        Vector rhs = Vector::Zero(n_unknowns_);
        for (const auto& d : drives_) rhs(d.row) += d.coeff * v_in(d.input);

        if (!lu_) {
            lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
            lu_->compute(sys_);
            if (lu_->info() != Eigen::Success) {
                lu_.reset();
                throw SingularMatrixError("network has no circuit equilibrium (singular system)");
            }
        }

        Vector x = lu_->solve(rhs);
        // Convergence target: solver_tol x total injected current, plus the
        // double-precision measurement floor eps*||A||*||x|| below which a
        // computed residual is meaningless (matters only for near-zero
        // r_seg, where wire conductances dwarf cell conductances).
        const double scale = std::max(rhs.lpNorm<1>(), 1e-300);
        auto target = [&](const Vector& sol) {
            const double floor = static_cast<double>(n_unknowns_) *
                                 std::numeric_limits<double>::epsilon() * mat_norm_ *
                                 sol.lpNorm<Eigen::Infinity>();
            return cfg_.solver_tol * scale + floor;
        };
        double resid = (rhs - sys_ * x).lpNorm<Eigen::Infinity>();
        int iter = 0;
        while (resid > target(x) && iter < cfg_.max_refinements) {
            const Vector r = rhs - sys_ * x;
            x += lu_->solve(r);
            resid = (rhs - sys_ * x).lpNorm<Eigen::Infinity>();
            ++iter;
        }
        if (!x.allFinite())
            throw SingularMatrixError("network solve produced non-finite voltages");
        if (resid > target(x))
            throw ConvergenceError("network solve did not reach residual tolerance", resid);
        if (stats) *stats = SolveStats{resid, scale, iter};

        return extract(x);
    }

private:
    struct Drive {
        Index row;
        double coeff;
        Index input;
    };

    Index head_row() const { return cfg_.driver_side == Side::near ? 0 : rows_ - 1; }
    Index tail_col() const { return cfg_.sense_side == Side::far ? cols_ - 1 : 0; }

    void assemble() {
        const double gw = 1.0 / cfg_.r_seg;
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(static_cast<std::size_t>(n_unknowns_) * 6);

        auto stamp = [&](Index p, Index q, double g) {
            t.emplace_back(p, p, g);
            t.emplace_back(q, q, g);
            t.emplace_back(p, q, -g);
            t.emplace_back(q, p, -g);
        };

        for (int a = 0; a < 2; ++a) {
            if (!included_[a]) continue;
            const double sign = (a == 0) ? 1.0 : -1.0;

            for (Index i = 0; i < rows_; ++i)
                for (Index j = 0; j < cols_; ++j) {
                    const double g = cells_[a](i, j);
                    if (g != 0.0) stamp(w_index(a, i, j), b_index(a, i, j), g);
                }
            // wire segments between adjacent cells
            for (Index j = 0; j < cols_; ++j)
                for (Index i = 0; i + 1 < rows_; ++i)
                    stamp(b_index(a, i, j), b_index(a, i + 1, j), gw);
            for (Index i = 0; i < rows_; ++i)
                for (Index j = 0; j + 1 < cols_; ++j)
                    stamp(w_index(a, i, j), w_index(a, i, j + 1), gw);

            // boundary segment to the driver at each bitline head
            for (Index j = 0; j < cols_; ++j) {
                const Index head = b_index(a, head_row(), j);
                t.emplace_back(head, head, gw);
                if (mode_ == NetMode::mvm) {
                    drives_.push_back({head, sign * gw, j});  // known +-v_in[j]
                } else {
                    t.emplace_back(head, u_base_ + j, -sign * gw);  // unknown +-u[j]
                }
            }
            // boundary segment from each wordline tail to the amplifier
            // input (virtual ground in both modes)
            for (Index i = 0; i < rows_; ++i) {
                const Index tail = w_index(a, i, tail_col());
                t.emplace_back(tail, tail, gw);
                if (mode_ == NetMode::inv) {
                    // KCL at the virtual-ground input node i:
                    // g0*v_in[i] + sum_a gw*V(W_a(i,tail)) = 0
                    t.emplace_back(u_base_ + i, tail, gw);
                }
            }
        }
        if (mode_ == NetMode::inv)
            for (Index i = 0; i < rows_; ++i) drives_.push_back({u_base_ + i, -g0_, i});

        sys_.resize(n_unknowns_, n_unknowns_);
        sys_.setFromTriplets(t.begin(), t.end());
        sys_.makeCompressed();
        mat_norm_ = 0.0;
        for (int k = 0; k < sys_.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sys_, k); it; ++it)
                mat_norm_ = std::max(mat_norm_, std::abs(it.value()));
    }

    Vector extract(const Vector& x) const {
        if (mode_ == NetMode::inv) return x.segment(u_base_, cols_);
        // Wordline current as the sum of cell currents: equal to the
        // boundary-segment current by KCL, but numerically stable at tiny
        // r_seg where the tail voltage nearly cancels.
        Vector out = Vector::Zero(rows_);
        for (int a = 0; a < 2; ++a) {
            if (!included_[a]) continue;
            for (Index i = 0; i < rows_; ++i) {
                double current = 0.0;
                for (Index j = 0; j < cols_; ++j) {
                    const double g = cells_[a](i, j);
                    if (g != 0.0) current += g * (x(b_index(a, i, j)) - x(w_index(a, i, j)));
                }
                out(i) += current;
            }
        }
        return -out / g0_;
    }

    CircuitConfig cfg_;
    NetMode mode_;
    Index rows_, cols_;
    double g0_;
    Matrix cells_[2];
    bool included_[2] = {false, false};
    Index base_[2] = {-1, -1};
    Index u_base_ = -1;
    Index n_unknowns_ = 0;
    double mat_norm_ = 0.0;
    Eigen::SparseMatrix<double> sys_;
    std::vector<Drive> drives_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

/// MVM through the resistive network; r_seg = 0 is the exact
/// zero-parasitic limit and delegates to the ideal engine.
inline Vector mvm_network(const ProgrammedArray& arr, const Vector& v_in,
                          const CircuitConfig& cfg, SolveStats* stats = nullptr) {
    validate(cfg);
    if (cfg.r_seg == 0.0) {
        if (stats) *stats = SolveStats{};
        return mvm_ideal(arr, v_in);
    }
    NetworkModel model(arr, cfg, NetMode::mvm);
    return model.solve(v_in, stats);
}

inline Vector inv_network(const ProgrammedArray& arr, const Vector& v_in,
                          const CircuitConfig& cfg, SolveStats* stats = nullptr) {
    validate(cfg);
    if (cfg.r_seg == 0.0) {
        if (stats) *stats = SolveStats{};
        return inv_ideal(arr, v_in);
    }
    NetworkModel model(arr, cfg, NetMode::inv);
    return model.solve(v_in, stats);
}

/// Engine dispatch used by the solvers.
inline Vector run_mvm(const ProgrammedArray& arr, const Vector& v_in,
                      const CircuitConfig& cfg) {
    return cfg.engine == Engine::ideal ? mvm_ideal(arr, v_in)
                                       : mvm_network(arr, v_in, cfg);
}

inline Vector run_inv(const ProgrammedArray& arr, const Vector& v_in,
                      const CircuitConfig& cfg) {
    return cfg.engine == Engine::ideal ? inv_ideal(arr, v_in)
                                       : inv_network(arr, v_in, cfg);
}

} // namespace blockamc::analog
