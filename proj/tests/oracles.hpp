// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations, written independently of the
// library code paths they check:
//  - gauss_solve: dense Gaussian elimination with partial pivoting
//    (no Eigen decompositions),
//  - crossbar MVM/INV oracles: dense nodal analysis assembled node by
//    node from the circuit description, with the INV equilibrium obtained
//    by superposition over per-column MVM solves rather than one coupled
//    system.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "blockamc/mapping.hpp"
#include "blockamc/types.hpp"

namespace oracles {

using blockamc::Index;
using blockamc::Matrix;
using blockamc::Vector;

inline Vector gauss_solve(Matrix a, Vector b) {
    const Index n = a.rows();
    for (Index col = 0; col < n; ++col) {
        Index piv = col;
        for (Index r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (a(piv, col) == 0.0) throw std::runtime_error("oracle: singular matrix");
        if (piv != col) {
            a.row(piv).swap(a.row(col));
            std::swap(b(piv), b(col));
        }
        for (Index r = col + 1; r < n; ++r) {
            const double m = a(r, col) / a(col, col);
            if (m == 0.0) continue;
            for (Index c = col; c < n; ++c) a(r, c) -= m * a(col, c);
            b(r) -= m * b(col);
        }
    }
    Vector x(n);
    for (Index r = n - 1; r >= 0; --r) {
        double s = b(r);
        for (Index c = r + 1; c < n; ++c) s -= a(r, c) * x(c);
        x(r) = s / a(r, r);
    }
    return x;
}

/// Dense nodal solve of one crossbar MVM configuration, both sign arrays
/// always modeled. Drivers sit one wire segment before row 0 of each
/// bitline; each wordline ends with one wire segment into a virtual
/// ground after column C-1 (the library defaults). Returns the amplifier
/// outputs -I/g0, with the wordline current measured as the
/// boundary-segment current gw * V(W tail).
inline Vector crossbar_mvm(const blockamc::mapping::ProgrammedArray& arr,
                           const Vector& v_in, double r_seg) {
    const Index rows = arr.rows(), cols = arr.cols();
    const double gw = 1.0 / r_seg;
    const Index per_plane = rows * cols;
    const Index n_nodes = 4 * per_plane;  // {plus,minus} x {B,W}
    auto bnode = [&](int a, Index i, Index j) { return a * 2 * per_plane + i * cols + j; };
    auto wnode = [&](int a, Index i, Index j) {
        return a * 2 * per_plane + per_plane + i * cols + j;
    };

    Matrix k = Matrix::Zero(n_nodes, n_nodes);
    Vector rhs = Vector::Zero(n_nodes);
    auto conduct = [&](Index p, Index q, double g) {
        k(p, p) += g;
        k(q, q) += g;
        k(p, q) -= g;
        k(q, p) -= g;
    };
    auto to_fixed = [&](Index p, double g, double volts) {
        k(p, p) += g;
        rhs(p) += g * volts;
    };

    for (int a = 0; a < 2; ++a) {
        const Matrix& cells = a == 0 ? arr.g_plus : arr.g_minus;
        const double drive_sign = a == 0 ? 1.0 : -1.0;
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) {
                if (cells(i, j) != 0.0) conduct(bnode(a, i, j), wnode(a, i, j), cells(i, j));
                if (i + 1 < rows) conduct(bnode(a, i, j), bnode(a, i + 1, j), gw);
                if (j + 1 < cols) conduct(wnode(a, i, j), wnode(a, i, j + 1), gw);
            }
        for (Index j = 0; j < cols; ++j)
            to_fixed(bnode(a, 0, j), gw, drive_sign * v_in(j));  // driver
        for (Index i = 0; i < rows; ++i)
            to_fixed(wnode(a, i, cols - 1), gw, 0.0);  // virtual ground
    }

    const Vector volts = gauss_solve(k, rhs);
    Vector out(rows);
    for (Index i = 0; i < rows; ++i) {
        double current = 0.0;
        for (int a = 0; a < 2; ++a) current += gw * volts(wnode(a, i, cols - 1));
        out(i) = -current / arr.g0;
    }
    return out;
}

/// INV equilibrium by superposition: the current absorbed at virtual
/// ground i is linear in the amplifier outputs u, I_i = sum_j M_ij u_j,
/// where column j of M is one MVM solve with the unit vector e_j. The
/// equilibrium condition g0 v_in + M u = 0 then gives u.
inline Vector crossbar_inv(const blockamc::mapping::ProgrammedArray& arr,
                           const Vector& v_in, double r_seg) {
    const Index n = arr.rows();
    Matrix m(n, n);
    for (Index j = 0; j < n; ++j) {
        Vector e = Vector::Zero(n);
        e(j) = 1.0;
        // crossbar_mvm returns -I/g0, so I = -g0 * out
        m.col(j) = -arr.g0 * crossbar_mvm(arr, e, r_seg);
    }
    return gauss_solve(m, -arr.g0 * v_in);
}

} // namespace oracles
