// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "blockamc/random.hpp"
#include "blockamc/types.hpp"

namespace blockamc::matgen {

enum class Kind { wishart, toeplitz, uniform };

inline std::string kind_name(Kind k) {
    switch (k) {
        case Kind::wishart: return "wishart";
        case Kind::toeplitz: return "toeplitz";
        case Kind::uniform: return "uniform";
    }
    return "?";
}

inline Kind kind_from_name(const std::string& s) {
    if (s == "wishart") return Kind::wishart;
    if (s == "toeplitz") return Kind::toeplitz;
    if (s == "uniform") return Kind::uniform;
    throw ConfigError("unknown matrix kind: '" + s + "'");
}

/// Parameters of one deterministic matrix draw. Identical specs produce
/// bit-identical matrices.
struct GenSpec {
    Kind kind = Kind::wishart;
    Index n = 0;
    std::uint64_t seed = 0;
    Index wishart_m = 0;      ///< rows of the Gaussian factor X; 0 means n
    double diag_boost = 1.0;  ///< added to |draw| on the main diagonal (toeplitz/uniform)
};

inline Index effective_wishart_m(const GenSpec& s) {
    return s.wishart_m > 0 ? s.wishart_m : s.n;
}

inline void validate(const GenSpec& s) {
    if (s.n < 2) throw ConfigError("matrix size must be >= 2");
    if (s.diag_boost < 0) throw ConfigError("diag_boost must be >= 0");
    if (s.kind == Kind::wishart && effective_wishart_m(s) < s.n)
        throw ConfigError("wishart_m < n would give a singular matrix");
}

/// A = X^T X, with the result made bit-exactly symmetric by computing the
/// lower triangle and mirroring it.
inline Matrix wishart_from_factor(const Matrix& X) {
    const Index n = X.cols();
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j <= i; ++j) {
            const double v = X.col(i).dot(X.col(j));
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return a;
}

/// Toeplitz matrix A[i][j] = c[i-j] from the first column (c[0..n-1]) and
/// first row (c[0], c[-1], ..., c[-(n-1)]). Entries along each diagonal are
/// copies of one value, so they compare bit-identical.
inline Matrix toeplitz_from_coeffs(const Vector& first_col, const Vector& first_row) {
    const Index n = first_col.size();
    if (first_row.size() != n) throw DimensionError("toeplitz: first row/column size mismatch");
    if (first_row(0) != first_col(0))
        throw ConfigError("toeplitz: first row and column must share the corner element");
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            a(i, j) = (i >= j) ? first_col(i - j) : first_row(j - i);
    return a;
}

inline Matrix gen_wishart(const GenSpec& spec) {
    validate(spec);
    const Index m = effective_wishart_m(spec);
    auto rng = make_rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x(m, spec.n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < spec.n; ++j)
            x(i, j) = normal(rng);
    return wishart_from_factor(x);
}

/// Off-diagonal coefficients are uniform on [-1,1]; the main diagonal is
/// diag_boost + |draw| so generated systems stay comfortably invertible.
/// Draw order: c[0], then the first column c[1..n-1], then the first row
/// c[-1..-(n-1)].
inline Matrix gen_toeplitz(const GenSpec& spec) {
    validate(spec);
    const Index n = spec.n;
    auto rng = make_rng(spec.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector col(n), row(n);
    col(0) = row(0) = spec.diag_boost + std::abs(uni(rng));
    for (Index i = 1; i < n; ++i) col(i) = uni(rng);
    for (Index i = 1; i < n; ++i) row(i) = uni(rng);
    return toeplitz_from_coeffs(col, row);
}

/// General random matrix: i.i.d. uniform [-1,1] off the diagonal,
/// diag_boost + |draw| on it. With diag_boost >= n the matrix is strictly
/// diagonally dominant, hence invertible with invertible pivot blocks at
/// every partition stage.
inline Matrix gen_uniform(const GenSpec& spec) {
    validate(spec);
    const Index n = spec.n;
    auto rng = make_rng(spec.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            const double d = uni(rng);
            a(i, j) = (i == j) ? spec.diag_boost + std::abs(d) : d;
        }
    return a;
}

inline Matrix generate(const GenSpec& spec) {
    switch (spec.kind) {
        case Kind::wishart: return gen_wishart(spec);
        case Kind::toeplitz: return gen_toeplitz(spec);
        case Kind::uniform: return gen_uniform(spec);
    }
    throw ConfigError("unknown kind");
}

/// Right-hand-side vector with i.i.d. uniform [-1,1] entries; mapped input
/// voltages stay inside a unit supply after scaling.
inline Vector gen_rhs(Index n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("rhs length must be >= 1");
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = uni(rng);
    return v;
}

} // namespace blockamc::matgen
