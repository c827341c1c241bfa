// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>

namespace blockamc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Mismatched matrix/vector dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Singular or numerically rank-deficient matrix: the circuit has no
/// well-defined equilibrium.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// Value outside the representable device range (e.g. |entry| > 1 at
/// programming time).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Network solve failed to reach the requested residual tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_ = 0.0;
};

/// File read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Dense solve with partial pivoting; rejects singular or numerically
/// rank-deficient systems via the U-factor diagonal.
inline Vector solve_dense(const Matrix& a, const Vector& b) {
    if (a.rows() != a.cols()) throw DimensionError("solve_dense: matrix must be square");
    if (b.size() != a.rows()) throw DimensionError("solve_dense: rhs length mismatch");
    Eigen::PartialPivLU<Matrix> lu(a);
    const Vector d = lu.matrixLU().diagonal().cwiseAbs();
    const double dmax = d.maxCoeff();
    const double tol = dmax * static_cast<double>(a.rows()) *
                       std::numeric_limits<double>::epsilon();
    if (!(dmax > 0.0) || d.minCoeff() <= tol || !d.allFinite())
        throw SingularMatrixError("matrix is singular or numerically rank-deficient");
    return lu.solve(b);
}

} // namespace blockamc
