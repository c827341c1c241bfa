// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "blockamc/types.hpp"

namespace blockamc {

/// Formats a double losslessly (round-trips bit-exactly) and
/// deterministically, for stable CSV/JSON output.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Matrix CSV: one row per line, comma-separated values.
inline std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

/// Vector CSV: one value per line (a column vector).
inline std::string vector_to_csv(const Vector& v) {
    std::string out;
    for (Index i = 0; i < v.size(); ++i) {
        out += format_double(v(i));
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << text;
    if (!f) throw IoError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline Matrix matrix_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("bad CSV number: '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged CSV: row lengths differ");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty CSV matrix");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

inline Vector vector_from_csv(const std::string& text) {
    Matrix m = matrix_from_csv(text);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw IoError("CSV is not a vector");
}

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
    write_text_file(path, matrix_to_csv(m));
}

inline void write_vector_csv(const std::string& path, const Vector& v) {
    write_text_file(path, vector_to_csv(v));
}

inline Matrix read_matrix_csv(const std::string& path) {
    return matrix_from_csv(read_text_file(path));
}

inline Vector read_vector_csv(const std::string& path) {
    return vector_from_csv(read_text_file(path));
}

} // namespace blockamc
