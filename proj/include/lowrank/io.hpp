//
// lowrank / io : shortest round-trip float printing and matrix CSV
//
#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lowrank/matrix.hpp"

namespace lowrank {

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double x = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: bad number '" + std::string(s) + "'");
    return x;
}

// One matrix row per line, comma-separated.
inline void write_matrix_csv(std::ostream& os, const DenseMatrix& a) {
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            if (j > 0) os << ',';
            os << format_double(a(i, j));
        }
        os << '\n';
    }
}

inline void write_matrix_csv(const std::string& path, const DenseMatrix& a) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_matrix_csv: cannot open " + path);
    write_matrix_csv(os, a);
}

inline DenseMatrix read_matrix_csv(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            std::string_view cell(line.data() + start,
                                  (comma == std::string::npos ? line.size() : comma) - start);
            row.push_back(parse_double(cell));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("read_matrix_csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("read_matrix_csv: empty input");
    DenseMatrix out(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j)
            out(i, j) = rows[i][j];
    return out;
}

inline DenseMatrix read_matrix_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_matrix_csv: cannot open " + path);
    return read_matrix_csv(is);
}

} // namespace lowrank
