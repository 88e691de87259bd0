//
// lowrank / matrix : dense real matrix type and elementary operations
//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lowrank {

// Dense real m x n matrix, column-major storage. Entries must be finite;
// constructors taking user data reject NaN/Inf.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(check_dims(rows, cols)), 0.0) {}

    DenseMatrix(int rows, int cols, std::vector<double> column_major)
        : rows_(rows), cols_(cols), data_(std::move(column_major)) {
        if (data_.size() != static_cast<std::size_t>(check_dims(rows, cols)))
            throw std::invalid_argument("DenseMatrix: entry count does not match rows*cols");
        for (double x : data_)
            if (!std::isfinite(x))
                throw std::invalid_argument("DenseMatrix: non-finite entry");
    }

    static DenseMatrix identity(int n) {
        DenseMatrix I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    // Rectangular matrix with d on the main diagonal, zero elsewhere.
    static DenseMatrix diagonal(int rows, int cols, const std::vector<double>& d) {
        DenseMatrix out(rows, cols);
        const int r = std::min(rows, cols);
        if (static_cast<int>(d.size()) > r)
            throw std::invalid_argument("DenseMatrix::diagonal: too many diagonal entries");
        for (int i = 0; i < static_cast<int>(d.size()); ++i) {
            if (!std::isfinite(d[i])) throw std::invalid_argument("DenseMatrix::diagonal: non-finite entry");
            out(i, i) = d[i];
        }
        return out;
    }

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const int m = static_cast<int>(rows.size());
        if (m == 0) throw std::invalid_argument("DenseMatrix::from_rows: empty");
        const int n = static_cast<int>(rows.begin()->size());
        DenseMatrix out(m, n);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != n)
                throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
            int j = 0;
            for (double x : row) {
                if (!std::isfinite(x)) throw std::invalid_argument("DenseMatrix::from_rows: non-finite entry");
                out(i, j++) = x;
            }
            ++i;
        }
        return out;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * rows_ + i]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * rows_ + i]; }

    const std::vector<double>& data() const { return data_; }

    // Pointer to the start of column j (contiguous, rows() entries).
    double* col_ptr(int j) { return data_.data() + static_cast<std::size_t>(j) * rows_; }
    const double* col_ptr(int j) const { return data_.data() + static_cast<std::size_t>(j) * rows_; }

    // Columns [first, first+count) as a new matrix.
    DenseMatrix columns(int first, int count) const {
        if (first < 0 || count < 0 || first + count > cols_)
            throw std::invalid_argument("DenseMatrix::columns: range out of bounds");
        DenseMatrix out(rows_, count);
        for (int j = 0; j < count; ++j)
            std::copy(col_ptr(first + j), col_ptr(first + j) + rows_, out.col_ptr(j));
        return out;
    }

    void set_column(int j, const DenseMatrix& v) {
        if (v.rows() != rows_ || v.cols() != 1)
            throw std::invalid_argument("DenseMatrix::set_column: shape mismatch");
        std::copy(v.col_ptr(0), v.col_ptr(0) + rows_, col_ptr(j));
    }

    bool same_shape(const DenseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    static long check_dims(int rows, int cols) {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("DenseMatrix: dimensions must be positive");
        return static_cast<long>(rows) * cols;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i)
            out(j, i) = a(i, j);
    return out;
}

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product: inner dimensions disagree");
    DenseMatrix out(a.rows(), b.cols());
    for (int j = 0; j < b.cols(); ++j) {
        double* oc = out.col_ptr(j);
        for (int k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            if (bkj == 0.0) continue;
            const double* ac = a.col_ptr(k);
            for (int i = 0; i < a.rows(); ++i) oc[i] += ac[i] * bkj;
        }
    }
    return out;
}

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("matrix sum: shape mismatch");
    DenseMatrix out = a;
    for (int j = 0; j < a.cols(); ++j) {
        double* oc = out.col_ptr(j);
        const double* bc = b.col_ptr(j);
        for (int i = 0; i < a.rows(); ++i) oc[i] += bc[i];
    }
    return out;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("matrix difference: shape mismatch");
    DenseMatrix out = a;
    for (int j = 0; j < a.cols(); ++j) {
        double* oc = out.col_ptr(j);
        const double* bc = b.col_ptr(j);
        for (int i = 0; i < a.rows(); ++i) oc[i] -= bc[i];
    }
    return out;
}

inline DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix out = a;
    for (int j = 0; j < a.cols(); ++j) {
        double* oc = out.col_ptr(j);
        for (int i = 0; i < a.rows(); ++i) oc[i] *= s;
    }
    return out;
}

inline double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// Frobenius norm straight from the entries (no SVD involved).
inline double frobenius_from_entries(const DenseMatrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

inline double column_dot(const DenseMatrix& a, int i, int j) {
    const double* ci = a.col_ptr(i);
    const double* cj = a.col_ptr(j);
    double s = 0.0;
    for (int r = 0; r < a.rows(); ++r) s += ci[r] * cj[r];
    return s;
}

inline double column_norm(const DenseMatrix& a, int j) {
    return std::sqrt(column_dot(a, j, j));
}

} // namespace lowrank
