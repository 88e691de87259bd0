//
// lowrank / orth : orthonormal bases, Householder QR, complements
//
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowrank/matrix.hpp"

namespace lowrank {

// m x k matrix with orthonormal columns, k <= m. Construction enforces
// ||Z'Z - I||_max <= 1e-12.
class OrthonormalBasis {
public:
    explicit OrthonormalBasis(DenseMatrix z) : matrix_(std::move(z)) {
        if (matrix_.cols() > matrix_.rows())
            throw std::invalid_argument("OrthonormalBasis: more columns than rows");
        double dev = 0.0;
        for (int i = 0; i < matrix_.cols(); ++i)
            for (int j = i; j < matrix_.cols(); ++j) {
                const double g = column_dot(matrix_, i, j) - (i == j ? 1.0 : 0.0);
                dev = std::max(dev, std::abs(g));
            }
        if (dev > 1e-12)
            throw std::invalid_argument("OrthonormalBasis: columns not orthonormal (deviation " +
                                        std::to_string(dev) + ")");
    }

    const DenseMatrix& matrix() const { return matrix_; }
    int ambient_dim() const { return matrix_.rows(); }
    int dim() const { return matrix_.cols(); }

private:
    DenseMatrix matrix_;
};

namespace detail {

// Householder QR, optionally with greedy column pivoting. R is reduced in
// place; reflectors are kept to form Q columns on demand.
struct HouseholderQr {
    DenseMatrix r;                                // m x k, upper block holds R
    std::vector<std::vector<double>> reflectors;  // unit vectors, leading zeros implied
    std::vector<int> column_order;                // position -> original column
    int rank = 0;
};

inline HouseholderQr householder_qr(DenseMatrix a, bool pivot, double rank_tol = -1.0) {
    const int m = a.rows();
    const int k = a.cols();
    HouseholderQr qr;
    qr.column_order.resize(k);
    for (int j = 0; j < k; ++j) qr.column_order[j] = j;

    const int steps = std::min(m, k);
    qr.reflectors.reserve(steps);
    std::vector<double> diag(steps, 0.0);

    for (int j = 0; j < steps; ++j) {
        if (pivot) {
            int best = j;
            double best_norm = -1.0;
            for (int c = j; c < k; ++c) {
                double s = 0.0;
                for (int i = j; i < m; ++i) s += a(i, c) * a(i, c);
                if (s > best_norm) {
                    best_norm = s;
                    best = c;
                }
            }
            if (best != j) {
                for (int i = 0; i < m; ++i) std::swap(a(i, j), a(i, best));
                std::swap(qr.column_order[j], qr.column_order[best]);
            }
        }

        double norm = 0.0;
        for (int i = j; i < m; ++i) norm += a(i, j) * a(i, j);
        norm = std::sqrt(norm);

        std::vector<double> v(m, 0.0);
        if (norm > 0.0) {
            const double alpha = (a(j, j) >= 0.0) ? -norm : norm;
            double vnorm2 = 0.0;
            for (int i = j; i < m; ++i) {
                v[i] = a(i, j) - (i == j ? alpha : 0.0);
                vnorm2 += v[i] * v[i];
            }
            if (vnorm2 > 0.0) {
                const double inv = 1.0 / std::sqrt(vnorm2);
                for (int i = j; i < m; ++i) v[i] *= inv;
                for (int c = j; c < k; ++c) {
                    double dot = 0.0;
                    for (int i = j; i < m; ++i) dot += v[i] * a(i, c);
                    dot *= 2.0;
                    for (int i = j; i < m; ++i) a(i, c) -= dot * v[i];
                }
            }
            diag[j] = alpha;
        }
        qr.reflectors.push_back(std::move(v));
    }

    const double eps = std::numeric_limits<double>::epsilon();
    const double tol = rank_tol >= 0.0 ? rank_tol
                                       : std::max(m, k) * eps * std::abs(diag.empty() ? 0.0 : diag[0]);
    qr.rank = 0;
    for (int j = 0; j < steps; ++j)
        if (std::abs(diag[j]) > tol) ++qr.rank;
    qr.r = std::move(a);
    return qr;
}

// First `count` columns of the full m x m factor Q.
inline DenseMatrix q_columns(const HouseholderQr& qr, int count) {
    const int m = qr.r.rows();
    DenseMatrix q(m, count);
    for (int j = 0; j < count && j < m; ++j) q(j, j) = 1.0;
    for (int j = static_cast<int>(qr.reflectors.size()) - 1; j >= 0; --j) {
        const std::vector<double>& v = qr.reflectors[j];
        for (int c = 0; c < count; ++c) {
            double dot = 0.0;
            for (int i = j; i < m; ++i) dot += v[i] * q(i, c);
            dot *= 2.0;
            if (dot == 0.0) continue;
            for (int i = j; i < m; ++i) q(i, c) -= dot * v[i];
        }
    }
    return q;
}

} // namespace detail

// Orthonormal basis of range(a) via Householder QR with column pivoting.
// Requires full column rank relative to rank_tol (pass -1 for the default
// max(m,k)*eps*|R_00| gate).
inline OrthonormalBasis orthonormalize(const DenseMatrix& a, double rank_tol = -1.0) {
    detail::HouseholderQr qr = detail::householder_qr(a, /*pivot=*/true, rank_tol);
    if (qr.rank < a.cols())
        throw std::invalid_argument("orthonormalize: rank-deficient input (detected rank " +
                                    std::to_string(qr.rank) + " of " + std::to_string(a.cols()) + ")");
    return OrthonormalBasis(detail::q_columns(qr, a.cols()));
}

// Z_perp with (Z Z_perp) orthogonal; errors when the complement is empty.
inline OrthonormalBasis complement_basis(const OrthonormalBasis& z) {
    const int m = z.ambient_dim();
    const int k = z.dim();
    if (k >= m)
        throw std::invalid_argument("complement_basis: basis already spans the full space");
    detail::HouseholderQr qr = detail::householder_qr(z.matrix(), /*pivot=*/false);
    DenseMatrix full = detail::q_columns(qr, m);
    return OrthonormalBasis(full.columns(k, m - k));
}

} // namespace lowrank
