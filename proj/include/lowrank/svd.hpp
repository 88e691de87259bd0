//
// lowrank / svd : one-sided Jacobi SVD, rank-k truncation, pseudoinverse
//
// The factorization is fully deterministic: cyclic sweeps in a fixed pair
// order, stable descending sort of the singular values, and a sign
// convention (first nonzero component of every left singular vector is
// non-negative) so golden outputs are reproducible.
//
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowrank/matrix.hpp"
#include "lowrank/orth.hpp"

namespace lowrank {

struct SvdFactors {
    DenseMatrix u;                        // m x m orthogonal
    std::vector<double> singular_values;  // min(m,n), non-ascending
    DenseMatrix v;                        // n x n orthogonal
};

class SvdConvergenceError : public std::runtime_error {
public:
    SvdConvergenceError(double residual, int sweeps)
        : std::runtime_error("svd: one-sided Jacobi did not converge after " +
                             std::to_string(sweeps) + " sweeps (worst column cosine " +
                             std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

namespace detail {

constexpr int kJacobiSweepBudget = 60;
constexpr double kJacobiConvergenceTol = 1e-14;

// One-sided Jacobi on a tall matrix (m >= n): rotate column pairs of W
// until all pairwise cosines fall below tolerance, accumulating the
// rotations into V. Then A = W V' with W's columns orthogonal.
inline SvdFactors jacobi_tall(const DenseMatrix& a) {
    const int m = a.rows();
    const int n = a.cols();
    DenseMatrix w = a;
    DenseMatrix v = DenseMatrix::identity(n);

    // Columns that sink below the numerical-zero gate are flushed to exact
    // zero: rank-deficient inputs otherwise leave noise columns whose mutual
    // cosines never settle. A column norm can never fall below sigma_min of
    // the input, so only genuinely negligible directions are dropped.
    double max_norm = 0.0;
    for (int j = 0; j < n; ++j) max_norm = std::max(max_norm, column_norm(w, j));
    const double zero_gate =
        std::max(m, n) * std::numeric_limits<double>::epsilon() * max_norm;
    const double zero_gate2 = zero_gate * zero_gate;
    auto flush_if_negligible = [&](int col, double norm2) {
        if (norm2 == 0.0 || norm2 > zero_gate2) return norm2;
        double* c = w.col_ptr(col);
        for (int r = 0; r < m; ++r) c[r] = 0.0;
        return 0.0;
    };

    double worst = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < kJacobiSweepBudget && !converged; ++sweep) {
        worst = 0.0;
        bool rotated = false;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double alpha = flush_if_negligible(i, column_dot(w, i, i));
                const double beta = flush_if_negligible(j, column_dot(w, j, j));
                if (alpha == 0.0 || beta == 0.0) continue;
                const double gamma = column_dot(w, i, j);
                const double cosine = (std::abs(gamma) / std::sqrt(alpha)) / std::sqrt(beta);
                worst = std::max(worst, cosine);
                if (cosine <= kJacobiConvergenceTol) continue;

                const double tau = (beta - alpha) / (2.0 * gamma);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                double* wi = w.col_ptr(i);
                double* wj = w.col_ptr(j);
                for (int r = 0; r < m; ++r) {
                    const double x = wi[r];
                    const double y = wj[r];
                    wi[r] = c * x - s * y;
                    wj[r] = s * x + c * y;
                }
                double* vi = v.col_ptr(i);
                double* vj = v.col_ptr(j);
                for (int r = 0; r < n; ++r) {
                    const double x = vi[r];
                    const double y = vj[r];
                    vi[r] = c * x - s * y;
                    vj[r] = s * x + c * y;
                }
                rotated = true;
            }
        }
        converged = !rotated;
    }
    if (!converged) throw SvdConvergenceError(worst, kJacobiSweepBudget);

    std::vector<double> norms(n);
    for (int j = 0; j < n; ++j) norms[j] = column_norm(w, j);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return norms[i] > norms[j]; });

    SvdFactors f;
    f.singular_values.resize(n);
    f.v = DenseMatrix(n, n);
    for (int jj = 0; jj < n; ++jj) {
        f.singular_values[jj] = norms[order[jj]];
        std::copy(v.col_ptr(order[jj]), v.col_ptr(order[jj]) + n, f.v.col_ptr(jj));
    }

    const double eps = std::numeric_limits<double>::epsilon();
    const double sigma1 = f.singular_values.empty() ? 0.0 : f.singular_values[0];
    const double keep_tol = std::max(m, n) * eps * sigma1;

    int kept = 0;
    while (kept < n && f.singular_values[kept] > keep_tol) ++kept;

    f.u = DenseMatrix(m, m);
    for (int jj = 0; jj < kept; ++jj) {
        const double inv = 1.0 / f.singular_values[jj];
        const double* src = w.col_ptr(order[jj]);
        double* dst = f.u.col_ptr(jj);
        for (int r = 0; r < m; ++r) dst[r] = src[r] * inv;
    }
    if (kept == 0) {
        f.u = DenseMatrix::identity(m);
    } else if (kept < m) {
        // Fill the orthogonal complement of the kept columns.
        HouseholderQr qr = householder_qr(f.u.columns(0, kept), /*pivot=*/false);
        DenseMatrix full = q_columns(qr, m);
        for (int jj = kept; jj < m; ++jj)
            std::copy(full.col_ptr(jj), full.col_ptr(jj) + m, f.u.col_ptr(jj));
    }
    return f;
}

inline void apply_sign_convention(SvdFactors& f) {
    const int m = f.u.rows();
    const int n = f.v.rows();
    const int r = std::min(m, n);
    for (int j = 0; j < m; ++j) {
        int first = 0;
        while (first < m && f.u(first, j) == 0.0) ++first;
        if (first == m || f.u(first, j) >= 0.0) continue;
        double* uc = f.u.col_ptr(j);
        for (int i = 0; i < m; ++i) uc[i] = -uc[i];
        if (j < r) {
            double* vc = f.v.col_ptr(j);
            for (int i = 0; i < n; ++i) vc[i] = -vc[i];
        }
    }
}

} // namespace detail

// Full SVD A = U Sigma V'. Deterministic; throws SvdConvergenceError if the
// sweep budget is exhausted (signals a kernel bug, never returned silently).
inline SvdFactors svd(const DenseMatrix& a) {
    for (double x : a.data())
        if (!std::isfinite(x)) throw std::invalid_argument("svd: non-finite entry");
    SvdFactors f;
    if (a.rows() >= a.cols()) {
        f = detail::jacobi_tall(a);
    } else {
        SvdFactors ft = detail::jacobi_tall(transpose(a));
        f.u = std::move(ft.v);
        f.v = std::move(ft.u);
        f.singular_values = std::move(ft.singular_values);
    }
    detail::apply_sign_convention(f);
    return f;
}

inline std::vector<double> singular_values(const DenseMatrix& a) {
    return svd(a).singular_values;
}

inline double default_rank_tol(int m, int n, double sigma1) {
    return std::max(m, n) * std::numeric_limits<double>::epsilon() * sigma1;
}

inline int numerical_rank(const SvdFactors& f, double rank_tol = -1.0) {
    const double sigma1 = f.singular_values.empty() ? 0.0 : f.singular_values[0];
    const double tol = rank_tol >= 0.0 ? rank_tol : default_rank_tol(f.u.rows(), f.v.rows(), sigma1);
    int r = 0;
    for (double s : f.singular_values)
        if (s > tol) ++r;
    return r;
}

inline int numerical_rank(const DenseMatrix& a, double rank_tol = -1.0) {
    return numerical_rank(svd(a), rank_tol);
}

inline DenseMatrix reconstruct(const SvdFactors& f) {
    const int m = f.u.rows();
    const int r = static_cast<int>(f.singular_values.size());
    DenseMatrix scaled = f.u.columns(0, r);
    for (int j = 0; j < r; ++j) {
        double* c = scaled.col_ptr(j);
        for (int i = 0; i < m; ++i) c[i] *= f.singular_values[j];
    }
    return scaled * transpose(f.v.columns(0, r));
}

// Best rank-k approximation A_k = U_k Sigma_k V_k' together with its basis.
struct RankKApprox {
    int k;
    DenseMatrix a_k;
    OrthonormalBasis basis;            // U_k
    std::vector<double> sigmas;        // leading k singular values
};

inline RankKApprox truncate(const SvdFactors& f, int k) {
    const int rank = numerical_rank(f);
    if (k < 1 || k > rank)
        throw std::invalid_argument("truncate: k=" + std::to_string(k) +
                                    " outside [1, numerical rank " + std::to_string(rank) + "]");
    DenseMatrix uk = f.u.columns(0, k);
    std::vector<double> sig(f.singular_values.begin(), f.singular_values.begin() + k);
    DenseMatrix scaled = uk;
    for (int j = 0; j < k; ++j) {
        double* c = scaled.col_ptr(j);
        for (int i = 0; i < scaled.rows(); ++i) c[i] *= sig[j];
    }
    DenseMatrix a_k = scaled * transpose(f.v.columns(0, k));
    return RankKApprox{k, std::move(a_k), OrthonormalBasis(std::move(uk)), std::move(sig)};
}

// Moore-Penrose pseudoinverse; singular values at or below rank_tol are
// treated as exactly zero (default gate max(m,n)*eps*sigma_1).
inline DenseMatrix pseudoinverse(const DenseMatrix& a, double rank_tol = -1.0) {
    const SvdFactors f = svd(a);
    const int m = a.rows();
    const int n = a.cols();
    const double sigma1 = f.singular_values.empty() ? 0.0 : f.singular_values[0];
    const double tol = rank_tol >= 0.0 ? rank_tol : default_rank_tol(m, n, sigma1);

    DenseMatrix pinv(n, m);
    for (std::size_t j = 0; j < f.singular_values.size(); ++j) {
        const double s = f.singular_values[j];
        if (s <= tol) break; // non-ascending order
        const double inv = 1.0 / s;
        const double* vj = f.v.col_ptr(static_cast<int>(j));
        const double* uj = f.u.col_ptr(static_cast<int>(j));
        for (int c = 0; c < m; ++c) {
            double* pc = pinv.col_ptr(c);
            const double w = inv * uj[c];
            for (int r = 0; r < n; ++r) pc[r] += vj[r] * w;
        }
    }
    return pinv;
}

} // namespace lowrank
