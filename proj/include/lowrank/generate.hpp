//
// lowrank / generate : seeded factories for test instances
//
// Matrices with prescribed spectra, Haar-random bases, norm-exact additive
// perturbations, and column sampling sketches. Every function derives its
// own stream from (seed, call tag), so outputs never depend on call order
// and identical seeds reproduce identical bytes.
//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowrank/matrix.hpp"
#include "lowrank/orth.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/svd.hpp"

namespace lowrank {

namespace tags {
inline constexpr std::uint64_t spectrum = 0x73706563ULL;
inline constexpr std::uint64_t haar = 0x68616172ULL;
inline constexpr std::uint64_t basis_perturb = 0x62706572ULL;
inline constexpr std::uint64_t matrix_perturb = 0x6d706572ULL;
inline constexpr std::uint64_t column_sample = 0x63736d70ULL;
} // namespace tags

inline DenseMatrix gaussian_matrix(int m, int n, Xoshiro256& rng) {
    DenseMatrix g(m, n);
    for (int j = 0; j < n; ++j) {
        double* c = g.col_ptr(j);
        for (int i = 0; i < m; ++i) c[i] = rng.gaussian();
    }
    return g;
}

// Haar-distributed orthonormal m x k basis: QR of a standard Gaussian with
// the R diagonal sign-fixed to be non-negative.
inline OrthonormalBasis haar_basis(int m, int k, std::uint64_t seed) {
    if (k > m) throw std::invalid_argument("haar_basis: k exceeds m");
    Xoshiro256 rng(mix_seed(seed, tags::haar));
    DenseMatrix g = gaussian_matrix(m, k, rng);
    detail::HouseholderQr qr = detail::householder_qr(g, /*pivot=*/false);
    DenseMatrix q = detail::q_columns(qr, k);
    for (int j = 0; j < k; ++j) {
        if (qr.r(j, j) < 0.0) {
            double* c = q.col_ptr(j);
            for (int i = 0; i < m; ++i) c[i] = -c[i];
        }
    }
    return OrthonormalBasis(std::move(q));
}

struct SpectrumSpec {
    int m = 0;
    int n = 0;
    std::vector<double> sigmas;  // min(m,n) entries, non-negative, non-ascending
    std::uint64_t seed = 0;
};

// A = U diag(sigmas) V' with Haar-random orthonormal factors.
inline DenseMatrix matrix_with_spectrum(const SpectrumSpec& spec) {
    const int r = std::min(spec.m, spec.n);
    if (static_cast<int>(spec.sigmas.size()) != r)
        throw std::invalid_argument("matrix_with_spectrum: need min(m,n) singular values");
    for (std::size_t j = 0; j < spec.sigmas.size(); ++j) {
        if (spec.sigmas[j] < 0.0)
            throw std::invalid_argument("matrix_with_spectrum: negative singular value");
        if (j > 0 && spec.sigmas[j] > spec.sigmas[j - 1])
            throw std::invalid_argument("matrix_with_spectrum: singular values must be non-ascending");
    }
    const OrthonormalBasis u = haar_basis(spec.m, r, mix_seed(spec.seed, tags::spectrum));
    const OrthonormalBasis v = haar_basis(spec.n, r, mix_seed(spec.seed, tags::spectrum + 1));
    DenseMatrix scaled = u.matrix();
    for (int j = 0; j < r; ++j) {
        double* c = scaled.col_ptr(j);
        for (int i = 0; i < spec.m; ++i) c[i] *= spec.sigmas[j];
    }
    return scaled * transpose(v.matrix());
}

// Gaussian m x n matrix rescaled so its two-norm equals `magnitude` exactly
// (one SVD of the raw sample pays for the rescaling).
inline DenseMatrix perturbation_matrix(int m, int n, double magnitude, std::uint64_t seed,
                                       std::uint64_t tag = tags::matrix_perturb) {
    if (magnitude < 0.0) throw std::invalid_argument("perturbation_matrix: negative magnitude");
    if (magnitude == 0.0) return DenseMatrix(m, n);
    Xoshiro256 rng(mix_seed(seed, tag));
    DenseMatrix f = gaussian_matrix(m, n, rng);
    const double s1 = svd(f).singular_values[0];
    return (magnitude / s1) * f;
}

inline DenseMatrix perturb_matrix(const DenseMatrix& a, double magnitude, std::uint64_t seed) {
    return a + perturbation_matrix(a.rows(), a.cols(), magnitude, seed);
}

struct BasisPerturbation {
    DenseMatrix z_hat;   // Z + F
    double f_norm;       // ||F||_2, equals the requested magnitude
    double eps_z;        // ||z_hat^+||_2 * ||Z - z_hat||_2
    bool full_rank;      // rank(z_hat) == rank(Z); guaranteed when f_norm <= 1/2
};

inline BasisPerturbation perturb_basis(const OrthonormalBasis& z, double magnitude, std::uint64_t seed) {
    if (magnitude < 0.0) throw std::invalid_argument("perturb_basis: negative magnitude");
    const int m = z.ambient_dim();
    const int k = z.dim();
    if (magnitude == 0.0) return BasisPerturbation{z.matrix(), 0.0, 0.0, true};

    DenseMatrix f = perturbation_matrix(m, k, magnitude, seed, tags::basis_perturb);
    DenseMatrix z_hat = z.matrix() + f;

    const SvdFactors fac = svd(z_hat);
    const bool full_rank = numerical_rank(fac) == k;
    const double f_norm = svd(f).singular_values[0];
    const double pinv_norm = svd(pseudoinverse(z_hat)).singular_values[0];
    return BasisPerturbation{std::move(z_hat), f_norm, pinv_norm * f_norm, full_rank};
}

// Column sampling with replacement: column j is drawn with probability
// ||a_j||^2 / ||A||_F^2 and rescaled by 1/sqrt(c p_j), which makes the
// sketch an unbiased estimator of A A'.
inline DenseMatrix column_sample_rescale(const DenseMatrix& a, int c, std::uint64_t seed) {
    if (c < 1) throw std::invalid_argument("column_sample_rescale: need at least one column");
    const int n = a.cols();
    std::vector<double> mass(n);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        mass[j] = column_dot(a, j, j);
        total += mass[j];
    }
    if (total == 0.0)
        throw std::invalid_argument("column_sample_rescale: zero matrix has no sampling distribution");

    std::vector<double> cumulative(n);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += mass[j] / total;
        cumulative[j] = acc;
    }

    int last_positive = n - 1;
    while (mass[last_positive] == 0.0) --last_positive;

    Xoshiro256 rng(mix_seed(seed, tags::column_sample));
    DenseMatrix out(a.rows(), c);
    for (int t = 0; t < c; ++t) {
        const double u = rng.uniform01();
        int pick = last_positive;
        for (int j = 0; j <= last_positive; ++j) {
            if (mass[j] > 0.0 && u <= cumulative[j]) {
                pick = j;
                break;
            }
        }
        const double p = mass[pick] / total;
        const double scale = 1.0 / std::sqrt(static_cast<double>(c) * p);
        const double* src = a.col_ptr(pick);
        double* dst = out.col_ptr(t);
        for (int i = 0; i < a.rows(); ++i) dst[i] = src[i] * scale;
    }
    return out;
}

enum class PerturbationKind { basis_additive, matrix_additive, column_sample };

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::matrix_additive;
    double magnitude = 0.0;  // target two-norm, or the column count for sampling
    std::uint64_t seed = 0;

    int column_count() const {
        const int c = static_cast<int>(magnitude);
        if (c < 1 || static_cast<double>(c) != magnitude)
            throw std::invalid_argument("PerturbationSpec: column_sample needs a positive integer count");
        return c;
    }
};

inline const char* to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::basis_additive: return "basis_additive";
        case PerturbationKind::matrix_additive: return "matrix_additive";
        case PerturbationKind::column_sample: return "column_sample";
    }
    return "?";
}

inline PerturbationKind parse_perturbation_kind(const std::string& s) {
    if (s == "basis_additive") return PerturbationKind::basis_additive;
    if (s == "matrix_additive") return PerturbationKind::matrix_additive;
    if (s == "column_sample") return PerturbationKind::column_sample;
    throw std::invalid_argument("unknown perturbation kind '" + s + "'");
}

} // namespace lowrank
