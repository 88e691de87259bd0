//
// lowrank / subspace : orthogonal projectors, principal angles, CS block structure
//
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowrank/matrix.hpp"
#include "lowrank/orth.hpp"
#include "lowrank/report.hpp"
#include "lowrank/schatten.hpp"
#include "lowrank/svd.hpp"

namespace lowrank {

// Orthogonal projector represented by a basis of its range. The realized
// matrix P = B B^+ is only materialized for verification work; callers hold
// the factored form.
class Projector {
public:
    static Projector from_orthonormal(const OrthonormalBasis& z) {
        return Projector(z.matrix(), transpose(z.matrix()), z);
    }

    // Projector Zhat Zhat^+ from a full-column-rank (not necessarily
    // orthonormal) basis; the pseudoinverse replaces the transpose.
    static Projector from_full_rank(const DenseMatrix& z_hat, double rank_tol = -1.0) {
        const SvdFactors f = svd(z_hat);
        const int detected = numerical_rank(f, rank_tol);
        if (detected < z_hat.cols())
            throw std::invalid_argument("Projector::from_full_rank: rank-deficient basis (detected rank " +
                                        std::to_string(detected) + " of " + std::to_string(z_hat.cols()) + ")");
        DenseMatrix pinv = pseudoinverse(z_hat, rank_tol);
        OrthonormalBasis range(f.u.columns(0, z_hat.cols()));
        return Projector(z_hat, std::move(pinv), std::move(range));
    }

    // The rank-0 projector P = 0.
    static Projector zero(int ambient_dim) {
        if (ambient_dim < 1) throw std::invalid_argument("Projector::zero: bad ambient dimension");
        return Projector(ambient_dim);
    }

    int rank() const { return basis_ ? basis_->cols() : 0; }
    int ambient_dim() const { return ambient_; }

    const DenseMatrix& basis() const {
        if (!basis_) throw std::logic_error("Projector: zero projector has no basis");
        return *basis_;
    }

    const OrthonormalBasis& range_basis() const {
        if (!range_) throw std::logic_error("Projector: zero projector has no range basis");
        return *range_;
    }

    DenseMatrix realize() const {
        if (!basis_) return DenseMatrix(ambient_, ambient_);
        return *basis_ * *pinv_;
    }

    DenseMatrix realize_complement() const {
        DenseMatrix c = realize();
        for (int j = 0; j < c.cols(); ++j)
            for (int i = 0; i < c.rows(); ++i)
                c(i, j) = (i == j ? 1.0 : 0.0) - c(i, j);
        return c;
    }

private:
    explicit Projector(int ambient) : ambient_(ambient) {}

    Projector(DenseMatrix basis, DenseMatrix pinv, OrthonormalBasis range)
        : ambient_(basis.rows()), basis_(std::move(basis)), pinv_(std::move(pinv)),
          range_(std::move(range)) {
        DenseMatrix p = realize();
        const double sym = max_abs_diff(p, transpose(p));
        const double idem = max_abs_diff(p * p, p);
        if (sym > 1e-10 || idem > 1e-10)
            throw std::runtime_error("Projector: realized matrix not an orthogonal projector (sym " +
                                     std::to_string(sym) + ", idem " + std::to_string(idem) + ")");
    }

    int ambient_;
    std::optional<DenseMatrix> basis_;
    std::optional<DenseMatrix> pinv_;
    std::optional<OrthonormalBasis> range_;
};

inline Projector projector_from_orthonormal(const OrthonormalBasis& z) {
    return Projector::from_orthonormal(z);
}

inline Projector projector_from_full_rank(const DenseMatrix& z_hat, double rank_tol = -1.0) {
    return Projector::from_full_rank(z_hat, rank_tol);
}

// Principal angles between a k-dimensional and an l-dimensional subspace,
// l >= k. Cosines are the singular values of Z' Zhat; sines of the small
// angles come from the projected-complement SVD rather than sqrt(1-c^2),
// which loses half the digits near theta = 0.
struct PrincipalAngles {
    std::vector<double> cosines;  // non-ascending
    std::vector<double> sines;    // non-descending
    double clamp_magnitude = 0.0;
};

inline PrincipalAngles principal_angles(const OrthonormalBasis& z, const OrthonormalBasis& z_hat) {
    if (z.ambient_dim() != z_hat.ambient_dim())
        throw std::invalid_argument("principal_angles: ambient dimensions disagree");
    if (z.dim() > z_hat.dim())
        throw std::invalid_argument("principal_angles: first basis must be the smaller one (swap arguments)");

    const int k = z.dim();
    PrincipalAngles out;
    out.cosines = svd(transpose(z.matrix()) * z_hat.matrix()).singular_values;

    // Sines of all k angles: singular values of (I - Zhat Zhat') Z, reversed
    // to pair ascending sines with descending cosines.
    DenseMatrix proj_complement =
        DenseMatrix::identity(z.ambient_dim()) - z_hat.matrix() * transpose(z_hat.matrix());
    std::vector<double> sine_desc = svd(proj_complement * z.matrix()).singular_values;

    out.sines.resize(k);
    const double root_half = 0.70710678118654752440;
    for (int j = 0; j < k; ++j) {
        double c = out.cosines[j];
        if (c > 1.0) {
            out.clamp_magnitude = std::max(out.clamp_magnitude, c - 1.0);
            c = 1.0;
        } else if (c < 0.0) {
            out.clamp_magnitude = std::max(out.clamp_magnitude, -c);
            c = 0.0;
        }
        out.cosines[j] = c;

        double s;
        if (c > root_half) {
            s = sine_desc[k - 1 - j];
            if (s > 1.0) {
                out.clamp_magnitude = std::max(out.clamp_magnitude, s - 1.0);
                s = 1.0;
            }
        } else {
            s = std::sqrt((1.0 - c) * (1.0 + c));
        }
        out.sines[j] = s;
    }

    if (out.clamp_magnitude >= 1e-12)
        throw std::runtime_error("principal_angles: clamp magnitude " +
                                 std::to_string(out.clamp_magnitude) + " exceeds 1e-12");
    for (int j = 0; j < k; ++j) {
        const double pyth = out.cosines[j] * out.cosines[j] + out.sines[j] * out.sines[j];
        if (std::abs(pyth - 1.0) > 1e-12)
            throw std::runtime_error("principal_angles: cos^2+sin^2 deviates by " +
                                     std::to_string(std::abs(pyth - 1.0)));
    }
    return out;
}

// ||sin Theta(Z, Zhat)||_p over the k principal angles (l >= k).
inline double sin_theta_norm(const OrthonormalBasis& z, const OrthonormalBasis& z_hat, SchattenIndex p) {
    return schatten_norm_of_singular_values(principal_angles(z, z_hat).sines, p);
}

// ||P1 - P2||_2 for equal ranks; the equal-rank case is exactly where this
// equals the sin-theta distance.
inline double projector_distance(const Projector& p1, const Projector& p2) {
    if (p1.ambient_dim() != p2.ambient_dim())
        throw std::invalid_argument("projector_distance: ambient dimensions disagree");
    if (p1.rank() != p2.rank())
        throw std::invalid_argument("projector_distance: ranks differ (" + std::to_string(p1.rank()) +
                                    " vs " + std::to_string(p2.rank()) +
                                    "); use sin_theta_norm for unequal dimensions");
    return two_norm(p1.realize() - p2.realize());
}

// Block dimensions of the CS decomposition of two subspaces with
// k < l < m-k: r and the companion counts classify the principal angles
// into intersecting (theta ~ 0), generic, and orthogonal (theta ~ pi/2)
// directions.
struct CsBlockDims {
    int r;        // dim(range(Z) ^ range(Zhat))
    int s;        // angles strictly inside (0, pi/2)
    int k_minus;  // k - (r+s)
    int l_minus;  // l - (r+s)
    int m_rem;    // m - (k+l) + r
};

namespace detail {

inline void require_cs_window(int k, int l, int m, const char* who, bool allow_equal_dims = false) {
    if (!(k < l) && !(allow_equal_dims && k == l))
        throw std::invalid_argument(std::string(who) + ": requires k < l (got k=" + std::to_string(k) +
                                    ", l=" + std::to_string(l) + ")");
    if (!(l < m - k))
        throw std::invalid_argument(std::string(who) + ": requires l < m-k (got l=" + std::to_string(l) +
                                    ", m-k=" + std::to_string(m - k) + ")");
}

} // namespace detail

inline CsBlockDims cs_block_dims(const OrthonormalBasis& z, const OrthonormalBasis& z_hat,
                                 double angle_tol = 1e-8) {
    const int k = z.dim();
    const int l = z_hat.dim();
    const int m = z.ambient_dim();
    detail::require_cs_window(k, l, m, "cs_block_dims");

    const PrincipalAngles angles = principal_angles(z, z_hat);
    CsBlockDims d{0, 0, 0, 0, 0};
    for (double c : angles.cosines) {
        if (c >= 1.0 - angle_tol) ++d.r;
        else if (c <= angle_tol) ++d.k_minus;
    }
    d.s = k - d.r - d.k_minus;
    d.l_minus = l - (d.r + d.s);
    d.m_rem = m - (k + l) + d.r;

    if (d.r < 0 || d.s < 0 || d.k_minus < 0 || d.l_minus < 0 || d.m_rem < 0 ||
        d.r + d.s + d.k_minus != k || d.r + d.s + d.l_minus != l ||
        k + d.m_rem + d.s + d.l_minus != m)
        throw std::logic_error("cs_block_dims: inconsistent block dimensions");
    return d;
}

// Norm identities that follow from the CS decomposition: the sines match
// Z' Zhat_perp, the cosines match Z' Zhat, and the complement angles are the
// original cosines padded with m-(k+l) ones. Checked in the two-norm, the
// Frobenius norm, and the requested p.
inline BoundReport verify_cs_identities(const OrthonormalBasis& z, const OrthonormalBasis& z_hat,
                                        SchattenIndex p) {
    const int k = z.dim();
    const int l = z_hat.dim();
    const int m = z.ambient_dim();
    detail::require_cs_window(k, l, m, "verify_cs_identities", /*allow_equal_dims=*/true);

    const OrthonormalBasis z_perp = complement_basis(z);
    const OrthonormalBasis z_hat_perp = complement_basis(z_hat);
    const PrincipalAngles angles = principal_angles(z, z_hat);
    const PrincipalAngles comp_angles = principal_angles(z_hat_perp, z_perp);

    std::vector<double> padded(static_cast<std::size_t>(m - k - l), 1.0);
    padded.insert(padded.end(), angles.cosines.begin(), angles.cosines.end());

    BoundReport rep;
    rep.bound_id = "cs_identities";
    rep.m = m;
    rep.k = k;
    rep.c = l;
    rep.p = p.to_string();

    std::vector<SchattenIndex> norms = {SchattenIndex::inf(), SchattenIndex::integer(2)};
    if (p != norms[0] && p != norms[1]) norms.push_back(p);

    double worst = 0.0;
    for (const SchattenIndex& q : norms) {
        const double d_sin =
            std::abs(schatten_norm_of_singular_values(angles.sines, q) -
                     schatten_norm(transpose(z.matrix()) * z_hat_perp.matrix(), q));
        const double d_cos =
            std::abs(schatten_norm_of_singular_values(angles.cosines, q) -
                     schatten_norm(transpose(z.matrix()) * z_hat.matrix(), q));
        const double d_comp =
            std::abs(schatten_norm_of_singular_values(comp_angles.cosines, q) -
                     schatten_norm_of_singular_values(padded, q));
        const std::string tag = q.to_string();
        rep.add_context("d_sin_" + tag, d_sin);
        rep.add_context("d_cos_" + tag, d_cos);
        rep.add_context("d_comp_" + tag, d_comp);
        worst = std::max({worst, d_sin, d_cos, d_comp});
    }

    rep.lhs = worst;
    rep.rhs_upper = 0.0;
    rep.tolerance = 1e-10;
    finalize_report(rep);
    return rep;
}

} // namespace lowrank
