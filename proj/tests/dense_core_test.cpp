#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

#include "lowrank/io.hpp"
#include "lowrank/matrix.hpp"
#include "lowrank/orth.hpp"
#include "lowrank/schatten.hpp"
#include "lowrank/svd.hpp"
#include "test_util.hpp"

using namespace lowrank;

namespace {

// Independent oracle: Eigen's two-sided Jacobi SVD has nothing in common
// with the one-sided sweep implementation under test.
std::vector<double> oracle_singular_values(const DenseMatrix& a) {
    Eigen::MatrixXd e(a.rows(), a.cols());
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i)
            e(i, j) = a(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
    std::vector<double> out(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
    return out;
}

void expect_factor_invariants(const DenseMatrix& a, const SvdFactors& f) {
    const int m = a.rows();
    const int n = a.cols();
    EXPECT_LE(max_abs_diff(transpose(f.u) * f.u, DenseMatrix::identity(m)), 1e-12);
    EXPECT_LE(max_abs_diff(transpose(f.v) * f.v, DenseMatrix::identity(n)), 1e-12);
    for (std::size_t j = 0; j + 1 < f.singular_values.size(); ++j)
        EXPECT_GE(f.singular_values[j], f.singular_values[j + 1]);
    for (double s : f.singular_values) EXPECT_GE(s, 0.0);
    const double sigma1 = f.singular_values.empty() ? 0.0 : f.singular_values[0];
    EXPECT_LE(frobenius_from_entries(a - reconstruct(f)),
              1e-12 * std::max(1.0, sigma1) * std::sqrt(double(m) * n));
}

} // namespace

TEST(Svd, DiagonalIsFixedPoint) {
    DenseMatrix a = DenseMatrix::diagonal(3, 3, {3.0, 2.0, 1.0});
    SvdFactors f = svd(a);
    EXPECT_LE(max_abs_diff(f.u, DenseMatrix::identity(3)), 1e-14);
    EXPECT_LE(max_abs_diff(f.v, DenseMatrix::identity(3)), 1e-14);
    ASSERT_EQ(f.singular_values.size(), 3u);
    EXPECT_DOUBLE_EQ(f.singular_values[0], 3.0);
    EXPECT_DOUBLE_EQ(f.singular_values[1], 2.0);
    EXPECT_DOUBLE_EQ(f.singular_values[2], 1.0);
}

TEST(Svd, ZeroMatrix) {
    DenseMatrix a(2, 3);
    SvdFactors f = svd(a);
    ASSERT_EQ(f.singular_values.size(), 2u);
    EXPECT_EQ(f.singular_values[0], 0.0);
    EXPECT_EQ(f.singular_values[1], 0.0);
    expect_factor_invariants(a, f);
}

TEST(Svd, MatchesOracleSeed42) {
    DenseMatrix a = testutil::gaussian(5, 4, 42);
    SvdFactors f = svd(a);
    std::vector<double> oracle = oracle_singular_values(a);
    ASSERT_EQ(f.singular_values.size(), oracle.size());
    for (std::size_t j = 0; j < oracle.size(); ++j)
        EXPECT_NEAR(f.singular_values[j], oracle[j], 1e-10);
    expect_factor_invariants(a, f);
}

TEST(Svd, InvariantsOnRandomShapes) {
    const int shapes[][2] = {{1, 1}, {1, 5}, {5, 1}, {4, 4}, {7, 3}, {3, 7}, {20, 15}, {15, 20}};
    std::uint64_t seed = 1000;
    for (auto [m, n] : shapes) {
        DenseMatrix a = testutil::gaussian(m, n, seed++);
        SvdFactors f = svd(a);
        expect_factor_invariants(a, f);
        std::vector<double> oracle = oracle_singular_values(a);
        for (std::size_t j = 0; j < oracle.size(); ++j)
            EXPECT_NEAR(f.singular_values[j], oracle[j], 1e-10);
    }
}

TEST(Svd, WideMatrixHandledByTranspose) {
    DenseMatrix a = testutil::gaussian(3, 8, 7);
    SvdFactors f = svd(a);
    EXPECT_EQ(f.u.rows(), 3);
    EXPECT_EQ(f.u.cols(), 3);
    EXPECT_EQ(f.v.rows(), 8);
    EXPECT_EQ(f.v.cols(), 8);
    expect_factor_invariants(a, f);
}

TEST(Svd, SignConventionFirstNonzeroPositive) {
    for (std::uint64_t seed : {2u, 3u, 4u}) {
        DenseMatrix a = testutil::gaussian(6, 4, seed);
        SvdFactors f = svd(a);
        for (int j = 0; j < f.u.cols(); ++j) {
            int i = 0;
            while (i < f.u.rows() && f.u(i, j) == 0.0) ++i;
            ASSERT_LT(i, f.u.rows());
            EXPECT_GT(f.u(i, j), 0.0);
        }
    }
}

TEST(Svd, DeterministicAcrossCalls) {
    DenseMatrix a = testutil::gaussian(9, 6, 55);
    SvdFactors f1 = svd(a);
    SvdFactors f2 = svd(a);
    EXPECT_EQ(f1.u.data(), f2.u.data());
    EXPECT_EQ(f1.v.data(), f2.v.data());
    EXPECT_EQ(f1.singular_values, f2.singular_values);
}

TEST(Svd, RejectsNonFinite) {
    DenseMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(svd(a), std::invalid_argument);
}

TEST(Truncate, DiagonalTruncation) {
    DenseMatrix a = DenseMatrix::diagonal(3, 3, {3.0, 2.0, 1.0});
    RankKApprox r = truncate(svd(a), 2);
    EXPECT_LE(max_abs_diff(r.a_k, DenseMatrix::diagonal(3, 3, {3.0, 2.0, 0.0})), 1e-14);
    EXPECT_EQ(r.sigmas, (std::vector<double>{3.0, 2.0}));
}

TEST(Truncate, FullRankTruncationIsIdentity) {
    DenseMatrix a = testutil::gaussian(5, 4, 9);
    SvdFactors f = svd(a);
    RankKApprox r = truncate(f, numerical_rank(f));
    EXPECT_LE(max_abs_diff(r.a_k, a), 1e-12 * std::max(1.0, f.singular_values[0]));
}

TEST(Truncate, TailEnergySeed42) {
    DenseMatrix a = testutil::gaussian(5, 4, 42);
    SvdFactors f = svd(a);
    RankKApprox r = truncate(f, 2);
    const double tail = frobenius_from_entries(a - r.a_k);
    const std::vector<double> oracle = oracle_singular_values(a);
    const double expected = oracle[2] * oracle[2] + oracle[3] * oracle[3];
    EXPECT_NEAR(tail * tail, expected, 1e-10);
}

TEST(Truncate, SpectralErrorIsNextSingularValue) {
    DenseMatrix a = testutil::gaussian(8, 6, 11);
    SvdFactors f = svd(a);
    for (int k = 1; k <= 3; ++k) {
        RankKApprox r = truncate(f, k);
        EXPECT_NEAR(two_norm(a - r.a_k), f.singular_values[k], 1e-10 * f.singular_values[0]);
    }
}

TEST(Truncate, ProjectorFormMatchesProduct) {
    // A_k = U_k U_k' A, the projector form of the best approximation.
    DenseMatrix a = testutil::gaussian(6, 5, 13);
    SvdFactors f = svd(a);
    RankKApprox r = truncate(f, 2);
    DenseMatrix via_projector = r.basis.matrix() * (transpose(r.basis.matrix()) * a);
    EXPECT_LE(max_abs_diff(r.a_k, via_projector), 1e-12 * f.singular_values[0]);
}

TEST(Truncate, RejectsKAboveNumericalRank) {
    DenseMatrix a = testutil::random_rank_k(6, 5, 2, 3);
    try {
        truncate(svd(a), 4);
        FAIL() << "expected rank error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("numerical rank 2"), std::string::npos);
    }
}

TEST(Pseudoinverse, Diagonal) {
    DenseMatrix a = DenseMatrix::diagonal(2, 2, {2.0, 0.0});
    EXPECT_LE(max_abs_diff(pseudoinverse(a), DenseMatrix::diagonal(2, 2, {0.5, 0.0})), 1e-14);
}

TEST(Pseudoinverse, OrthonormalGivesTranspose) {
    OrthonormalBasis z = haar_basis(6, 3, 21);
    EXPECT_LE(max_abs_diff(pseudoinverse(z.matrix()), transpose(z.matrix())), 1e-13);
}

TEST(Pseudoinverse, MoorePenroseResidualsSeed7) {
    DenseMatrix a = testutil::gaussian(4, 3, 7);
    DenseMatrix ap = pseudoinverse(a);
    const double scale = std::max(1.0, two_norm(ap) * two_norm(a));
    EXPECT_LE(max_abs_diff(a * ap * a, a), 1e-10 * scale);
    EXPECT_LE(max_abs_diff(ap * a * ap, ap), 1e-10 * scale);
    DenseMatrix aap = a * ap;
    DenseMatrix apa = ap * a;
    EXPECT_LE(max_abs_diff(aap, transpose(aap)), 1e-10 * scale);
    EXPECT_LE(max_abs_diff(apa, transpose(apa)), 1e-10 * scale);
}

TEST(Pseudoinverse, InvolutionOnFullRank) {
    for (std::uint64_t seed : {31u, 32u, 33u}) {
        DenseMatrix a = testutil::gaussian(5, 3, seed);
        EXPECT_LE(max_abs_diff(pseudoinverse(pseudoinverse(a)), a), 1e-9);
    }
}

TEST(Pseudoinverse, RankTolZeroesSmallSingularValues) {
    DenseMatrix a = DenseMatrix::diagonal(3, 3, {4.0, 1e-13, 0.0});
    DenseMatrix ap = pseudoinverse(a, 1e-10);
    EXPECT_LE(max_abs_diff(ap, DenseMatrix::diagonal(3, 3, {0.25, 0.0, 0.0})), 1e-14);
}

TEST(Orthonormalize, KeepsOrthonormalInput) {
    OrthonormalBasis z = haar_basis(7, 3, 17);
    OrthonormalBasis q = orthonormalize(z.matrix());
    // Same range: mutual projection residual vanishes.
    DenseMatrix pz = z.matrix() * transpose(z.matrix());
    DenseMatrix pq = q.matrix() * transpose(q.matrix());
    EXPECT_LE(max_abs_diff(pz, pq), 1e-12);
}

TEST(Orthonormalize, NormalizesSingleVector) {
    DenseMatrix a = DenseMatrix::from_rows({{1.0}, {1.0}});
    OrthonormalBasis q = orthonormalize(a);
    const double root_half = std::sqrt(0.5);
    EXPECT_NEAR(std::abs(q.matrix()(0, 0)), root_half, 1e-15);
    EXPECT_NEAR(std::abs(q.matrix()(1, 0)), root_half, 1e-15);
    EXPECT_NEAR(q.matrix()(0, 0) * q.matrix()(1, 0), 0.5, 1e-15);
}

TEST(Orthonormalize, RangePreservedSeed3) {
    DenseMatrix a = testutil::gaussian(6, 3, 3);
    OrthonormalBasis q = orthonormalize(a);
    EXPECT_LE(max_abs_diff(transpose(q.matrix()) * q.matrix(), DenseMatrix::identity(3)), 1e-12);
    // range(Q) contains range(A) and vice versa.
    DenseMatrix p = q.matrix() * transpose(q.matrix());
    EXPECT_LE(max_abs_diff(p * a, a), 1e-10 * std::max(1.0, max_abs(a)));
    DenseMatrix pinv_a = pseudoinverse(a);
    DenseMatrix pa = a * pinv_a;
    EXPECT_LE(max_abs_diff(pa * q.matrix(), q.matrix()), 1e-10);
}

TEST(Orthonormalize, ReportsDetectedRank) {
    DenseMatrix a = testutil::random_rank_k(6, 4, 2, 5);
    try {
        orthonormalize(a);
        FAIL() << "expected rank error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("detected rank 2"), std::string::npos);
    }
}

TEST(ComplementBasis, PlaneCases) {
    DenseMatrix e1(2, 1);
    e1(0, 0) = 1.0;
    OrthonormalBasis c = complement_basis(OrthonormalBasis(e1));
    EXPECT_NEAR(std::abs(c.matrix()(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(c.matrix()(0, 0), 0.0, 1e-15);

    DenseMatrix e12(3, 2);
    e12(0, 0) = 1.0;
    e12(1, 1) = 1.0;
    OrthonormalBasis c3 = complement_basis(OrthonormalBasis(e12));
    EXPECT_NEAR(std::abs(c3.matrix()(2, 0)), 1.0, 1e-15);
}

TEST(ComplementBasis, AssembledMatrixOrthogonalSeed11) {
    OrthonormalBasis z = haar_basis(5, 2, 11);
    OrthonormalBasis zp = complement_basis(z);
    EXPECT_EQ(zp.dim(), 3);
    DenseMatrix full(5, 5);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 5; ++i) full(i, j) = z.matrix()(i, j);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 5; ++i) full(i, j + 2) = zp.matrix()(i, j);
    EXPECT_LE(max_abs_diff(transpose(full) * full, DenseMatrix::identity(5)), 1e-12);
}

TEST(ComplementBasis, EmptyComplementRejected) {
    OrthonormalBasis z = haar_basis(4, 4, 19);
    EXPECT_THROW(complement_basis(z), std::invalid_argument);
}

TEST(DenseMatrixType, ConstructionGuards) {
    EXPECT_THROW(DenseMatrix(0, 3), std::invalid_argument);
    EXPECT_THROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
    EXPECT_THROW(DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}),
                 std::invalid_argument);
}

TEST(MatrixCsv, RoundTripIsBitwise) {
    DenseMatrix a = testutil::gaussian(4, 6, 77);
    std::stringstream ss;
    write_matrix_csv(ss, a);
    DenseMatrix b = read_matrix_csv(ss);
    ASSERT_TRUE(a.same_shape(b));
    EXPECT_EQ(a.data(), b.data());
}

TEST(BestApprox, BeatsRandomRankKCandidates) {
    // Best approximation property against brute-force candidates.
    lowrank::Xoshiro256 rng(808);
    for (int inst = 0; inst < 5; ++inst) {
        const int m = 5, n = 6, k = 2;
        DenseMatrix a = lowrank::gaussian_matrix(m, n, rng);
        RankKApprox best = truncate(svd(a), k);
        const double err2 = two_norm(a - best.a_k);
        const double errf = frobenius_from_entries(a - best.a_k);
        for (int t = 0; t < 50; ++t) {
            DenseMatrix b = lowrank::gaussian_matrix(m, k, rng) * lowrank::gaussian_matrix(k, n, rng);
            EXPECT_LE(err2, two_norm(a - b) + 1e-10);
            EXPECT_LE(errf, frobenius_from_entries(a - b) + 1e-10);
        }
    }
}
