#include <gtest/gtest.h>

#include <cmath>

#include "lowrank/checkers.hpp"
#include "test_util.hpp"

using namespace lowrank;

namespace {

const SchattenIndex kP1 = SchattenIndex::integer(1);
const SchattenIndex kP2 = SchattenIndex::integer(2);
const SchattenIndex kP4 = SchattenIndex::integer(4);
const SchattenIndex kPInf = SchattenIndex::inf();

DenseMatrix gapped_matrix(int m, int n, int k, double head, std::uint64_t seed) {
    const int r = std::min(m, n);
    std::vector<double> sig(r);
    for (int j = 0; j < r; ++j)
        sig[j] = j < k ? head * (1.0 + 0.1 * (k - 1 - j)) : std::pow(0.8, j - k);
    return matrix_with_spectrum(SpectrumSpec{m, n, sig, seed});
}

} // namespace

// --- thm1 --------------------------------------------------------------------

TEST(Thm1, ZeroPerturbationCollapses) {
    DenseMatrix a = testutil::gaussian(6, 4, 1);
    OrthonormalBasis z = haar_basis(6, 2, 2);
    BoundReport rep = check_basis_perturbation(a, z, z.matrix(), kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.context_value("eps_z"), 0.0, 1e-12);
    EXPECT_NEAR(rep.lhs, rep.context_value("base"), 1e-12);
    EXPECT_NEAR(*rep.rhs_lower, rep.rhs_upper, 1e-10);
}

TEST(Thm1, Seed4Instance) {
    DenseMatrix a = testutil::gaussian(8, 6, 4);
    OrthonormalBasis z = haar_basis(8, 2, 4);
    BasisPerturbation pert = perturb_basis(z, 0.3, 4);
    ASSERT_TRUE(pert.full_rank);
    BoundReport rep = check_basis_perturbation(a, z, pert.z_hat, kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_GE(rep.slack, -rep.tolerance);
    EXPECT_EQ(rep.bound_id, "thm1");
    EXPECT_EQ(rep.p, "2");
}

TEST(Thm1, HalfNormBoundaryCapsEpsZ) {
    DenseMatrix a = testutil::gaussian(7, 5, 5);
    OrthonormalBasis z = haar_basis(7, 2, 5);
    BasisPerturbation pert = perturb_basis(z, 0.5, 5);
    BoundReport rep = check_basis_perturbation(a, z, pert.z_hat, kPInf);
    EXPECT_TRUE(rep.holds);
    EXPECT_LE(rep.context_value("eps_z"), 1.0 + 1e-10);
    EXPECT_EQ(rep.context_value("sub_ok"), 1.0);
}

TEST(Thm1, RankDeficientPerturbationNamesHypothesis) {
    DenseMatrix a = testutil::gaussian(5, 4, 6);
    OrthonormalBasis z = haar_basis(5, 2, 6);
    DenseMatrix broken = z.matrix();
    for (int i = 0; i < 5; ++i) broken(i, 1) = broken(i, 0);  // collapse to rank 1
    try {
        check_basis_perturbation(a, z, broken, kP2);
        FAIL() << "expected hypothesis error";
    } catch (const HypothesisError& e) {
        EXPECT_EQ(e.hypothesis(), "rank(z_hat) = rank(z)");
    }
}

TEST(Thm1, SandwichHoldsAcrossPerturbationSizes) {
    // Validity probe over growing ||F||_2; no monotonicity asserted.
    DenseMatrix a = testutil::gaussian(8, 6, 7);
    OrthonormalBasis z = haar_basis(8, 2, 7);
    for (double mag : {0.0, 0.1, 0.2, 0.3}) {
        BasisPerturbation pert = perturb_basis(z, mag, 17);
        ASSERT_TRUE(pert.full_rank);
        for (SchattenIndex p : {kP1, kP2, kP4, kPInf}) {
            BoundReport rep = check_basis_perturbation(a, z, pert.z_hat, p);
            EXPECT_TRUE(rep.holds) << "magnitude " << mag << " p " << p.to_string();
        }
    }
}

// --- cor1 --------------------------------------------------------------------

TEST(Cor1, ExactBasisIsTight) {
    DenseMatrix a = testutil::gaussian(6, 5, 10);
    RankKApprox best = truncate(svd(a), 2);
    BoundReport rep = check_dominant_basis_perturbation(a, 2, best.basis.matrix(), kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.lhs, *rep.rhs_lower, 1e-10);
}

TEST(Cor1, PerturbedDominantBasisSeed10) {
    DenseMatrix a = testutil::gaussian(7, 5, 10);
    RankKApprox best = truncate(svd(a), 2);
    BasisPerturbation pert = perturb_basis(best.basis, 0.2, 10);
    BoundReport rep = check_dominant_basis_perturbation(a, 2, pert.z_hat, kPInf);
    EXPECT_TRUE(rep.holds);
    EXPECT_GE(rep.slack, -rep.tolerance);
}

TEST(Cor1, ExactlyRankKMatrixGivesZeroResiduals) {
    DenseMatrix a = testutil::random_rank_k(6, 5, 2, 11);
    RankKApprox best = truncate(svd(a), 2);
    BoundReport rep = check_dominant_basis_perturbation(a, 2, best.basis.matrix(), kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.lhs, 0.0, 1e-10);
    EXPECT_NEAR(rep.rhs_upper, 0.0, 1e-10);
}

// --- thm2 --------------------------------------------------------------------

TEST(Thm2, ZeroPerturbationIsEquality) {
    DenseMatrix a = testutil::gaussian(6, 4, 12);
    Projector p = projector_from_orthonormal(haar_basis(6, 2, 12));
    BoundReport rep = check_matrix_additive(a, DenseMatrix(6, 4), p, kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_EQ(rep.lhs, 0.0);
    EXPECT_EQ(rep.rhs_upper, 0.0);
}

TEST(Thm2, FullProjectorAnnihilates) {
    DenseMatrix a = testutil::gaussian(5, 4, 13);
    Projector p = projector_from_orthonormal(OrthonormalBasis(DenseMatrix::identity(5)));
    DenseMatrix e = perturbation_matrix(5, 4, 0.2, 13);
    BoundReport rep = check_matrix_additive(a, e, p, kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.lhs, 0.0, 1e-12);
}

TEST(Thm2, NuclearNormSeed6) {
    DenseMatrix a = testutil::gaussian(8, 6, 6);
    DenseMatrix e = perturbation_matrix(8, 6, 0.1, 6);
    Projector p = projector_from_orthonormal(haar_basis(8, 3, 6));
    BoundReport rep = check_matrix_additive(a, e, p, kP1);
    EXPECT_TRUE(rep.holds);
    EXPECT_GE(rep.slack, 0.0);
}

// --- cor2 --------------------------------------------------------------------

TEST(Cor2, ZeroPerturbationIsTight) {
    DenseMatrix a = testutil::gaussian(6, 5, 14);
    BoundReport rep = check_additive_svd_transfer(a, DenseMatrix(6, 5), 2);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.lhs, *rep.rhs_lower, 1e-10);
    EXPECT_NEAR(rep.context_value("weyl_margin"), 0.0, 1e-10);
}

TEST(Cor2, GappedSpectrumSeed12) {
    DenseMatrix a = matrix_with_spectrum(SpectrumSpec{6, 4, {3.0, 2.0, 0.5, 0.1}, 12});
    DenseMatrix e = perturbation_matrix(6, 4, 0.05, 12);
    BoundReport rep = check_additive_svd_transfer(a, e, 2);
    EXPECT_TRUE(rep.holds);
    EXPECT_EQ(rep.context_value("sub_ok"), 1.0);
}

TEST(Cor2, TailCancellationStillRespectsLowerBound) {
    DenseMatrix a = gapped_matrix(7, 5, 2, 4.0, 15);
    RankKApprox best = truncate(svd(a), 2);
    DenseMatrix e = best.a_k - a;  // E = -A_perp, so A + E = A_k
    BoundReport rep = check_additive_svd_transfer(a, e, 2);
    EXPECT_TRUE(rep.holds);
    // U_hat spans the dominant subspace, so the residual is exactly optimal.
    EXPECT_NEAR(rep.lhs, *rep.rhs_lower, 1e-9);
}

// --- thm3/4/5 ----------------------------------------------------------------

TEST(Thm345, IdenticalCompanionGivesZeroSides) {
    DenseMatrix a = testutil::gaussian(6, 5, 16);
    Projector p = projector_from_orthonormal(haar_basis(6, 2, 16));
    BoundReport rep = check_dimension_change(a, a, p, kP4);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.lhs, 0.0, 1e-12);
    EXPECT_NEAR(rep.rhs_upper, 0.0, 1e-10);
}

TEST(Thm345, ColumnSketchSeed14) {
    DenseMatrix a = testutil::gaussian(6, 6, 14);
    DenseMatrix sketch = column_sample_rescale(a, 8, 14);
    Projector p = projector_from_orthonormal(haar_basis(6, 3, 14));
    for (SchattenIndex q : {kP2, kP4, kPInf}) {
        BoundReport rep = check_dimension_change(a, sketch, p, q);
        EXPECT_TRUE(rep.holds) << q.to_string();
        EXPECT_EQ(rep.c, 8);
    }
}

TEST(Thm345, ZeroProjectorReducesToPlainNorms) {
    DenseMatrix a = testutil::gaussian(5, 6, 17);
    DenseMatrix sketch = column_sample_rescale(a, 4, 17);
    BoundReport rep = check_dimension_change(a, sketch, Projector::zero(5), kPInf);
    EXPECT_TRUE(rep.holds);
    const double na = two_norm(a);
    const double nt = two_norm(sketch);
    EXPECT_NEAR(rep.lhs, std::abs(na * na - nt * nt), 1e-10);
    const DenseMatrix gram_diff = a * transpose(a) - sketch * transpose(sketch);
    EXPECT_NEAR(rep.rhs_upper, two_norm(gram_diff), 1e-10);
}

TEST(Thm345, OddPRejected) {
    DenseMatrix a = testutil::gaussian(5, 4, 18);
    Projector p = projector_from_orthonormal(haar_basis(5, 2, 18));
    try {
        check_dimension_change(a, a, p, SchattenIndex::integer(3));
        FAIL() << "expected hypothesis error";
    } catch (const HypothesisError& e) {
        EXPECT_EQ(e.hypothesis(), "p even required");
    }
}

// --- thm_lc ------------------------------------------------------------------

TEST(ThmLc, SquareFullRankCompanionGivesZeroLhs) {
    DenseMatrix a = testutil::gaussian(5, 5, 19);
    BoundReport rep = check_error_matrix(a, a, kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.lhs, 0.0, 1e-12);
}

TEST(ThmLc, DominantFactorCompanion) {
    // C = U_k Sigma_k spans range(A_k), so the residual is the optimal tail.
    DenseMatrix a = gapped_matrix(6, 5, 2, 3.0, 20);
    RankKApprox best = truncate(svd(a), 2);
    DenseMatrix c = best.basis.matrix();
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 6; ++i) c(i, j) *= best.sigmas[j];
    for (SchattenIndex q : {kP2, kP4, kPInf}) {
        BoundReport rep = check_error_matrix(a, c, q);
        EXPECT_TRUE(rep.holds) << q.to_string();
        const double tail = schatten_norm(a - best.a_k, q);
        EXPECT_NEAR(rep.lhs, tail * tail, 1e-9);
    }
}

TEST(ThmLc, ColumnSketchSeed15TwoNorm) {
    DenseMatrix a = testutil::gaussian(6, 8, 15);
    DenseMatrix sketch = column_sample_rescale(a, 3, 15);
    ASSERT_EQ(numerical_rank(sketch), 3);
    BoundReport rep = check_error_matrix(a, sketch, kPInf);
    EXPECT_TRUE(rep.holds);
}

TEST(ThmLc, RankDeficientCompanionNamesHypothesis) {
    DenseMatrix a = testutil::gaussian(5, 4, 21);
    DenseMatrix c = testutil::random_rank_k(5, 3, 2, 21);
    try {
        check_error_matrix(a, c, kP2);
        FAIL() << "expected hypothesis error";
    } catch (const HypothesisError& e) {
        EXPECT_EQ(e.hypothesis(), "rank(C) = c");
    }
}

// --- thm_lck -----------------------------------------------------------------

TEST(ThmLck, IdenticalCompanionIsEquality) {
    DenseMatrix a = testutil::gaussian(5, 5, 22);
    BoundReport rep = check_error_matrix_rank_k(a, a, 2, kP2);
    EXPECT_TRUE(rep.holds);
    const double tail = rep.context_value("tail_norm_p");
    EXPECT_NEAR(rep.lhs, tail * tail, 1e-9);
    EXPECT_NEAR(rep.rhs_upper, tail * tail, 1e-9);
}

TEST(ThmLck, ColumnSketchSeed16Frobenius) {
    DenseMatrix a = testutil::gaussian(6, 8, 16);
    DenseMatrix sketch = column_sample_rescale(a, 2, 16);
    ASSERT_EQ(numerical_rank(sketch), 2);
    BoundReport rep = check_error_matrix_rank_k(a, sketch, 2, kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_EQ(rep.context_value("sub_ok"), 1.0);
}

TEST(ThmLck, MirskyDiagonalEqualityCase) {
    DenseMatrix a = DenseMatrix::diagonal(2, 2, {4.0, 1.0});
    DenseMatrix c = DenseMatrix::diagonal(2, 2, {3.0, 2.0});
    BoundReport rep = check_error_matrix_rank_k(a, c, 1, kP2);
    EXPECT_TRUE(rep.holds);
    // |16-9| + |1-4| = 10 meets the nuclear norm of diag(7,-3) exactly.
    EXPECT_NEAR(rep.context_value("mirsky_margin_1"), 0.0, 1e-12);
}

// --- thm_lau -----------------------------------------------------------------

TEST(ThmLau, DominantProjectorGivesZeroBound) {
    DenseMatrix a = gapped_matrix(7, 5, 2, 3.0, 23);
    Projector p = projector_from_orthonormal(truncate(svd(a), 2).basis);
    BoundReport rep = check_angle_lower(a, 2, p, kPInf);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.lhs, 0.0, 1e-10);
}

TEST(ThmLau, FlatRankKSpectrumIsTight) {
    DenseMatrix a = matrix_with_spectrum(SpectrumSpec{8, 6, {2.0, 2.0, 0.0, 0.0, 0.0, 0.0}, 24});
    Projector p = projector_from_orthonormal(haar_basis(8, 3, 24));
    for (SchattenIndex q : {kP2, kPInf}) {
        BoundReport rep = check_angle_lower(a, 2, p, q);
        EXPECT_TRUE(rep.holds);
        EXPECT_LE(std::abs(rep.slack), 1e-8 * two_norm(a));
    }
}

TEST(ThmLau, GappedSpectrumSeed18) {
    DenseMatrix a = matrix_with_spectrum(SpectrumSpec{8, 6, {4.0, 3.0, 1.0, 0.5, 0.4, 0.3}, 18});
    Projector p = projector_from_orthonormal(haar_basis(8, 3, 18));
    BoundReport rep = check_angle_lower(a, 2, p, kP2);
    EXPECT_TRUE(rep.holds);
}

TEST(ThmLau, MissingGapNamesHypothesis) {
    DenseMatrix a = matrix_with_spectrum(SpectrumSpec{6, 4, {1.0, 1.0, 1.0, 1.0}, 25});
    Projector p = projector_from_orthonormal(haar_basis(6, 3, 25));
    try {
        check_angle_lower(a, 2, p, kP2);
        FAIL() << "expected hypothesis error";
    } catch (const HypothesisError& e) {
        EXPECT_EQ(e.hypothesis(), "singular value gap at k");
    }
}

TEST(ThmLau, UnsupportedNormRejected) {
    DenseMatrix a = gapped_matrix(6, 4, 2, 3.0, 26);
    Projector p = projector_from_orthonormal(haar_basis(6, 2, 26));
    EXPECT_THROW(check_angle_lower(a, 2, p, kP1), HypothesisError);
}

// --- thm_lal1 / thm_lal2 -----------------------------------------------------

TEST(ThmLal, ExactRangeIsTight) {
    DenseMatrix a = gapped_matrix(8, 6, 2, 3.0, 27);
    RankKApprox best = truncate(svd(a), 2);
    // Same range as U_k, different basis.
    OrthonormalBasis rotated = orthonormalize(best.basis.matrix() * haar_basis(2, 2, 27).matrix());
    Projector p = projector_from_orthonormal(rotated);
    for (SchattenIndex q : {kPInf, kP2}) {
        BoundReport rep = check_angle_upper(a, 2, p, q);
        EXPECT_TRUE(rep.holds);
        EXPECT_LE(std::abs(rep.slack), 1e-8 * detail::bound_scale(a));
        const double tail = schatten_norm(a - best.a_k, q);
        EXPECT_NEAR(rep.lhs, tail, 1e-9);
    }
}

TEST(ThmLal, RankKMatrixDropsTailTerm) {
    DenseMatrix a = matrix_with_spectrum(SpectrumSpec{8, 5, {2.0, 1.5, 0.0, 0.0, 0.0}, 28});
    Projector p = projector_from_orthonormal(haar_basis(8, 3, 28));
    BoundReport rep = check_angle_upper(a, 2, p, kPInf);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.context_value("tail_two"), 0.0, 1e-11);
    EXPECT_NEAR(rep.rhs_upper, two_norm(a) * rep.context_value("sin_norm_two"), 1e-9);
}

TEST(ThmLal, Seed19BothNormsAndSimplifiedBound) {
    DenseMatrix a = matrix_with_spectrum(
        SpectrumSpec{9, 6, {4.0, 3.0, 1.0, 0.5, 0.4, 0.3}, 19});
    Projector p = projector_from_orthonormal(haar_basis(9, 3, 19));
    BoundReport two = check_angle_upper(a, 2, p, kPInf);
    EXPECT_TRUE(two.holds);
    EXPECT_EQ(two.bound_id, "thm_lal1");
    EXPECT_EQ(two.context_value("sub_ok"), 1.0);
    EXPECT_LE(two.context_value("gamma_two_unit_gap"), 1e-10);

    BoundReport fro = check_angle_upper(a, 2, p, kP2);
    EXPECT_TRUE(fro.holds);
    EXPECT_EQ(fro.bound_id, "thm_lal2");
    EXPECT_EQ(fro.context_value("sub_ok"), 1.0);
    EXPECT_EQ(fro.context_value("two_norm_reading_holds"), 1.0);
}

// --- thm6 --------------------------------------------------------------------

TEST(Thm6, DominantProjectorIsTightAbove) {
    DenseMatrix a = gapped_matrix(8, 6, 2, 3.0, 29);
    Projector p = projector_from_orthonormal(truncate(svd(a), 2).basis);
    BoundReport rep = check_combined_theorem6(a, 2, p, kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(*rep.rhs_lower, 0.0, 1e-10);
    EXPECT_NEAR(rep.rhs_upper, rep.lhs, 1e-8);
}

TEST(Thm6, FlatRankKSpectrumIsTightBothSides) {
    DenseMatrix a = matrix_with_spectrum(SpectrumSpec{9, 7, {3.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 30});
    Projector p = projector_from_orthonormal(haar_basis(9, 3, 30));
    for (SchattenIndex q : {kP1, kP2, kP4, kPInf}) {
        BoundReport rep = check_combined_theorem6(a, 2, p, q);
        EXPECT_TRUE(rep.holds) << q.to_string();
        EXPECT_LE(std::abs(rep.lhs - *rep.rhs_lower), 1e-8 * two_norm(a));
        EXPECT_LE(std::abs(rep.rhs_upper - rep.lhs), 1e-8 * two_norm(a));
    }
}

TEST(Thm6, GenericInstanceSeed20HasPositiveSlack) {
    DenseMatrix a = matrix_with_spectrum(SpectrumSpec{8, 6, {4.0, 3.0, 1.0, 0.5, 0.4, 0.3}, 20});
    Projector p = projector_from_orthonormal(haar_basis(8, 3, 20));
    BoundReport rep = check_combined_theorem6(a, 2, p, kP2);
    EXPECT_TRUE(rep.holds);
    EXPECT_GT(rep.slack, 1e-6);
    EXPECT_EQ(rep.context_value("proven_two_fro"), 1.0);
}

TEST(Thm6, RankWindowViolationNamesRange) {
    DenseMatrix a = gapped_matrix(8, 6, 2, 3.0, 31);
    Projector p = projector_from_orthonormal(haar_basis(8, 6, 31));  // rank(P) = 6 = m-k
    try {
        check_combined_theorem6(a, 2, p, kP2);
        FAIL() << "expected hypothesis error";
    } catch (const HypothesisError& e) {
        EXPECT_EQ(e.hypothesis(), "k <= rank(P) < m-k");
    }
}

// --- report serialization -----------------------------------------------------

TEST(Report, CsvRowRoundTripsThroughParser) {
    DenseMatrix a = testutil::gaussian(6, 4, 32);
    OrthonormalBasis z = haar_basis(6, 2, 32);
    BasisPerturbation pert = perturb_basis(z, 0.2, 32);
    BoundReport rep = check_basis_perturbation(a, z, pert.z_hat, kP4);
    rep.seed = 99;

    const std::string row = report_to_csv_row(rep);
    const std::vector<std::string> cells = parse_csv_row(row);
    ASSERT_EQ(cells.size(), 14u);
    EXPECT_EQ(cells[0], "thm1");
    EXPECT_EQ(cells[1], "6");
    EXPECT_EQ(cells[5], "4");
    EXPECT_EQ(cells[6], "99");
    EXPECT_EQ(parse_double(cells[7]), rep.lhs);
    EXPECT_EQ(parse_double(cells[8]), *rep.rhs_lower);
    EXPECT_EQ(cells[12], "true");
    // context_json survives CSV quoting
    nlohmann::json ctx = nlohmann::json::parse(cells[13]);
    EXPECT_EQ(ctx["eps_z"].get<double>(), rep.context_value("eps_z"));
}

TEST(Report, RegistryListsElevenCheckers) {
    EXPECT_EQ(checker_registry().size(), 11u);
    EXPECT_TRUE(is_known_checker("thm3/4/5"));
    EXPECT_FALSE(is_known_checker("thm99"));
}
