#include "loctest/random.hpp"
#include "loctest/twirl.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace loctest;

TEST(HaarTwirl, FixedPoints) {
    EXPECT_LT(max_abs(haar_twirl(Matrix::Identity(8, 8), 3, 2) - Matrix::Identity(8, 8)), 1e-12);
    for (const auto &p : Permutation::all(3)) {
        Matrix pm = perm_action(p, 2);
        EXPECT_LT(max_abs(haar_twirl(pm, 3, 2) - pm), 1e-12);
    }
}

TEST(HaarTwirl, ProductProjectorGivesSymmetricProjector) {
    Vector k = Vector::Unit(4, 0);
    Matrix sym = 0.5 * (Matrix::Identity(4, 4) + perm_action(Permutation{1, 0}, 2));
    EXPECT_LT(max_abs(haar_twirl(Matrix(k * k.adjoint()), 2, 2) - sym / 3.0), 1e-12);
}

TEST(HaarTwirl, MatchesWeingartenAndCommutant) {
    Rng rng = stream_rng(41);
    for (std::size_t d : {2, 3}) {
        Matrix x = ginibre(static_cast<Index>(d * d), static_cast<Index>(d * d), rng);
        EXPECT_LT(max_abs(haar_twirl(x, 2, d) - oracle::weingarten_twirl_two_copies(x, d)), 1e-12);
    }
    for (std::size_t n = 1; n <= 3; ++n) {
        Matrix x = random_hermitian(static_cast<Index>(ipow(2, n)), rng);
        EXPECT_LT(max_abs(haar_twirl(x, n, 2) - commutant_projection_twirl(x, n, 2)), 1e-10);
    }
}

TEST(HaarTwirl, StructuralProperties) {
    Rng rng = stream_rng(42);
    Matrix rho = random_density(8, rng);
    Matrix t = haar_twirl(rho, 3, 2);
    EXPECT_LT(max_abs(haar_twirl(t, 3, 2) - t), 1e-12);
    EXPECT_NEAR(t.trace().real(), 1.0, 1e-12);
    EXPECT_LT(hermiticity_defect(t), 1e-12);
    EXPECT_GT(hermitian_eigenvalues(t).minCoeff(), -1e-12);
    Matrix u = haar_unitary(2, rng);
    EXPECT_LT(max_abs(twirl_commutator_defect(t, 3, u)), 1e-12);
}

TEST(HaarTwirl, CrossIsotypicAveragesVanish) {
    auto b = build_schur_basis(3, 2);
    const auto &b0 = b->block(YoungDiagram{3});
    const auto &b1 = b->block(YoungDiagram{2, 1});
    Rng rng = stream_rng(43);
    Matrix y = Matrix::Zero(8, 8);
    y.block(b0.offset, b1.offset, b0.size(), b1.size()) = ginibre(b0.size(), b1.size(), rng);
    Matrix x = b->from_schur(y);
    EXPECT_LT(max_abs(haar_twirl(x, 3, 2)), 1e-12);
}

TEST(StabilizerTwirl, KnownOutputs) {
    Matrix z = Matrix::Zero(3, 3);
    z(0, 0) = 1.0;
    EXPECT_LT(max_abs(stabilizer_twirl(z, 1, 3) - z), 1e-14);
    Matrix one = Matrix::Zero(3, 3);
    one(1, 1) = 1.0;
    Matrix expected = Matrix::Zero(3, 3);
    expected(1, 1) = expected(2, 2) = 0.5;
    EXPECT_LT(max_abs(stabilizer_twirl(one, 1, 3) - expected), 1e-14);
    Matrix off = Matrix::Zero(3, 3);
    off(0, 1) = 1.0;
    EXPECT_LT(max_abs(stabilizer_twirl(off, 1, 3)), 1e-14);
}

TEST(StabilizerTwirl, MatchesMonteCarlo) {
    Rng rng = stream_rng(44);
    Matrix x = random_hermitian(9, rng);
    TwirlSpec spec;
    spec.group = TwirlGroup::StabilizerOfZero;
    spec.targets = {0, 1};
    spec.local_dim = 3;
    auto est = monte_carlo_twirl(Operator(x, SystemLayout::uniform(2, 3)), spec, 20000, 45);
    EXPECT_LE((est.mean - stabilizer_twirl(x, 2, 3)).norm(), 4.0 * est.frobenius_sigma);
}

TEST(CommutantTwirl, FixedPointsAndCrossCheck) {
    EXPECT_LT(max_abs(commutant_projection_twirl(Matrix::Identity(4, 4), 2, 2) - Matrix::Identity(4, 4)), 1e-12);
    Matrix swap = perm_action(Permutation{1, 0}, 2);
    EXPECT_LT(max_abs(commutant_projection_twirl(swap, 2, 2) - swap), 1e-12);
    Rng rng = stream_rng(46);
    Matrix x = random_hermitian(4, rng);
    EXPECT_LT(max_abs(commutant_projection_twirl(x, 2, 2) - haar_twirl(x, 2, 2)), 1e-8);
}

TEST(MonteCarloTwirl, ForcedIdentityAndDeterminism) {
    Rng rng = stream_rng(47);
    Matrix x = random_hermitian(4, rng);
    TwirlSpec spec;
    spec.targets = {0, 1};
    spec.force_identity = true;
    auto one = monte_carlo_twirl(Operator(x, SystemLayout::uniform(2, 2)), spec, 1, 3);
    EXPECT_LT(max_abs(one.mean - x), 1e-15);

    spec.force_identity = false;
    auto a = monte_carlo_twirl(Operator(x, SystemLayout::uniform(2, 2)), spec, 500, 99);
    auto b = monte_carlo_twirl(Operator(x, SystemLayout::uniform(2, 2)), spec, 500, 99);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_THROW(monte_carlo_twirl(Operator(x, SystemLayout::uniform(2, 2)), spec, 0, 1), std::invalid_argument);
}

TEST(MonteCarloTwirl, CentralLimitScaling) {
    Rng rng = stream_rng(48);
    Matrix x = ginibre(4, 4, rng);
    x /= x.norm();
    TwirlSpec spec;
    spec.targets = {0, 1};
    const std::size_t shots = 100000;
    auto est = monte_carlo_twirl(Operator(x, SystemLayout::uniform(2, 2)), spec, shots, 5);
    const double err = (est.mean - haar_twirl(x, 2, 2)).norm();
    EXPECT_LE(err, 5.0 / std::sqrt(static_cast<double>(shots)));
    EXPECT_LE(err, 4.0 * est.frobenius_sigma);
}
