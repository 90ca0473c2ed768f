#include "loctest/hardness.hpp"
#include "loctest/properties.hpp"
#include "loctest/random.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace loctest;

namespace {

Vector bell() { return max_entangled(2) / std::sqrt(2.0); }

// Random state of Schmidt rank at most r on C^d (x) C^d.
Vector random_rank_r(std::size_t d, std::size_t r, Rng &rng) {
    Matrix m = ginibre(static_cast<Index>(d), static_cast<Index>(r), rng) * ginibre(static_cast<Index>(r), static_cast<Index>(d), rng);
    Vector v = vectorize(m);
    return v / v.norm();
}

} // namespace

TEST(Schmidt, KnownDecompositions) {
    auto prod = schmidt_decompose(Vector::Unit(4, 0), 2, 2);
    EXPECT_NEAR(prod.coefficients()(0), 1.0, 1e-15);
    EXPECT_NEAR(prod.coefficients()(1), 0.0, 1e-15);
    auto b = schmidt_decompose(bell(), 2, 2);
    EXPECT_NEAR(b.coefficients()(0), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(b.coefficients()(1), 1 / std::sqrt(2.0), 1e-15);
    auto inst = hard_instance(2, 3, 6, 0.2);
    const auto &c = inst.psi.coefficients();
    EXPECT_NEAR(c(0), std::sqrt(1 - inst.theta), 1e-14);
    EXPECT_NEAR(c(1), std::sqrt(inst.theta / 2), 1e-14);
    EXPECT_NEAR(c(2), std::sqrt(inst.theta / 2), 1e-14);
    EXPECT_NEAR(c(3), 0.0, 1e-14);
    EXPECT_THROW(schmidt_decompose(Vector::Ones(4), 2, 2), std::invalid_argument);
}

TEST(Schmidt, ReconstructsRectangularStates) {
    Rng rng = stream_rng(81);
    Vector psi = haar_state(6, rng);
    auto s = schmidt_decompose(psi, 2, 3);
    Matrix rec = s.basis_a() * s.coefficients().cast<cplx>().asDiagonal() * s.basis_b().transpose();
    EXPECT_LT(max_abs(vectorize(rec) - psi), 1e-13);
    EXPECT_NEAR(s.coefficients().squaredNorm(), 1.0, 1e-13);
}

TEST(EckartYoung, KnownOverlaps) {
    auto b = schmidt_decompose(bell(), 2, 2);
    EXPECT_NEAR(eckart_young_overlap(b, 1), 0.5, 1e-15);
    EXPECT_NEAR(eckart_young_overlap(b, 2), 1.0, 1e-15);
    EXPECT_NEAR(distance_to_schmidt_rank(b, 2), 0.0, 1e-7);
    EXPECT_NEAR(distance_to_schmidt_rank(b, 1), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(eckart_young_overlap(b, 3), std::invalid_argument);
}

TEST(EckartYoung, MatchesSubspaceIterationOracle) {
    Rng rng = stream_rng(82);
    for (int i = 0; i < 5; ++i) {
        Vector psi = haar_state(16, rng);
        auto s = schmidt_decompose(psi, 4, 4);
        Matrix m = devectorize(psi, 4, 4);
        for (std::size_t r = 1; r <= 3; ++r) EXPECT_NEAR(eckart_young_overlap(s, r), oracle::rank_r_overlap(m, r), 1e-6);
    }
}

TEST(EckartYoung, NoRankRStateBeatsTheOptimum) {
    Rng rng = stream_rng(83);
    Vector psi = haar_state(9, rng);
    auto s = schmidt_decompose(psi, 3, 3);
    for (int i = 0; i < 200; ++i) EXPECT_LE(std::norm(random_rank_r(3, 2, rng).dot(psi)), eckart_young_overlap(s, 2) + 1e-12);
}

TEST(EckartYoung, HardInstanceFarness) {
    for (std::size_t n : {2, 4, 8})
        for (auto [r, d] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 4}, {2, 5}, {3, 6}}) {
            const double eps = 0.1;
            auto inst = hard_instance(n, r, d, eps);
            const double ov = eckart_young_overlap(inst.phi, r);
            EXPECT_NEAR(ov, 1 - inst.theta + static_cast<double>(r - 1) / static_cast<double>(d - 1) * inst.theta, 1e-14);
            EXPECT_LE(ov, 1 - inst.theta / 2 + 1e-15);
            EXPECT_GE(std::sqrt(1 - std::pow(ov, static_cast<double>(n) / 2)), eps);
        }
}

TEST(Renyi, KnownValuesAndContinuity) {
    auto prod = schmidt_decompose(Vector::Unit(9, 0), 3, 3);
    auto maxent = schmidt_decompose(Vector(max_entangled(3) / std::sqrt(3.0)), 3, 3);
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
        EXPECT_NEAR(renyi_entanglement_entropy(prod, a), 0.0, 1e-12);
        EXPECT_NEAR(renyi_entanglement_entropy(maxent, a), std::log(3.0), 1e-12);
    }
    Rng rng = stream_rng(84);
    auto s = schmidt_decompose(haar_state(9, rng), 3, 3);
    const double vn = renyi_entanglement_entropy(s, 1.0);
    EXPECT_LE(std::abs(renyi_entanglement_entropy(s, 1 + 1e-6) - vn), 1e-4);
    EXPECT_LE(std::abs(renyi_entanglement_entropy(s, 1 - 1e-6) - vn), 1e-4);
    EXPECT_THROW(renyi_entanglement_entropy(s, 0.0), std::invalid_argument);
}

TEST(WeakSchur, KnownDistributions) {
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    auto pure = weak_schur_distribution(p0, 3);
    EXPECT_NEAR(pure.at({3}), 1.0, 1e-12);
    EXPECT_NEAR(pure.at({2, 1}), 0.0, 1e-12);
    auto mixed = weak_schur_distribution(Matrix(Matrix::Identity(2, 2) / 2.0), 2);
    EXPECT_NEAR(mixed.at({2}), 0.75, 1e-12);
    EXPECT_NEAR(mixed.at({1, 1}), 0.25, 1e-12);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 0.36;
    d(1, 1) = 0.64;
    auto dd = weak_schur_distribution(d, 2);
    EXPECT_NEAR(dd.at({2}), 0.7696, 1e-12);
    EXPECT_NEAR(dd.at({1, 1}), 0.2304, 1e-12);
    EXPECT_EQ(dd.to_csv().substr(0, 19), "lambda,probability\n");
}

TEST(WeakSchur, MatchesSchurPolynomialOracle) {
    Rng rng = stream_rng(85);
    for (std::size_t d : {2, 3})
        for (std::size_t n = 1; n <= 3; ++n) {
            RealVector spec = random_probability_vector(static_cast<Index>(d), rng);
            std::vector<double> x(spec.data(), spec.data() + spec.size());
            auto dist = weak_schur_distribution(oracle::with_spectrum(x, haar_unitary(static_cast<Index>(d), rng)), n);
            for (const auto &[l, p] : dist.entries())
                EXPECT_NEAR(p, static_cast<double>(dim_sym_irrep(l)) * oracle::schur_polynomial(l.rows(), x), 1e-9);
        }
}

TEST(WeakSchur, AgreesWithPurePowerWeights) {
    Rng rng = stream_rng(86);
    Vector psi = haar_state(4, rng);
    auto comp = pure_power_components(psi, 3);
    Matrix red = partial_trace(Matrix(psi * psi.adjoint()), {2, 2}, {0});
    auto dist = weak_schur_distribution(red, 3);
    for (const auto &[l, p] : dist.entries()) EXPECT_NEAR(comp.weight(l), p, 1e-9);
}

TEST(BondDimension, Profiles) {
    EXPECT_EQ(bond_dimension_profile(Vector::Unit(8, 0), {2, 2, 2}), (std::vector<std::size_t>{1, 1}));
    Vector ghz = Vector::Zero(8);
    ghz(0) = ghz(7) = 1 / std::sqrt(2.0);
    EXPECT_EQ(bond_dimension_profile(ghz, {2, 2, 2}), (std::vector<std::size_t>{2, 2}));
    Vector w = Vector::Zero(8);
    w(1) = w(2) = w(4) = 1 / std::sqrt(3.0);
    EXPECT_EQ(bond_dimension_profile(w, {2, 2, 2}), (std::vector<std::size_t>{2, 2}));
    EXPECT_THROW(bond_dimension_profile(w, {2, 2}), std::invalid_argument);
}

TEST(PadState, ProfilesAndOverlaps) {
    auto b = schmidt_decompose(bell(), 2, 2);
    EXPECT_EQ(pad_state(b, 2).amplitudes(), bell());
    EXPECT_EQ(bond_dimension_profile(pad_state(b, 4).amplitudes(), {2, 2, 2, 2}), (std::vector<std::size_t>{2, 1, 1}));
    Rng rng = stream_rng(87);
    auto phi = schmidt_decompose(haar_state(9, rng), 3, 3);
    for (int i = 0; i < 5; ++i) {
        auto g = schmidt_decompose(random_rank_r(3, 2, rng), 3, 3);
        const cplx direct = g.amplitudes().dot(phi.amplitudes());
        const cplx padded = pad_state(g, 4).amplitudes().dot(pad_state(phi, 4).amplitudes());
        EXPECT_LT(std::abs(direct - padded), 1e-14);
    }
    EXPECT_THROW(pad_state(b, 1), std::invalid_argument);
}
