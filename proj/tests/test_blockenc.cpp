#include "loctest/blockenc.hpp"
#include "loctest/random.hpp"

#include <gtest/gtest.h>

using namespace loctest;

namespace {

Matrix rotation(double angle) {
    Matrix r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

void expect_unitary(const BlockEncoding &be) { EXPECT_LT(unitarity_defect(be.unitary), 1e-12); }

} // namespace

TEST(VerifyBlockEncoding, ExactAndPerturbed) {
    Rng rng = stream_rng(101);
    Matrix a = haar_unitary(2, rng);
    EXPECT_NEAR(verify_block_encoding(a, a, 1.0, 0), 0.0, 1e-15);
    const double eps = verify_block_encoding(Matrix(a * rotation(1e-3)), a, 1.0, 0);
    EXPECT_GT(eps, 0.0);
    EXPECT_LT(eps, 3e-3);
    EXPECT_THROW(verify_block_encoding(Matrix::Identity(4, 4), a, 1.0, 0), std::invalid_argument);
}

TEST(LcuCombine, SingleTermIsUnchanged) {
    Rng rng = stream_rng(102);
    Matrix u = haar_unitary(4, rng);
    Vector one = Vector::Ones(1);
    BlockEncoding be = lcu_combine(make_state_prep_pair(one, one, 1.0), {trivial_encoding(u)});
    EXPECT_LT(max_abs(be.unitary - u), 1e-14);
    EXPECT_EQ(be.ancillas, 0u);
}

TEST(LcuCombine, ReflectionPairEncodesDifference) {
    Rng rng = stream_rng(103);
    Vector psi = haar_state(2, rng);
    Matrix r = reflection_about(psi);
    Vector c(2), d(2);
    c << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    d << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    BlockEncoding be = lcu_combine(make_state_prep_pair(c, d, 2.0), {trivial_encoding(Matrix::Identity(2, 2)), trivial_encoding(r)});
    EXPECT_DOUBLE_EQ(be.alpha, 2.0);
    EXPECT_EQ(be.ancillas, 1u);
    EXPECT_LT(verify_block_encoding(be, Matrix(Matrix::Identity(2, 2) - r)), 1e-12);
    EXPECT_LT(verify_block_encoding(be, Matrix(2.0 * psi * psi.adjoint())), 1e-12);
    expect_unitary(be);
}

TEST(LcuCombine, LinearInCoefficients) {
    Rng rng = stream_rng(104);
    std::vector<BlockEncoding> encs;
    std::vector<Matrix> us;
    for (int j = 0; j < 3; ++j) {
        us.push_back(haar_unitary(2, rng));
        encs.push_back(trivial_encoding(us.back()));
    }
    for (int trial = 0; trial < 5; ++trial) {
        Vector c = haar_state(3, rng), d = haar_state(3, rng);
        auto pair = make_state_prep_pair(c, d, 1.0);
        BlockEncoding be = lcu_combine(pair, encs);
        Matrix target = Matrix::Zero(2, 2);
        for (int j = 0; j < 3; ++j) target += pair.y(j) * us[static_cast<std::size_t>(j)];
        EXPECT_LT(verify_block_encoding(be, target), 1e-12);
        EXPECT_EQ(be.ancillas, 2u);
        expect_unitary(be);
    }
    EXPECT_THROW(lcu_combine(make_state_prep_pair(Vector::Ones(1), Vector::Ones(1), 1.0), encs), std::invalid_argument);
}

TEST(DownScale, HalvesIdentityAndScalesError) {
    BlockEncoding id = trivial_encoding(Matrix::Identity(2, 2));
    BlockEncoding half = down_scale(id, 2.0);
    EXPECT_LT(verify_block_encoding(half.unitary, Matrix(Matrix::Identity(2, 2) / 2.0), 1.0, 1), 1e-15);
    expect_unitary(half);

    Rng rng = stream_rng(105);
    Matrix a = haar_unitary(2, rng);
    BlockEncoding pert{Matrix(a * rotation(1e-3)), 1.0, 0, 0.0, 2};
    pert.error = verify_block_encoding(pert, a);
    BlockEncoding scaled = down_scale(pert, 2.0);
    EXPECT_NEAR(verify_block_encoding(scaled, Matrix(a / 2.0)), pert.error / 2.0, 1e-15);
    EXPECT_NEAR(scaled.error, pert.error / 2.0, 1e-15);

    BlockEncoding near = down_scale(trivial_encoding(a), 1.0 + 1e-12);
    EXPECT_LT(max_abs(near.top_left() - a), 1e-5);
    EXPECT_THROW(down_scale(id, 1.0), std::invalid_argument);
}

TEST(ReflectionToProjector, ReadoutAndResiduals) {
    Vector zero = Vector::Unit(2, 0);
    BlockEncoding be = reflection_to_projector(reflection_about(zero));
    EXPECT_LT(max_abs(be.top_left() - Matrix(zero * zero.adjoint() / 2.0)), 1e-14);
    EXPECT_DOUBLE_EQ(be.alpha, 2.0);
    EXPECT_EQ(be.ancillas, 2u);
    expect_unitary(be);
    Vector bell = max_entangled(2) / std::sqrt(2.0);
    EXPECT_LT(verify_block_encoding(reflection_to_projector(reflection_about(bell)), Matrix(bell * bell.adjoint())), 1e-12);
    EXPECT_THROW(reflection_to_projector(Matrix::Identity(2, 2)), std::invalid_argument);
    EXPECT_THROW(reflection_to_projector(-Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST(ProjectorToReflection, PreAmplificationEncoding) {
    Vector zero = Vector::Unit(2, 0);
    BlockEncoding be = projector_to_reflection_pre_aa(reflection_to_projector(reflection_about(zero)));
    Matrix r = reflection_about(zero);
    EXPECT_LT(max_abs(be.top_left() - r / 5.0), 1e-14);
    EXPECT_DOUBLE_EQ(be.alpha, 5.0);
    EXPECT_EQ(be.ancillas, 3u);
    EXPECT_LT(verify_block_encoding(be, r), 1e-12);
    EXPECT_LT(max_abs(5.0 * be.top_left() - r), 1e-10);
    expect_unitary(be);

    Rng rng = stream_rng(106);
    for (int i = 0; i < 5; ++i) {
        Vector psi = haar_state(4, rng);
        BlockEncoding p = reflection_to_projector(reflection_about(psi));
        EXPECT_LT(verify_block_encoding(projector_to_reflection_pre_aa(p), reflection_about(psi)), 1e-12);
    }
    BlockEncoding inexact = reflection_to_projector(reflection_about(zero));
    inexact.error = 1e-3;
    EXPECT_THROW(projector_to_reflection_pre_aa(inexact), std::invalid_argument);
}
