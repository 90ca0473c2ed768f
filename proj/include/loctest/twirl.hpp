#pragma once

#include "schur.hpp"

#include <bit>

namespace loctest {

// Haar twirl of the middle factor (C^d)^{(x)N} of C^l (x) (C^d)^{(x)N} (x) C^r.
inline Matrix haar_twirl_middle(const Matrix &x, const SchurBasis &basis, Index l, Index r) {
    const Index n = basis.dim();
    if (x.rows() != l * n * r || x.cols() != x.rows()) throw std::invalid_argument("haar_twirl: shape does not match layout");
    Matrix y = conjugate_middle(x, basis.matrix(), l, r);
    Matrix z = Matrix::Zero(y.rows(), y.cols());
    auto row = [&](Index a, Index k, Index b) { return (a * n + k) * r + b; };
    for (const auto &blk : basis.blocks()) {
        const double inv = 1.0 / static_cast<double>(blk.dim_w);
        for (Index a = 0; a < l; ++a)
            for (Index b = 0; b < r; ++b)
                for (Index a2 = 0; a2 < l; ++a2)
                    for (Index b2 = 0; b2 < r; ++b2)
                        for (Index v = 0; v < blk.dim_v; ++v)
                            for (Index v2 = 0; v2 < blk.dim_v; ++v2) {
                                cplx t = 0.0;
                                for (Index u = 0; u < blk.dim_w; ++u)
                                    t += y(row(a, blk.column(v, u), b), row(a2, blk.column(v2, u), b2));
                                t *= inv;
                                for (Index w = 0; w < blk.dim_w; ++w)
                                    z(row(a, blk.column(v, w), b), row(a2, blk.column(v2, w), b2)) = t;
                            }
    }
    Matrix out = left_mul_middle(basis.matrix(), z, l, r);
    return right_mul_middle(out, basis.matrix().adjoint(), l, r);
}

inline Matrix haar_twirl(const Matrix &x, std::size_t n, std::size_t d) {
    return haar_twirl_middle(x, *build_schur_basis(n, d), 1, 1);
}

inline Operator haar_twirl(const Operator &x, std::size_t n, std::size_t d) {
    return Operator(haar_twirl(x.matrix(), n, d), x.layout());
}

// Twirl of the B copies of an operator on A1 B1 ... AN BN.
inline Matrix haar_twirl_b(const Matrix &t, std::size_t n, std::size_t d) {
    auto basis = build_bipartite_basis(n, d);
    Matrix y = basis->reorder_to_sides(t);
    y = haar_twirl_middle(y, basis->side(), basis->side_dim(), 1);
    return basis->reorder_to_copies(y);
}

// Flat indices of (C^d)^{(x)N} whose nonzero digits sit exactly at the positions in mask.
inline std::vector<Index> stabilizer_sector(std::size_t n, std::size_t d, unsigned mask) {
    std::vector<Index> out;
    std::vector<std::size_t> dims(n, d);
    const auto total = ipow(d, n);
    for (std::size_t i = 0; i < total; ++i) {
        auto dig = digits_of(i, dims);
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
            const bool nonzero = ((mask >> (n - 1 - k)) & 1u) != 0;
            ok = (dig[k] != 0) == nonzero;
        }
        if (ok) out.push_back(static_cast<Index>(i));
    }
    return out;
}

// Average over U = 1 (+) V, V Haar on U(d-1), acting on the middle (C^d)^{(x)N}.
inline Matrix stabilizer_twirl_middle(const Matrix &x, std::size_t n, std::size_t d, Index l, Index r) {
    if (d < 2) throw std::invalid_argument("stabilizer_twirl: need d >= 2");
    const auto nd = static_cast<Index>(ipow(d, n));
    if (x.rows() != l * nd * r || x.cols() != x.rows()) throw std::invalid_argument("stabilizer_twirl: shape does not match layout");
    const unsigned masks = 1u << n;
    std::vector<std::vector<Index>> rows(masks);
    for (unsigned m = 0; m < masks; ++m) {
        for (Index a = 0; a < l; ++a)
            for (Index k : stabilizer_sector(n, d, m))
                for (Index b = 0; b < r; ++b) rows[m].push_back((a * nd + k) * r + b);
    }
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (unsigned m = 0; m < masks; ++m)
        for (unsigned m2 = 0; m2 < masks; ++m2) {
            const auto k = static_cast<std::size_t>(std::popcount(m));
            if (k != static_cast<std::size_t>(std::popcount(m2))) continue;
            Matrix blk = x(rows[m], rows[m2]);
            if (k > 0 && d > 2) blk = haar_twirl_middle(blk, *build_schur_basis(k, d - 1), l, r);
            out(rows[m], rows[m2]) = blk;
        }
    return out;
}

inline Matrix stabilizer_twirl(const Matrix &x, std::size_t n, std::size_t d) {
    return stabilizer_twirl_middle(x, n, d, 1, 1);
}

// Orthogonal projection onto span{P(pi)} via the Gram matrix d^{cycles(sigma^-1 pi)}.
inline Matrix commutant_projection_twirl(const Matrix &x, std::size_t n, std::size_t d) {
    if (n > 4) throw std::invalid_argument("commutant_projection_twirl: N > 4");
    const auto dim = static_cast<Index>(ipow(d, n));
    if (x.rows() != dim || x.cols() != dim) throw std::invalid_argument("commutant_projection_twirl: shape");
    const auto perms = Permutation::all(n);
    const auto k = static_cast<Index>(perms.size());
    std::vector<std::size_t> dims(n, d);
    std::vector<std::vector<std::size_t>> maps;
    for (const auto &p : perms) maps.push_back(factor_permutation_map(dims, p.images()));

    RealMatrix gram(k, k);
    Vector rhs(k);
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j)
            gram(i, j) = std::pow(static_cast<double>(d),
                                  static_cast<double>((perms[static_cast<std::size_t>(i)].inverse() * perms[static_cast<std::size_t>(j)]).cycle_count()));
        cplx b = 0.0;
        const auto &m = maps[static_cast<std::size_t>(i)];
        for (Index c = 0; c < dim; ++c) b += x(static_cast<Index>(m[static_cast<std::size_t>(c)]), c);
        rhs(i) = b;
    }
    Eigen::JacobiSVD<RealMatrix> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector &sv = svd.singularValues();
    const double top = sv(0);
    Vector coef = Vector::Zero(k);
    for (Index i = 0; i < k; ++i) {
        const double s = sv(i);
        if (s > 1e-12 * top && s < 1e-9 * top) throw std::runtime_error("commutant_projection_twirl: ill-conditioned Gram matrix");
        if (s <= 1e-12 * top) continue;
        cplx proj = svd.matrixU().col(i).cast<cplx>().dot(rhs);
        coef += (proj / s) * svd.matrixV().col(i).cast<cplx>();
    }
    Matrix out = Matrix::Zero(dim, dim);
    for (Index i = 0; i < k; ++i) {
        const auto &m = maps[static_cast<std::size_t>(i)];
        for (Index c = 0; c < dim; ++c) out(static_cast<Index>(m[static_cast<std::size_t>(c)]), c) += coef(i);
    }
    return out;
}

enum class TwirlGroup { FullUnitary, StabilizerOfZero };

struct TwirlSpec {
    TwirlGroup group = TwirlGroup::FullUnitary;
    std::vector<std::size_t> targets;           // factors receiving U
    std::vector<std::size_t> conjugate_targets; // factors receiving conj(U)
    std::size_t local_dim = 2;
    bool force_identity = false;                // test hook: every sample is U = I
};

struct MonteCarloEstimate {
    Matrix mean;
    // sqrt(sum of per-entry sample variances / shots)
    double frobenius_sigma = 0.0;
    std::size_t shots = 0;
};

inline Matrix sample_twirl_unitary(const TwirlSpec &spec, Rng &rng) {
    const auto d = static_cast<Index>(spec.local_dim);
    if (spec.force_identity) return Matrix::Identity(d, d);
    if (spec.group == TwirlGroup::FullUnitary) return haar_unitary(d, rng);
    if (d < 2) throw std::invalid_argument("monte_carlo_twirl: stabilizer group needs d >= 2");
    Matrix u = Matrix::Identity(d, d);
    u.bottomRightCorner(d - 1, d - 1) = haar_unitary(d - 1, rng);
    return u;
}

inline MonteCarloEstimate monte_carlo_twirl(const Operator &x, const TwirlSpec &spec, std::size_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("monte_carlo_twirl: shots must be positive");
    const auto dims = x.layout().dims();
    for (auto t : spec.targets)
        if (t >= dims.size() || dims[t] != spec.local_dim) throw std::invalid_argument("monte_carlo_twirl: bad target factor");
    for (auto t : spec.conjugate_targets)
        if (t >= dims.size() || dims[t] != spec.local_dim) throw std::invalid_argument("monte_carlo_twirl: bad target factor");

    const Matrix &m = x.matrix();
    Matrix sum = Matrix::Zero(m.rows(), m.cols());
    RealMatrix sumsq = RealMatrix::Zero(m.rows(), m.cols());
    for (std::size_t s = 0; s < shots; ++s) {
        Rng rng = stream_rng(seed, s);
        Matrix u = sample_twirl_unitary(spec, rng);
        Matrix uc = u.conjugate();
        Matrix y = m;
        for (auto t : spec.targets) y = apply_local(u, y, dims, t);
        for (auto t : spec.conjugate_targets) y = apply_local(uc, y, dims, t);
        y.adjointInPlace();
        for (auto t : spec.targets) y = apply_local(u, y, dims, t);
        for (auto t : spec.conjugate_targets) y = apply_local(uc, y, dims, t);
        y.adjointInPlace();
        sum += y;
        sumsq += y.cwiseAbs2();
    }
    MonteCarloEstimate est;
    est.shots = shots;
    const double ns = static_cast<double>(shots);
    est.mean = sum / ns;
    if (shots > 1) {
        RealMatrix var = (sumsq / ns - est.mean.cwiseAbs2()) * (ns / (ns - 1.0));
        est.frobenius_sigma = std::sqrt(var.cwiseMax(0.0).sum() / ns);
    }
    return est;
}

inline Matrix twirl_commutator_defect(const Matrix &x, std::size_t n, const Matrix &u) {
    std::vector<std::size_t> dims(n, static_cast<std::size_t>(u.rows()));
    Matrix ux = x, xu = x;
    for (std::size_t k = 0; k < n; ++k) ux = apply_local(u, ux, dims, k);
    xu.adjointInPlace();
    for (std::size_t k = 0; k < n; ++k) xu = apply_local(u.adjoint(), xu, dims, k);
    xu.adjointInPlace();
    return ux - xu;
}

} // namespace loctest
