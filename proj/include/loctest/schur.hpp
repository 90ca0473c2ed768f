#pragma once

#include "random.hpp"
#include "symrep.hpp"

#include <map>
#include <memory>

namespace loctest {

inline constexpr std::size_t kMaxDenseDim = 4096;

struct SchurBlock {
    YoungDiagram lambda;
    Index dim_v = 0;
    Index dim_w = 0;
    Index offset = 0;
    std::shared_ptr<const SymIrrep> irrep;

    Index column(Index v, Index w) const { return offset + v * dim_w + w; }
    Index size() const { return dim_v * dim_w; }
};

// Columns of matrix() are |lambda, v, w>, grouped by lambda (descending) with v major, w minor.
class SchurBasis {
public:
    SchurBasis(std::size_t n, std::size_t d) : n_(n), d_(d) {
        if (n == 0 || d == 0) throw std::invalid_argument("build_schur_basis: need N >= 1, d >= 1");
        if (ipow(d, n) > kMaxDenseDim) throw std::invalid_argument("build_schur_basis: d^N exceeds 4096");
        const auto dim = static_cast<Index>(ipow(d, n));
        s_ = Matrix::Zero(dim, dim);

        const auto perms = Permutation::all(n);
        std::vector<std::size_t> dims(n, d);
        std::vector<std::vector<std::size_t>> maps;
        maps.reserve(perms.size());
        for (const auto &p : perms) maps.push_back(factor_permutation_map(dims, p.images()));

        Index offset = 0;
        for (const auto &lambda : enumerate_partitions(static_cast<int>(n), static_cast<int>(d))) {
            SchurBlock b;
            b.lambda = lambda;
            b.irrep = sym_irrep(lambda);
            b.dim_v = b.irrep->dim();
            b.dim_w = static_cast<Index>(dim_unitary_irrep(lambda, static_cast<int>(d)));
            b.offset = offset;

            // coef[p](i) = P_lambda(pi_p)_{i0}
            std::vector<RealVector> coef;
            coef.reserve(perms.size());
            RealVector e0 = RealVector::Unit(b.dim_v, 0);
            for (const auto &p : perms) coef.push_back(b.irrep->apply(p, e0));
            const double norm = static_cast<double>(b.dim_v) / static_cast<double>(perms.size());

            auto matrix_unit = [&](Index i, const Vector &x) {
                Vector y = Vector::Zero(dim);
                for (std::size_t p = 0; p < perms.size(); ++p) {
                    const double c = coef[p](i);
                    if (c == 0.0) continue;
                    const auto &m = maps[p];
                    for (Index k = 0; k < dim; ++k) y(static_cast<Index>(m[static_cast<std::size_t>(k)])) += c * x(k);
                }
                return Vector(norm * y);
            };

            std::vector<Vector> us;
            for (Index x = 0; x < dim && static_cast<Index>(us.size()) < b.dim_w; ++x) {
                Vector y = Vector::Zero(dim);
                for (std::size_t p = 0; p < perms.size(); ++p) y(static_cast<Index>(maps[p][static_cast<std::size_t>(x)])) += coef[p](0);
                y *= norm;
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto &u : us) y -= u.dot(y) * u;
                const double nrm = y.norm();
                if (nrm > 1e-8) us.push_back(y / nrm);
            }
            if (static_cast<Index>(us.size()) != b.dim_w) throw VerificationError("build_schur_basis: W-block seed search fell short");

            for (Index w = 0; w < b.dim_w; ++w) {
                s_.col(b.column(0, w)) = us[static_cast<std::size_t>(w)];
                for (Index v = 1; v < b.dim_v; ++v) s_.col(b.column(v, w)) = matrix_unit(v, us[static_cast<std::size_t>(w)]);
            }
            offset += b.size();
            blocks_.push_back(std::move(b));
        }
        if (offset != dim) throw VerificationError("build_schur_basis: block dimensions do not sum to d^N");
        verify();
    }

    std::size_t copies() const { return n_; }
    std::size_t local_dim() const { return d_; }
    Index dim() const { return s_.rows(); }
    const Matrix &matrix() const { return s_; }
    const std::vector<SchurBlock> &blocks() const { return blocks_; }
    const SchurBlock &block(std::size_t b) const { return blocks_.at(b); }

    std::size_t block_index(const YoungDiagram &lambda) const {
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            if (blocks_[b].lambda == lambda) return b;
        throw std::invalid_argument("SchurBasis: diagram " + lambda.to_string() + " has no block");
    }
    const SchurBlock &block(const YoungDiagram &lambda) const { return blocks_[block_index(lambda)]; }

    Matrix to_schur(const Matrix &x) const { return s_.adjoint() * x * s_; }
    Matrix from_schur(const Matrix &y) const { return s_ * y * s_.adjoint(); }
    Vector to_schur(const Vector &x) const { return s_.adjoint() * x; }
    Vector from_schur(const Vector &y) const { return s_ * y; }

    // Projector onto the lambda-isotypic subspace, in computational coordinates.
    Matrix isotypic_projector(const YoungDiagram &lambda) const {
        const auto &b = block(lambda);
        auto cols = s_.middleCols(b.offset, b.size());
        return cols * cols.adjoint();
    }

    // Q_lambda(U)_{w'w} = <lambda,0,w'| U^{(x)N} |lambda,0,w>
    Matrix gl_block(const Matrix &u, const YoungDiagram &lambda) const {
        if (u.rows() != static_cast<Index>(d_) || u.cols() != u.rows()) throw std::invalid_argument("gl_irrep_block: U must be d x d");
        const auto &b = block(lambda);
        Matrix q(b.dim_w, b.dim_w);
        for (Index w = 0; w < b.dim_w; ++w) {
            Vector uw = apply_tensor_power(u, s_.col(b.column(0, w)), n_);
            for (Index w2 = 0; w2 < b.dim_w; ++w2) q(w2, w) = s_.col(b.column(0, w2)).dot(uw);
        }
        return q;
    }

    // Max residual of the two intertwining identities; used at construction and by tests.
    double transposition_residual() const {
        double worst = 0.0;
        std::vector<std::size_t> dims(n_, d_);
        for (std::size_t k = 0; k + 1 < n_; ++k) {
            auto map = factor_permutation_map(dims, Permutation::adjacent(n_, k).images());
            for (const auto &b : blocks_) {
                const RealMatrix &g = b.irrep->generator(k);
                for (Index v = 0; v < b.dim_v; ++v)
                    for (Index w = 0; w < b.dim_w; ++w) {
                        Vector lhs(dim());
                        const auto &col = s_.col(b.column(v, w));
                        for (Index i = 0; i < dim(); ++i) lhs(static_cast<Index>(map[static_cast<std::size_t>(i)])) = col(i);
                        for (Index v2 = 0; v2 < b.dim_v; ++v2) lhs -= g(v2, v) * s_.col(b.column(v2, w));
                        worst = std::max(worst, lhs.cwiseAbs().maxCoeff());
                    }
            }
        }
        return worst;
    }

    double unitary_residual(const Matrix &u) const {
        Matrix us = s_;
        std::vector<std::size_t> dims(n_, d_);
        for (std::size_t k = 0; k < n_; ++k) us = apply_local(u, us, dims, k);
        double worst = 0.0;
        for (const auto &b : blocks_) {
            Matrix q = gl_block(u, b.lambda);
            for (Index v = 0; v < b.dim_v; ++v) {
                Matrix expect = s_.middleCols(b.column(v, 0), b.dim_w) * q;
                worst = std::max(worst, max_abs(us.middleCols(b.column(v, 0), b.dim_w) - expect));
            }
        }
        return worst;
    }

private:
    void verify() const {
        const double unit = max_abs(s_.adjoint() * s_ - Matrix::Identity(dim(), dim()));
        if (unit > 1e-10) throw VerificationError("build_schur_basis: basis not unitary");
        if (transposition_residual() > 1e-9) throw VerificationError("build_schur_basis: permutation action not block diagonal");
        Rng rng = stream_rng(0x5c4u, n_, d_);
        for (int i = 0; i < 5; ++i)
            if (unitary_residual(haar_unitary(static_cast<Index>(d_), rng)) > 1e-9)
                throw VerificationError("build_schur_basis: U^N action not block diagonal");
    }

    std::size_t n_, d_;
    Matrix s_;
    std::vector<SchurBlock> blocks_;
};

inline std::shared_ptr<const SchurBasis> build_schur_basis(std::size_t n, std::size_t d) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const SchurBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, d);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto b = std::make_shared<const SchurBasis>(n, d);
    cache.emplace(key, b);
    return b;
}

inline Matrix gl_irrep_block(const Matrix &u, const YoungDiagram &lambda, const SchurBasis &basis) {
    return basis.gl_block(u, lambda);
}

// Indices within one (lambda_A, lambda_B) block, ordered (v_A, v_B, w_A, w_B).
struct BipartiteBlock {
    std::size_t a = 0, b = 0;
    Index dim_va = 0, dim_vb = 0, dim_wa = 0, dim_wb = 0;
    std::vector<Index> indices;
};

// Coordinates: reorder A1 B1 ... AN BN to A1..AN B1..BN, then apply S (x) S.
// Product index = i_A * D + i_B with i_A, i_B Schur columns of the one-sided basis.
class BipartiteSchurBasis {
public:
    BipartiteSchurBasis(std::size_t n, std::size_t d) : n_(n), d_(d) {
        if (ipow(d, 2 * n) > kMaxDenseDim) throw std::invalid_argument("build_bipartite_basis: d^(2N) exceeds 4096");
        side_ = build_schur_basis(n, d);
        reorder_.resize(2 * n);
        for (std::size_t m = 0; m < n; ++m) {
            reorder_[2 * m] = m;
            reorder_[2 * m + 1] = n + m;
        }
        const auto &bl = side_->blocks();
        for (std::size_t a = 0; a < bl.size(); ++a)
            for (std::size_t b = 0; b < bl.size(); ++b) {
                BipartiteBlock blk;
                blk.a = a;
                blk.b = b;
                blk.dim_va = bl[a].dim_v;
                blk.dim_vb = bl[b].dim_v;
                blk.dim_wa = bl[a].dim_w;
                blk.dim_wb = bl[b].dim_w;
                for (Index va = 0; va < blk.dim_va; ++va)
                    for (Index vb = 0; vb < blk.dim_vb; ++vb)
                        for (Index wa = 0; wa < blk.dim_wa; ++wa)
                            for (Index wb = 0; wb < blk.dim_wb; ++wb) blk.indices.push_back(index(a, va, wa, b, vb, wb));
                pairs_.push_back(std::move(blk));
            }
    }

    std::size_t copies() const { return n_; }
    std::size_t local_dim() const { return d_; }
    const SchurBasis &side() const { return *side_; }
    Index side_dim() const { return side_->dim(); }
    Index dim() const { return side_dim() * side_dim(); }
    const std::vector<BipartiteBlock> &pair_blocks() const { return pairs_; }
    const BipartiteBlock &pair_block(std::size_t a, std::size_t b) const { return pairs_.at(a * side_->blocks().size() + b); }
    const BipartiteBlock &pair_block(const YoungDiagram &la, const YoungDiagram &lb) const {
        return pair_block(side_->block_index(la), side_->block_index(lb));
    }

    Index index(std::size_t a, Index va, Index wa, std::size_t b, Index vb, Index wb) const {
        return side_->block(a).column(va, wa) * side_dim() + side_->block(b).column(vb, wb);
    }

    const std::vector<std::size_t> &reorder() const { return reorder_; }
    std::vector<std::size_t> reorder_inverse() const {
        std::vector<std::size_t> inv(reorder_.size());
        for (std::size_t i = 0; i < reorder_.size(); ++i) inv[reorder_[i]] = i;
        return inv;
    }
    std::vector<std::size_t> factor_dims() const { return std::vector<std::size_t>(2 * n_, d_); }

    // A...A B...B layout, computational basis
    Matrix reorder_to_sides(const Matrix &x) const { return permute_factors(x, factor_dims(), reorder_); }
    Matrix reorder_to_copies(const Matrix &x) const { return permute_factors(x, factor_dims(), reorder_inverse()); }

    Matrix to_schur(const Matrix &x) const {
        Matrix y = reorder_to_sides(x);
        y = conjugate_middle(y, side_->matrix(), 1, side_dim());
        return conjugate_middle(y, side_->matrix(), side_dim(), 1);
    }
    Matrix from_schur(const Matrix &y) const {
        const Matrix &s = side_->matrix();
        Matrix x = left_mul_middle(s, y, 1, side_dim());
        x = left_mul_middle(s, x, side_dim(), 1);
        x = right_mul_middle(x, s.adjoint(), 1, side_dim());
        x = right_mul_middle(x, s.adjoint(), side_dim(), 1);
        return reorder_to_copies(x);
    }
    Vector to_schur(const Vector &x) const {
        Vector y = permute_factors(x, factor_dims(), reorder_);
        Matrix m = devectorize(y, side_dim(), side_dim());
        return vectorize(Matrix(side_->matrix().adjoint() * m * side_->matrix().conjugate()));
    }
    Vector from_schur(const Vector &y) const {
        Matrix m = devectorize(y, side_dim(), side_dim());
        Vector x = vectorize(Matrix(side_->matrix() * m * side_->matrix().transpose()));
        return permute_factors(x, factor_dims(), reorder_inverse());
    }

private:
    std::size_t n_, d_;
    std::shared_ptr<const SchurBasis> side_;
    std::vector<std::size_t> reorder_;
    std::vector<BipartiteBlock> pairs_;
};

inline std::shared_ptr<const BipartiteSchurBasis> build_bipartite_basis(std::size_t n, std::size_t d) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const BipartiteSchurBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, d);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto b = std::make_shared<const BipartiteSchurBasis>(n, d);
    cache.emplace(key, b);
    return b;
}

struct PurePowerComponents {
    std::size_t copies = 0;
    std::size_t local_dim = 0;
    // w[lambda] on W_A (x) W_B, index w_A * dim W + w_B
    std::map<YoungDiagram, Vector> w;
    double residual = 0.0;

    double weight(const YoungDiagram &lambda) const {
        const auto &v = w.at(lambda);
        return static_cast<double>(dim_sym_irrep(lambda)) * v.squaredNorm();
    }
    double total_weight() const {
        double t = 0.0;
        for (const auto &[lambda, v] : w) t += weight(lambda);
        return t;
    }
};

// Sum_lambda |I_V>> (x) |w_lambda> in product Schur coordinates.
inline Vector assemble_normal_form(const PurePowerComponents &c, const BipartiteSchurBasis &basis) {
    Vector y = Vector::Zero(basis.dim());
    const auto &side = basis.side();
    for (const auto &[lambda, w] : c.w) {
        auto b = side.block_index(lambda);
        const auto &blk = side.block(b);
        for (Index v = 0; v < blk.dim_v; ++v)
            for (Index wa = 0; wa < blk.dim_w; ++wa)
                for (Index wb = 0; wb < blk.dim_w; ++wb) y(basis.index(b, v, wa, b, v, wb)) += w(wa * blk.dim_w + wb);
    }
    return y;
}

// psi on C^d (x) C^d (A index major).
inline PurePowerComponents pure_power_components(const Vector &psi, std::size_t n) {
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(psi.size()))));
    if (d * d != static_cast<std::size_t>(psi.size())) throw std::invalid_argument("pure_power_components: psi must live on C^d (x) C^d");
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("pure_power_components: psi not normalized");
    auto basis = build_bipartite_basis(n, d);
    Vector c = basis->to_schur(kron_power(psi, n));

    PurePowerComponents out;
    out.copies = n;
    out.local_dim = d;
    const auto &side = basis->side();
    for (std::size_t b = 0; b < side.blocks().size(); ++b) {
        const auto &blk = side.block(b);
        Vector w = Vector::Zero(blk.dim_w * blk.dim_w);
        for (Index v = 0; v < blk.dim_v; ++v)
            for (Index wa = 0; wa < blk.dim_w; ++wa)
                for (Index wb = 0; wb < blk.dim_w; ++wb) w(wa * blk.dim_w + wb) += c(basis->index(b, v, wa, b, v, wb));
        out.w.emplace(blk.lambda, w / static_cast<double>(blk.dim_v));
    }
    out.residual = (c - assemble_normal_form(out, *basis)).norm();
    return out;
}

} // namespace loctest
