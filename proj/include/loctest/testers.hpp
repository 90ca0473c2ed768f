#pragma once

#include "twirl.hpp"

namespace loctest {

inline void require_povm(const Matrix &t, const char *what) {
    auto [lo, hi] = validate_povm_element(t);
    if (lo < -kPovmTol || hi > 1.0 + kPovmTol) throw std::invalid_argument(std::string(what) + ": not a valid POVM element");
}

class Tester {
public:
    Tester(Matrix t, std::size_t copies, std::size_t d)
        : op_(std::move(t), SystemLayout::bipartite_copies(copies, d)), copies_(copies), d_(d) {
        require_povm(op_.matrix(), "Tester");
    }
    explicit Tester(Operator op) : op_(std::move(op)) {
        const auto &lay = op_.layout();
        if (lay.size() == 0 || lay.size() % 2 != 0) throw std::invalid_argument("Tester: layout must be A1 B1 ... AN BN");
        copies_ = lay.size() / 2;
        d_ = lay[0].dim;
        if (!(lay == SystemLayout::bipartite_copies(copies_, d_))) throw std::invalid_argument("Tester: layout must be A1 B1 ... AN BN");
        require_povm(op_.matrix(), "Tester");
    }

    const Operator &op() const { return op_; }
    const Matrix &matrix() const { return op_.matrix(); }
    std::size_t copies() const { return copies_; }
    std::size_t local_dim() const { return d_; }

private:
    Operator op_;
    std::size_t copies_ = 0, d_ = 0;
};

// B side is implicitly the identity.
class LocalTester {
public:
    LocalTester(Matrix a_side, std::size_t copies, std::size_t d)
        : a_(std::move(a_side), SystemLayout::uniform(copies, d, Party::A)), copies_(copies), d_(d) {
        require_povm(a_.matrix(), "LocalTester");
    }

    const Operator &a_side() const { return a_; }
    std::size_t copies() const { return copies_; }
    std::size_t local_dim() const { return d_; }
    Tester to_tester() const {
        const auto dn = static_cast<Index>(ipow(d_, copies_));
        Matrix full = kron(a_.matrix(), Matrix::Identity(dn, dn));
        auto basis = build_bipartite_basis(copies_, d_);
        return Tester(basis->reorder_to_copies(full), copies_, d_);
    }

private:
    Operator a_;
    std::size_t copies_, d_;
};

struct Acceptance {
    double value = 0.0;
    double raw = 0.0;
    // set when the raw trace left [0,1] by more than 1e-9
    bool flagged = false;
};

inline Acceptance clamp_acceptance(double raw) {
    Acceptance a;
    a.raw = raw;
    a.value = std::clamp(raw, 0.0, 1.0);
    if (std::abs(a.value - raw) > 1e-12) a.flagged = std::abs(a.value - raw) > 1e-9;
    return a;
}

inline void require_density(const Matrix &rho, Index dim) {
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("acceptance_probability: dimension mismatch");
}

inline Acceptance acceptance(const Tester &t, const Matrix &rho) {
    const auto d = static_cast<Index>(t.local_dim());
    require_density(rho, d * d);
    return clamp_acceptance((t.matrix() * kron_power(rho, t.copies())).trace().real());
}

inline Acceptance acceptance(const LocalTester &t, const Matrix &rho) {
    const auto d = static_cast<Index>(t.local_dim());
    require_density(rho, d * d);
    Matrix rho_a = partial_trace(rho, {t.local_dim(), t.local_dim()}, {0});
    return clamp_acceptance((t.a_side().matrix() * kron_power(rho_a, t.copies())).trace().real());
}

inline double acceptance_probability(const Tester &t, const Matrix &rho) { return acceptance(t, rho).value; }
inline double acceptance_probability(const LocalTester &t, const Matrix &rho) { return acceptance(t, rho).value; }

inline Tester twirl_tester(const Tester &t) {
    return Tester(hermitian_part(haar_twirl_b(t.matrix(), t.copies(), t.local_dim())), t.copies(), t.local_dim());
}

inline Tester haar_twirl_B(const Tester &t) { return twirl_tester(t); }

inline Tester permutation_symmetrize(const Tester &t) {
    const auto dims = t.op().layout().dims();
    Matrix acc = Matrix::Zero(t.matrix().rows(), t.matrix().cols());
    const auto perms = Permutation::all(t.copies());
    for (const auto &p : perms) acc += permute_factors(t.matrix(), dims, doubled_permutation(p).images());
    acc /= static_cast<double>(perms.size());
    return Tester(hermitian_part(acc), t.copies(), t.local_dim());
}

// (1/(dimW dimV)) tr_{W_B} <<I_V| X |I_V>> for the (lambda, lambda) block of X in product Schur coordinates.
inline Matrix contract_block(const Matrix &xs, const BipartiteSchurBasis &basis, std::size_t b) {
    const auto &blk = basis.side().block(b);
    Matrix k = Matrix::Zero(blk.dim_w, blk.dim_w);
    for (Index wa = 0; wa < blk.dim_w; ++wa)
        for (Index wa2 = 0; wa2 < blk.dim_w; ++wa2) {
            cplx s = 0.0;
            for (Index v = 0; v < blk.dim_v; ++v)
                for (Index v2 = 0; v2 < blk.dim_v; ++v2)
                    for (Index wb = 0; wb < blk.dim_w; ++wb)
                        s += xs(basis.index(b, v, wa, b, v, wb), basis.index(b, v2, wa2, b, v2, wb));
            k(wa, wa2) = s;
        }
    return k;
}

inline LocalTester localize(const Tester &t) {
    const auto n = t.copies(), d = t.local_dim();
    auto basis = build_bipartite_basis(n, d);
    Matrix ts = basis->to_schur(twirl_tester(t).matrix());
    const auto &side = basis->side();
    Matrix a = Matrix::Zero(side.dim(), side.dim());
    for (std::size_t b = 0; b < side.blocks().size(); ++b) {
        const auto &blk = side.block(b);
        Matrix g = contract_block(ts, *basis, b) / static_cast<double>(blk.dim_w * blk.dim_v);
        for (Index v = 0; v < blk.dim_v; ++v) a.block(blk.column(v, 0), blk.column(v, 0), blk.dim_w, blk.dim_w) = g;
    }
    return LocalTester(hermitian_part(side.from_schur(a)), n, d);
}

inline Matrix purity_projector_schur(const BipartiteSchurBasis &basis) {
    Matrix p = Matrix::Zero(basis.dim(), basis.dim());
    const auto &side = basis.side();
    for (std::size_t b = 0; b < side.blocks().size(); ++b) {
        const auto &blk = side.block(b);
        const double inv = 1.0 / static_cast<double>(blk.dim_v);
        for (Index v = 0; v < blk.dim_v; ++v)
            for (Index v2 = 0; v2 < blk.dim_v; ++v2)
                for (Index wa = 0; wa < blk.dim_w; ++wa)
                    for (Index wb = 0; wb < blk.dim_w; ++wb)
                        p(basis.index(b, v, wa, b, v, wb), basis.index(b, v2, wa, b, v2, wb)) = inv;
    }
    return p;
}

inline Tester purity_projector(std::size_t n, std::size_t d) {
    auto basis = build_bipartite_basis(n, d);
    return Tester(hermitian_part(basis->from_schur(purity_projector_schur(*basis))), n, d);
}

inline Tester simultaneous_symmetrizer(std::size_t n, std::size_t d) {
    const auto perms = Permutation::all(n);
    Matrix acc = Matrix::Zero(static_cast<Index>(ipow(d, 2 * n)), static_cast<Index>(ipow(d, 2 * n)));
    for (const auto &p : perms) acc += simultaneous_perm(p, n, d).matrix();
    return Tester(acc / static_cast<double>(perms.size()), n, d);
}

inline Tester embed_purity(const Tester &t) {
    const Tester tt = permutation_symmetrize(twirl_tester(t));
    const Matrix pi = purity_projector(t.copies(), t.local_dim()).matrix();
    const Matrix &m = tt.matrix();
    if ((pi * m - m * pi).norm() > 1e-9) throw VerificationError("embed_purity: purity projector does not commute with the symmetrized tester");
    return Tester(hermitian_part(pi * m * pi), t.copies(), t.local_dim());
}

inline Matrix l_lambda_matrix(Index dim) {
    if (dim < 1) throw std::invalid_argument("l_lambda: dim must be positive");
    Vector phi = max_entangled(dim);
    Matrix proj = phi * phi.adjoint() / static_cast<double>(dim);
    return proj + (Matrix::Identity(dim * dim, dim * dim) - proj) / static_cast<double>(dim + 1);
}

// Per-diagram data behind the one-way LOCC tester.
struct LoccBlock {
    YoungDiagram lambda;
    Index dim_v = 0, dim_w = 0;
    // K_lambda / (dimW dimV), an operator on W_A with 0 <= . <= I
    Matrix alice;
};

struct LoccMeasurement {
    std::size_t copies = 0, local_dim = 0;
    std::vector<LoccBlock> blocks;
};

inline LoccMeasurement locc_measurement(const Tester &t) {
    const auto n = t.copies(), d = t.local_dim();
    auto basis = build_bipartite_basis(n, d);
    Matrix ts = basis->to_schur(permutation_symmetrize(twirl_tester(t)).matrix());
    LoccMeasurement out;
    out.copies = n;
    out.local_dim = d;
    const auto &side = basis->side();
    for (std::size_t b = 0; b < side.blocks().size(); ++b) {
        const auto &blk = side.block(b);
        Matrix k = hermitian_part(contract_block(ts, *basis, b));
        if (hermitian_eigenvalues(k).minCoeff() < -1e-9) throw VerificationError("locc_tester: <<I|S|I>> block not PSD");
        out.blocks.push_back({blk.lambda, blk.dim_v, blk.dim_w, k / static_cast<double>(blk.dim_w * blk.dim_v)});
    }
    return out;
}

inline Matrix locc_operator_schur(const LoccMeasurement &meas, const BipartiteSchurBasis &basis) {
    Matrix out = Matrix::Zero(basis.dim(), basis.dim());
    for (std::size_t b = 0; b < meas.blocks.size(); ++b) {
        const auto &lb = meas.blocks[b];
        Matrix l = l_lambda_matrix(lb.dim_v);
        for (Index va = 0; va < lb.dim_v; ++va)
            for (Index vb = 0; vb < lb.dim_v; ++vb)
                for (Index va2 = 0; va2 < lb.dim_v; ++va2)
                    for (Index vb2 = 0; vb2 < lb.dim_v; ++vb2) {
                        const cplx lv = l(va * lb.dim_v + vb, va2 * lb.dim_v + vb2);
                        if (lv == 0.0) continue;
                        for (Index wa = 0; wa < lb.dim_w; ++wa)
                            for (Index wa2 = 0; wa2 < lb.dim_w; ++wa2)
                                for (Index wb = 0; wb < lb.dim_w; ++wb)
                                    out(basis.index(b, va, wa, b, vb, wb), basis.index(b, va2, wa2, b, vb2, wb)) = lv * lb.alice(wa, wa2);
                    }
    }
    return out;
}

inline Tester locc_tester(const Tester &t) {
    auto basis = build_bipartite_basis(t.copies(), t.local_dim());
    Matrix op = basis->from_schur(locc_operator_schur(locc_measurement(t), *basis));
    return Tester(hermitian_part(op), t.copies(), t.local_dim());
}

} // namespace loctest
