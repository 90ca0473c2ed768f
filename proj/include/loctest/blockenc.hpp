#pragma once

#include "hilbert.hpp"

namespace loctest {

// Ancilla qubits are the high-order factors: index = ancilla * n + system.
struct BlockEncoding {
    Matrix unitary;
    double alpha = 1.0;
    std::size_t ancillas = 0;
    double error = 0.0;
    Index system_dim = 0;

    Matrix top_left() const { return unitary.topLeftCorner(system_dim, system_dim); }
    Matrix encoded() const { return alpha * top_left(); }
};

inline double operator_norm(const Matrix &m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

inline double verify_block_encoding(const Matrix &u, const Matrix &a, double alpha, std::size_t ancillas) {
    if (a.rows() != a.cols() || u.rows() != u.cols()) throw std::invalid_argument("verify_block_encoding: not square");
    if (u.rows() != a.rows() * static_cast<Index>(ipow(2, ancillas))) throw std::invalid_argument("verify_block_encoding: dimension mismatch");
    return operator_norm(alpha * u.topLeftCorner(a.rows(), a.cols()) - a);
}

inline double verify_block_encoding(const BlockEncoding &be, const Matrix &a) {
    return verify_block_encoding(be.unitary, a, be.alpha, be.ancillas);
}

inline double unitarity_defect(const Matrix &u) {
    return max_abs(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

inline BlockEncoding trivial_encoding(const Matrix &u) {
    if (unitarity_defect(u) > 1e-10) throw std::invalid_argument("trivial_encoding: input not unitary");
    return BlockEncoding{u, 1.0, 0, 0.0, u.rows()};
}

// Unitary whose first column is v (Householder completion).
inline Matrix state_prep_unitary(const Vector &v) {
    if (std::abs(v.norm() - 1.0) > 1e-10) throw std::invalid_argument("state_prep_unitary: vector not normalized");
    const Matrix vm = v;
    Eigen::HouseholderQR<Matrix> qr(vm);
    Matrix q = qr.householderQ() * Matrix::Identity(v.size(), v.size());
    q.col(0) *= qr.matrixQR()(0, 0);
    return q;
}

struct StatePrepPair {
    Matrix p_left, p_right;
    Vector y;
    double beta = 1.0;
    std::size_t qubits = 0;
    double epsilon = 0.0; // sum_j |beta conj(c_j) d_j - y_j|
};

inline StatePrepPair make_state_prep_pair(const Vector &c, const Vector &d, double beta, const Vector &y) {
    if (c.size() != d.size() || c.size() != y.size() || c.size() == 0) throw std::invalid_argument("make_state_prep_pair: length mismatch");
    std::size_t b = 0;
    while (static_cast<Index>(ipow(2, b)) < c.size()) ++b;
    const auto dim = static_cast<Index>(ipow(2, b));
    Vector cp = Vector::Zero(dim), dp = Vector::Zero(dim);
    cp.head(c.size()) = c;
    dp.head(d.size()) = d;
    StatePrepPair p;
    p.p_left = state_prep_unitary(cp);
    p.p_right = state_prep_unitary(dp);
    p.y = y;
    p.beta = beta;
    p.qubits = b;
    for (Index j = 0; j < c.size(); ++j) p.epsilon += std::abs(beta * std::conj(c(j)) * d(j) - y(j));
    return p;
}

inline StatePrepPair make_state_prep_pair(const Vector &c, const Vector &d, double beta) {
    Vector y = beta * c.conjugate().cwiseProduct(d);
    return make_state_prep_pair(c, d, beta, y);
}

// (P_L^dag (x) I)(sum_j |j><j| (x) U_j)(P_R (x) I), control register high-order.
inline BlockEncoding lcu_combine(const StatePrepPair &pair, const std::vector<BlockEncoding> &encs) {
    if (encs.empty() || static_cast<Index>(encs.size()) != pair.y.size()) throw std::invalid_argument("lcu_combine: pair does not match encoding count");
    const auto &e0 = encs.front();
    double worst = 0.0;
    for (const auto &e : encs) {
        if (std::abs(e.alpha - e0.alpha) > 1e-12 || e.ancillas != e0.ancillas || e.unitary.rows() != e0.unitary.rows() ||
            e.system_dim != e0.system_dim)
            throw std::invalid_argument("lcu_combine: encodings must share (alpha, a)");
        worst = std::max(worst, e.error);
    }
    const Index m = e0.unitary.rows();
    const auto ctrl = static_cast<Index>(ipow(2, pair.qubits));
    Matrix sel = Matrix::Identity(ctrl * m, ctrl * m);
    for (Index j = 0; j < static_cast<Index>(encs.size()); ++j) sel.block(j * m, j * m, m, m) = encs[static_cast<std::size_t>(j)].unitary;
    const Matrix id = Matrix::Identity(m, m);
    Matrix w = kron(Matrix(pair.p_left.adjoint()), id) * sel * kron(pair.p_right, id);
    return BlockEncoding{std::move(w), e0.alpha * pair.beta, e0.ancillas + pair.qubits,
                         e0.alpha * pair.epsilon + e0.alpha * pair.beta * worst, e0.system_dim};
}

inline BlockEncoding down_scale(const BlockEncoding &be, double factor) {
    if (!(factor > 1.0)) throw std::invalid_argument("down_scale: factor must exceed 1");
    if (std::abs(be.alpha - 1.0) > 1e-12) throw std::invalid_argument("down_scale: input subnormalization must be 1");
    const double c = 1.0 / factor, s = std::sqrt(1.0 - c * c);
    Matrix rot(2, 2);
    rot << c, -s, s, c;
    return BlockEncoding{kron(rot, be.unitary), 1.0, be.ancillas + 1, be.error / factor, be.system_dim};
}

// (2, 2, 0)-encoding of |psi><psi| from R = I - 2|psi><psi|.
inline BlockEncoding reflection_to_projector(const Matrix &r) {
    if (r.rows() != r.cols() || unitarity_defect(r) > 1e-10 || hermiticity_defect(r) > 1e-10)
        throw std::invalid_argument("reflection_to_projector: R must be unitary and Hermitian");
    RealVector ev = hermitian_eigenvalues(r);
    int minus = 0;
    for (Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i) + 1.0) < 1e-8) ++minus;
        else if (std::abs(ev(i) - 1.0) > 1e-8) throw std::invalid_argument("reflection_to_projector: eigenvalues must be +-1");
    }
    if (minus != 1) throw std::invalid_argument("reflection_to_projector: R is not a rank-1 reflection");
    const double h = 1.0 / std::sqrt(2.0);
    Vector c(2), d(2);
    c << h, h;
    d << h, -h;
    const Matrix id = Matrix::Identity(r.rows(), r.cols());
    BlockEncoding lcu = lcu_combine(make_state_prep_pair(c, d, 2.0), {trivial_encoding(id), trivial_encoding(r)});
    // lcu encodes I - R = 2|psi><psi| at alpha 2, i.e. |psi><psi| at alpha 1
    lcu.alpha = 1.0;
    BlockEncoding out = down_scale(lcu, 2.0);
    out.alpha = 2.0;
    return out;
}

// (5, a+1, 0)-encoding of I - 2A from a (2, a, 0)-encoding of A; amplitude amplification not applied.
inline BlockEncoding projector_to_reflection_pre_aa(const BlockEncoding &be) {
    if (std::abs(be.alpha - 2.0) > 1e-12) throw std::invalid_argument("projector_to_reflection_pre_aa: input alpha must be 2");
    if (be.error > 1e-10) throw std::invalid_argument("projector_to_reflection_pre_aa: input must be exact");
    BlockEncoding half = be;
    half.alpha = 1.0;
    const double k = 1.0 / std::sqrt(5.0);
    Vector c(2), d(2);
    c << k, 2.0 * k;
    d << k, -2.0 * k;
    const Matrix id = Matrix::Identity(be.unitary.rows(), be.unitary.cols());
    BlockEncoding ident{id, 1.0, be.ancillas, 0.0, be.system_dim};
    return lcu_combine(make_state_prep_pair(c, d, 5.0), {ident, half});
}

inline Matrix reflection_about(const Vector &psi) {
    return Matrix::Identity(psi.size(), psi.size()) - 2.0 * psi * psi.adjoint();
}

} // namespace loctest
