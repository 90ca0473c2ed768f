#pragma once

#include "schur.hpp"

#include <sstream>

namespace loctest {

class BipartitePureState {
public:
    BipartitePureState(Vector amplitudes, std::size_t d_a, std::size_t d_b)
        : v_(std::move(amplitudes)), d_a_(d_a), d_b_(d_b) {
        if (static_cast<std::size_t>(v_.size()) != d_a * d_b) throw std::invalid_argument("BipartitePureState: length != d_A d_B");
        if (std::abs(v_.norm() - 1.0) > 1e-10) throw std::invalid_argument("BipartitePureState: not normalized");
        Matrix m = devectorize(v_, static_cast<Index>(d_a), static_cast<Index>(d_b));
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        coeffs_ = svd.singularValues();
        basis_a_ = svd.matrixU().leftCols(coeffs_.size());
        basis_b_ = svd.matrixV().leftCols(coeffs_.size()).conjugate();
        Matrix rec = basis_a_ * coeffs_.cast<cplx>().asDiagonal() * basis_b_.transpose();
        if (max_abs(rec - m) > 1e-10) throw VerificationError("schmidt_decompose: reconstruction failed");
    }
    BipartitePureState(Vector amplitudes, std::size_t d)
        : BipartitePureState(std::move(amplitudes), d, d) {}

    const Vector &amplitudes() const { return v_; }
    std::size_t dim_a() const { return d_a_; }
    std::size_t dim_b() const { return d_b_; }
    // sqrt(lambda_j), descending
    const RealVector &coefficients() const { return coeffs_; }
    const Matrix &basis_a() const { return basis_a_; }
    const Matrix &basis_b() const { return basis_b_; }
    Matrix density() const { return v_ * v_.adjoint(); }
    Matrix reduced_a() const { return partial_trace(density(), {d_a_, d_b_}, {0}); }
    StateVector state() const {
        return StateVector(v_, SystemLayout({{d_a_, Party::A}, {d_b_, Party::B}}));
    }

private:
    Vector v_;
    std::size_t d_a_, d_b_;
    RealVector coeffs_;
    Matrix basis_a_, basis_b_;
};

inline BipartitePureState schmidt_decompose(const Vector &psi, std::size_t d_a, std::size_t d_b) {
    return BipartitePureState(psi, d_a, d_b);
}

inline double eckart_young_overlap(const BipartitePureState &psi, std::size_t r) {
    const auto k = static_cast<std::size_t>(psi.coefficients().size());
    if (r < 1 || r > std::min(psi.dim_a(), psi.dim_b())) throw std::invalid_argument("eckart_young_overlap: r out of range");
    double s = 0.0;
    for (std::size_t j = 0; j < std::min(r, k); ++j) s += psi.coefficients()(static_cast<Index>(j)) * psi.coefficients()(static_cast<Index>(j));
    return std::min(1.0, s);
}

inline double distance_to_schmidt_rank(const BipartitePureState &psi, std::size_t r) {
    return std::sqrt(std::max(0.0, 1.0 - eckart_young_overlap(psi, r)));
}

inline double renyi_entropy(const RealVector &spectrum, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("renyi_entropy: alpha must be positive");
    if (alpha == 1.0) {
        double s = 0.0;
        for (Index i = 0; i < spectrum.size(); ++i)
            if (spectrum(i) > 0.0) s -= spectrum(i) * std::log(spectrum(i));
        return s;
    }
    double tr = 0.0;
    for (Index i = 0; i < spectrum.size(); ++i)
        if (spectrum(i) > 0.0) tr += std::pow(spectrum(i), alpha);
    return std::log(tr) / (1.0 - alpha);
}

inline double renyi_entanglement_entropy(const BipartitePureState &psi, double alpha) {
    RealVector p = psi.coefficients().cwiseAbs2();
    return std::max(0.0, renyi_entropy(p, alpha));
}

class SpectrumDistribution {
public:
    void add(YoungDiagram lambda, double p) { entries_.emplace_back(std::move(lambda), p); }
    const std::vector<std::pair<YoungDiagram, double>> &entries() const { return entries_; }
    double at(const YoungDiagram &lambda) const {
        for (const auto &[l, p] : entries_)
            if (l == lambda) return p;
        throw std::out_of_range("SpectrumDistribution: diagram " + lambda.to_string() + " absent");
    }
    double total() const {
        double t = 0.0;
        for (const auto &e : entries_) t += e.second;
        return t;
    }
    std::string to_csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "lambda,probability\n";
        for (const auto &[l, p] : entries_) os << '"' << l.to_string() << "\"," << p << '\n';
        return os.str();
    }

private:
    std::vector<std::pair<YoungDiagram, double>> entries_;
};

inline SpectrumDistribution weak_schur_distribution(const Matrix &rho, std::size_t n) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("weak_schur_distribution: rho not square");
    const auto d = static_cast<std::size_t>(rho.rows());
    auto basis = build_schur_basis(n, d);
    const Matrix &s = basis->matrix();
    Matrix rn = kron_power(rho, n);
    SpectrumDistribution out;
    for (const auto &blk : basis->blocks()) {
        auto cols = s.middleCols(blk.offset, blk.size());
        out.add(blk.lambda, (cols.adjoint() * rn * cols).trace().real());
    }
    if (std::abs(out.total() - 1.0) > 1e-10) throw std::invalid_argument("weak_schur_distribution: rho not unit trace");
    return out;
}

inline std::vector<std::size_t> bond_dimension_profile(const Vector &psi, const std::vector<std::size_t> &dims) {
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    if (total != static_cast<std::size_t>(psi.size())) throw std::invalid_argument("bond_dimension_profile: dims do not match length");
    std::vector<std::size_t> out;
    Index left = 1;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        left *= static_cast<Index>(dims[k]);
        Matrix m = devectorize(psi, left, psi.size() / left);
        Eigen::JacobiSVD<Matrix> svd(m);
        const RealVector &sv = svd.singularValues();
        const double top = sv.size() ? sv(0) : 0.0;
        std::size_t rank = 0;
        for (Index i = 0; i < sv.size(); ++i)
            if (sv(i) > 1e-9 * top) ++rank;
        out.push_back(rank);
    }
    return out;
}

// psi (x) |0...0> on parties 3..n, each of dimension pad_dim.
inline StateVector pad_state(const BipartitePureState &psi, std::size_t n, std::size_t pad_dim = 0) {
    if (n < 2) throw std::invalid_argument("pad_state: need n >= 2");
    if (pad_dim == 0) pad_dim = psi.dim_b();
    std::vector<Factor> f{{psi.dim_a(), Party::None}, {psi.dim_b(), Party::None}};
    Vector v = psi.amplitudes();
    for (std::size_t k = 2; k < n; ++k) {
        v = kron(v, Vector(Vector::Unit(static_cast<Index>(pad_dim), 0)));
        f.push_back({pad_dim, Party::None});
    }
    return StateVector(std::move(v), SystemLayout(std::move(f)));
}

} // namespace loctest
