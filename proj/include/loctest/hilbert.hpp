#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loctest {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Raised when an internal identity fails; indicates a bug, not bad input.
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kPovmTol = 1e-9;

enum class Party { A, B, None };

inline const char *party_name(Party p) {
    switch (p) {
    case Party::A: return "A";
    case Party::B: return "B";
    default: return "-";
    }
}

struct Factor {
    std::size_t dim = 1;
    Party party = Party::None;
    bool operator==(const Factor &) const = default;
};

class SystemLayout {
public:
    SystemLayout() = default;
    explicit SystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
        for (const auto &f : factors_) {
            if (f.dim == 0) throw std::invalid_argument("SystemLayout: zero local dimension");
        }
    }

    static SystemLayout single(std::size_t dim, Party p = Party::None) { return SystemLayout({{dim, p}}); }
    static SystemLayout uniform(std::size_t n, std::size_t d, Party p = Party::None) {
        return SystemLayout(std::vector<Factor>(n, Factor{d, p}));
    }
    // (A1 B1 A2 B2 ... AN BN), each factor of dimension d.
    static SystemLayout bipartite_copies(std::size_t copies, std::size_t d) {
        std::vector<Factor> f;
        for (std::size_t i = 0; i < copies; ++i) {
            f.push_back({d, Party::A});
            f.push_back({d, Party::B});
        }
        return SystemLayout(std::move(f));
    }

    std::size_t size() const { return factors_.size(); }
    const Factor &operator[](std::size_t i) const { return factors_.at(i); }
    const std::vector<Factor> &factors() const { return factors_; }
    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> out;
        for (const auto &f : factors_) out.push_back(f.dim);
        return out;
    }
    std::size_t total_dim() const {
        std::size_t t = 1;
        for (const auto &f : factors_) t *= f.dim;
        return t;
    }
    SystemLayout concat(const SystemLayout &o) const {
        auto f = factors_;
        f.insert(f.end(), o.factors_.begin(), o.factors_.end());
        return SystemLayout(std::move(f));
    }
    bool operator==(const SystemLayout &) const = default;

private:
    std::vector<Factor> factors_;
};

class Operator {
public:
    Operator() = default;
    Operator(Matrix m, SystemLayout layout) : m_(std::move(m)), layout_(std::move(layout)) {
        if (m_.rows() != m_.cols()) throw std::invalid_argument("Operator: matrix not square");
        if (static_cast<std::size_t>(m_.rows()) != layout_.total_dim())
            throw std::invalid_argument("Operator: dimension does not match layout");
    }
    explicit Operator(Matrix m) : Operator(m, SystemLayout::single(static_cast<std::size_t>(m.rows()))) {}

    const Matrix &matrix() const { return m_; }
    const SystemLayout &layout() const { return layout_; }
    Index dim() const { return m_.rows(); }

private:
    Matrix m_;
    SystemLayout layout_;
};

class StateVector {
public:
    StateVector() = default;
    StateVector(Vector v, SystemLayout layout, bool subnormalized = false)
        : v_(std::move(v)), layout_(std::move(layout)), subnormalized_(subnormalized) {
        if (static_cast<std::size_t>(v_.size()) != layout_.total_dim())
            throw std::invalid_argument("StateVector: length does not match layout");
        if (!subnormalized_ && std::abs(v_.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("StateVector: not normalized");
    }

    const Vector &amplitudes() const { return v_; }
    const SystemLayout &layout() const { return layout_; }
    bool subnormalized() const { return subnormalized_; }
    Operator projector() const { return Operator(v_ * v_.adjoint(), layout_); }

private:
    Vector v_;
    SystemLayout layout_;
    bool subnormalized_ = false;
};

inline std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp--) r *= base;
    return r;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron(const Vector &a, const Vector &b) {
    Vector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

inline Matrix kron_power(const Matrix &a, std::size_t n) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t i = 0; i < n; ++i) out = kron(out, a);
    return out;
}

inline Vector kron_power(const Vector &a, std::size_t n) {
    Vector out = Vector::Ones(1);
    for (std::size_t i = 0; i < n; ++i) out = kron(out, a);
    return out;
}

inline Operator tensor_product(const std::vector<Operator> &xs) {
    if (xs.empty()) throw std::invalid_argument("tensor_product: empty list");
    Matrix m = xs.front().matrix();
    SystemLayout layout = xs.front().layout();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        m = kron(m, xs[i].matrix());
        layout = layout.concat(xs[i].layout());
    }
    return Operator(std::move(m), std::move(layout));
}

inline Matrix hermitian_part(const Matrix &m) { return 0.5 * (m + m.adjoint()); }

inline RealVector hermitian_eigenvalues(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// Multi-index digits of a flat index, most significant factor first.
inline std::vector<std::size_t> digits_of(std::size_t idx, const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> out(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    return out;
}

inline Matrix partial_trace(const Matrix &rho, const std::vector<std::size_t> &dims,
                            std::vector<std::size_t> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (auto k : keep)
        if (k >= dims.size()) throw std::out_of_range("partial_trace: factor index out of range");
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    if (static_cast<std::size_t>(rho.rows()) != total || rho.cols() != rho.rows())
        throw std::invalid_argument("partial_trace: shape does not match dims");

    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) kept[k] = true;
    std::size_t dk = 1, dt = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? dk : dt) *= dims[k];

    // pos[t * dk + a] = flat index with kept digits a and traced digits t
    std::vector<std::size_t> pos(total);
    for (std::size_t i = 0; i < total; ++i) {
        auto dig = digits_of(i, dims);
        std::size_t a = 0, t = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (kept[k]) a = a * dims[k] + dig[k];
            else t = t * dims[k] + dig[k];
        }
        pos[t * dk + a] = i;
    }
    Matrix out = Matrix::Zero(static_cast<Index>(dk), static_cast<Index>(dk));
    for (std::size_t t = 0; t < dt; ++t)
        for (std::size_t c = 0; c < dk; ++c) {
            auto jc = static_cast<Index>(pos[t * dk + c]);
            for (std::size_t r = 0; r < dk; ++r)
                out(static_cast<Index>(r), static_cast<Index>(c)) += rho(static_cast<Index>(pos[t * dk + r]), jc);
        }
    return out;
}

inline Operator partial_trace(const Operator &rho, const std::vector<std::size_t> &keep) {
    auto sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Matrix m = partial_trace(rho.matrix(), rho.layout().dims(), sorted);
    std::vector<Factor> f;
    for (auto k : sorted) f.push_back(rho.layout()[k]);
    if (f.empty()) f.push_back({1, Party::None});
    return Operator(std::move(m), SystemLayout(std::move(f)));
}

// Index map of the factor permutation: input factor m moves to position perm[m].
inline std::vector<std::size_t> factor_permutation_map(const std::vector<std::size_t> &dims,
                                                        const std::vector<std::size_t> &perm) {
    const std::size_t n = dims.size();
    if (perm.size() != n) throw std::invalid_argument("permute_factors: arity mismatch");
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) throw std::invalid_argument("permute_factors: not a permutation");
        seen[p] = true;
    }
    std::vector<std::size_t> new_dims(n);
    for (std::size_t m = 0; m < n; ++m) new_dims[perm[m]] = dims[m];
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    std::vector<std::size_t> map(total);
    std::vector<std::size_t> nd(n);
    for (std::size_t i = 0; i < total; ++i) {
        auto dig = digits_of(i, dims);
        for (std::size_t m = 0; m < n; ++m) nd[perm[m]] = dig[m];
        std::size_t j = 0;
        for (std::size_t k = 0; k < n; ++k) j = j * new_dims[k] + nd[k];
        map[i] = j;
    }
    return map;
}

inline Matrix permute_factors(const Matrix &x, const std::vector<std::size_t> &dims,
                              const std::vector<std::size_t> &perm) {
    auto map = factor_permutation_map(dims, perm);
    if (static_cast<std::size_t>(x.rows()) != map.size()) throw std::invalid_argument("permute_factors: shape");
    Matrix out(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j)
        for (Index i = 0; i < x.rows(); ++i)
            out(static_cast<Index>(map[i]), static_cast<Index>(map[j])) = x(i, j);
    return out;
}

inline Vector permute_factors(const Vector &x, const std::vector<std::size_t> &dims,
                              const std::vector<std::size_t> &perm) {
    auto map = factor_permutation_map(dims, perm);
    if (static_cast<std::size_t>(x.size()) != map.size()) throw std::invalid_argument("permute_factors: shape");
    Vector out(x.size());
    for (Index i = 0; i < x.size(); ++i) out(static_cast<Index>(map[i])) = x(i);
    return out;
}

inline Operator permute_factors(const Operator &x, const std::vector<std::size_t> &perm) {
    auto dims = x.layout().dims();
    Matrix m = permute_factors(x.matrix(), dims, perm);
    std::vector<Factor> f(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) f[perm[k]] = x.layout()[k];
    return Operator(std::move(m), SystemLayout(std::move(f)));
}

inline double trace_norm_hermitian(const Matrix &x) { return hermitian_eigenvalues(x).cwiseAbs().sum(); }

inline double trace_distance(const Matrix &rho, const Matrix &sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols())
        throw std::invalid_argument("trace_distance: shape mismatch");
    return 0.5 * trace_norm_hermitian(rho - sigma);
}

inline double trace_distance(const Operator &rho, const Operator &sigma) {
    return trace_distance(rho.matrix(), sigma.matrix());
}

inline Matrix psd_sqrt(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
    const RealVector &ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev.minCoeff() < -kPsdTol * scale) throw std::invalid_argument("psd_sqrt: operator not PSD");
    RealVector s = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

inline double fidelity(const Matrix &rho, const Matrix &sigma) {
    if (rho.rows() != sigma.rows() || rho.rows() != rho.cols()) throw std::invalid_argument("fidelity: shape mismatch");
    Matrix prod = psd_sqrt(rho) * psd_sqrt(sigma);
    Eigen::JacobiSVD<Matrix> svd(prod);
    return std::min(1.0, svd.singularValues().sum());
}

inline double fidelity(const Operator &rho, const Operator &sigma) { return fidelity(rho.matrix(), sigma.matrix()); }

// Row-major: entry X(i,j) lands at index i*cols + j.
inline Vector vectorize(const Matrix &x) {
    Vector v(x.size());
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
    return v;
}

inline StateVector vectorize(const Operator &x) {
    auto d = static_cast<std::size_t>(x.dim());
    return StateVector(vectorize(x.matrix()), SystemLayout({{d, Party::None}, {d, Party::None}}), true);
}

inline Matrix devectorize(const Vector &v, Index rows, Index cols) {
    if (rows * cols != v.size()) throw std::invalid_argument("devectorize: length mismatch");
    Matrix x(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) x(i, j) = v(i * cols + j);
    return x;
}

inline Matrix devectorize(const Vector &v) {
    auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size()) throw std::invalid_argument("devectorize: length is not a square");
    return devectorize(v, d, d);
}

inline Operator devectorize(const StateVector &v) { return Operator(devectorize(v.amplitudes())); }

// |I_d>> = sum_i |i>|i>
inline Vector max_entangled(Index d) { return vectorize(Matrix::Identity(d, d)); }

inline double hermiticity_defect(const Matrix &t) {
    return t.size() == 0 ? 0.0 : (t - t.adjoint()).cwiseAbs().maxCoeff();
}

inline std::pair<double, double> validate_povm_element(const Matrix &t) {
    if (t.rows() != t.cols()) throw std::invalid_argument("validate_povm_element: not square");
    if (hermiticity_defect(t) > kHermitianTol) throw std::invalid_argument("validate_povm_element: not Hermitian");
    RealVector ev = hermitian_eigenvalues(t);
    return {ev.minCoeff(), ev.maxCoeff()};
}

inline std::pair<double, double> validate_povm_element(const Operator &t) { return validate_povm_element(t.matrix()); }

inline bool is_povm_element(const Matrix &t, double tol = kPovmTol) {
    auto [lo, hi] = validate_povm_element(t);
    return lo >= -tol && hi <= 1.0 + tol;
}

// Row selector for the middle factor of C^l (x) C^n (x) C^r with spectators (a, b) fixed.
inline std::vector<Index> middle_rows(Index l_idx, Index n, Index r, Index r_idx) {
    std::vector<Index> idx(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) idx[static_cast<std::size_t>(k)] = (l_idx * n + k) * r + r_idx;
    return idx;
}

// (I_l (x) M (x) I_r) X
inline Matrix left_mul_middle(const Matrix &m, const Matrix &x, Index l, Index r) {
    const Index n = m.cols();
    if (l * n * r != x.rows()) throw std::invalid_argument("left_mul_middle: shape");
    Matrix out(l * m.rows() * r, x.cols());
    for (Index a = 0; a < l; ++a)
        for (Index b = 0; b < r; ++b) {
            auto in = middle_rows(a, n, r, b);
            auto dst = middle_rows(a, m.rows(), r, b);
            out(dst, Eigen::all) = m * x(in, Eigen::all);
        }
    return out;
}

// X (I_l (x) M (x) I_r)
inline Matrix right_mul_middle(const Matrix &x, const Matrix &m, Index l, Index r) {
    const Index n = m.rows();
    if (l * n * r != x.cols()) throw std::invalid_argument("right_mul_middle: shape");
    Matrix out(x.rows(), l * m.cols() * r);
    for (Index a = 0; a < l; ++a)
        for (Index b = 0; b < r; ++b) {
            auto in = middle_rows(a, n, r, b);
            auto dst = middle_rows(a, m.cols(), r, b);
            out(Eigen::all, dst) = x(Eigen::all, in) * m;
        }
    return out;
}

// (I (x) M (x) I)^dagger X (I (x) M (x) I)
inline Matrix conjugate_middle(const Matrix &x, const Matrix &m, Index l, Index r) {
    return right_mul_middle(left_mul_middle(m.adjoint(), x, l, r), m, l, r);
}

// Applies a one-factor operator u to factor k of a state or operator with the given dims.
inline Matrix apply_local(const Matrix &u, const Matrix &x, const std::vector<std::size_t> &dims, std::size_t k) {
    Index l = 1, r = 1;
    for (std::size_t i = 0; i < k; ++i) l *= static_cast<Index>(dims[i]);
    for (std::size_t i = k + 1; i < dims.size(); ++i) r *= static_cast<Index>(dims[i]);
    return left_mul_middle(u, x, l, r);
}

// U^{(x)n} |v> without forming the Kronecker power.
inline Vector apply_tensor_power(const Matrix &u, const Vector &v, std::size_t n) {
    Matrix x = v;
    std::vector<std::size_t> dims(n, static_cast<std::size_t>(u.rows()));
    for (std::size_t k = 0; k < n; ++k) x = apply_local(u, x, dims, k);
    return x.col(0);
}

inline double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace loctest
