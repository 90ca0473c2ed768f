#pragma once

#include "properties.hpp"
#include "twirl.hpp"

namespace loctest {

struct HardInstance {
    BipartitePureState psi;
    BipartitePureState phi;
    std::size_t n = 2, r = 2, d = 4;
    double eps = 0.0, theta = 0.0;
};

inline Vector hard_state_vector(std::size_t d, std::size_t terms, double theta) {
    Vector v = Vector::Zero(static_cast<Index>(d * d));
    v(0) = std::sqrt(1.0 - theta);
    for (std::size_t i = 1; i <= terms; ++i) v(static_cast<Index>(i * d + i)) = std::sqrt(theta / static_cast<double>(terms));
    return v;
}

inline HardInstance hard_instance(std::size_t n, std::size_t r, std::size_t d, double eps) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("hard_instance: n must be even and >= 2");
    if (r < 2) throw std::invalid_argument("hard_instance: need r >= 2");
    if (d < 2 * r) throw std::invalid_argument("hard_instance: need d >= 2r");
    const double theta = 8.0 * eps * eps / static_cast<double>(n);
    if (!(eps > 0.0) || theta > 1.0) throw std::invalid_argument("hard_instance: need 0 < eps with theta <= 1");
    return HardInstance{BipartitePureState(hard_state_vector(d, r - 1, theta), d),
                        BipartitePureState(hard_state_vector(d, d - 1, theta), d), n, r, d, eps, theta};
}

// Same family parameterized directly by theta, with eps = sqrt(theta n / 8).
inline HardInstance hard_instance_theta(std::size_t r, std::size_t d, double theta, std::size_t n = 2) {
    return hard_instance(n, r, d, std::sqrt(theta * static_cast<double>(n) / 8.0));
}

// 1 - theta + (r-1) theta / (d-1)
inline double phi_rank_overlap(const HardInstance &inst) {
    return eckart_young_overlap(inst.phi, inst.r);
}

// tau_k = (1/(k-1)) sum_{i=1}^{k-1} |i><i| on C^d
inline Matrix tau_state(std::size_t k, std::size_t d) {
    Matrix t = Matrix::Zero(static_cast<Index>(d), static_cast<Index>(d));
    for (std::size_t i = 1; i < k; ++i) t(static_cast<Index>(i), static_cast<Index>(i)) = 1.0 / static_cast<double>(k - 1);
    return t;
}

// Averaged state over U in G on A and U_d on B, kept as blocks M_lambda on (A copies) (x) V_{lambda,B};
// the full state is sum_lambda M_lambda (x) I_{W_lambda} / dim W_lambda.
class TwirledState {
public:
    TwirledState(const BipartitePureState &psi, std::size_t n) : n_(n), d_(psi.dim_a()) {
        if (psi.dim_a() != psi.dim_b()) throw std::invalid_argument("twirled_pair: local dimensions differ");
        if (ipow(d_, 2 * n) > kMaxDenseDim) throw std::invalid_argument("twirled_pair: d^(2N) exceeds 4096");
        basis_ = build_bipartite_basis(n, d_);
        const auto &side = basis_->side();
        const Index dn = side.dim();
        Vector sides = permute_factors(kron_power(psi.amplitudes(), n), basis_->factor_dims(), basis_->reorder());
        Matrix c = devectorize(sides, dn, dn) * side.matrix().conjugate();
        for (const auto &blk : side.blocks()) {
            Matrix f(dn * blk.dim_v, blk.dim_w);
            for (Index a = 0; a < dn; ++a)
                for (Index v = 0; v < blk.dim_v; ++v)
                    for (Index w = 0; w < blk.dim_w; ++w) f(a * blk.dim_v + v, w) = c(a, blk.column(v, w));
            Matrix m = f * f.adjoint();
            blocks_.push_back(hermitian_part(stabilizer_twirl_middle(m, n, d_, 1, blk.dim_v)));
        }
    }

    std::size_t copies() const { return n_; }
    std::size_t local_dim() const { return d_; }
    const BipartiteSchurBasis &basis() const { return *basis_; }
    const std::vector<Matrix> &blocks() const { return blocks_; }

    Matrix reduced_a() const {
        const Index dn = basis_->side_dim();
        Matrix out = Matrix::Zero(dn, dn);
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const auto dv = static_cast<std::size_t>(basis_->side().block(b).dim_v);
            out += partial_trace(blocks_[b], {static_cast<std::size_t>(dn), dv}, {0});
        }
        return out;
    }

    double trace() const {
        double t = 0.0;
        for (const auto &m : blocks_) t += m.trace().real();
        return t;
    }

    // Dense operator on A1 B1 ... AN BN.
    Matrix dense() const {
        const auto &side = basis_->side();
        const Index dn = side.dim();
        Matrix y = Matrix::Zero(dn * dn, dn * dn);
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const auto &blk = side.block(b);
            const double inv = 1.0 / static_cast<double>(blk.dim_w);
            const Matrix &m = blocks_[b];
            for (Index a = 0; a < dn; ++a)
                for (Index a2 = 0; a2 < dn; ++a2)
                    for (Index v = 0; v < blk.dim_v; ++v)
                        for (Index v2 = 0; v2 < blk.dim_v; ++v2) {
                            const cplx e = m(a * blk.dim_v + v, a2 * blk.dim_v + v2) * inv;
                            for (Index w = 0; w < blk.dim_w; ++w) y(a * dn + blk.column(v, w), a2 * dn + blk.column(v2, w)) = e;
                        }
        }
        y = left_mul_middle(side.matrix(), y, dn, 1);
        y = right_mul_middle(y, side.matrix().adjoint(), dn, 1);
        return basis_->reorder_to_copies(y);
    }

private:
    std::size_t n_, d_;
    std::shared_ptr<const BipartiteSchurBasis> basis_;
    std::vector<Matrix> blocks_;
};

struct TwirledPair {
    TwirledState rho0;
    TwirledState sigma0;
    std::size_t copies() const { return rho0.copies(); }

    double trace_distance() const {
        double t = 0.0;
        for (std::size_t b = 0; b < rho0.blocks().size(); ++b) t += trace_norm_hermitian(rho0.blocks()[b] - sigma0.blocks()[b]);
        return 0.5 * t;
    }
    double reduced_trace_distance() const { return loctest::trace_distance(rho0.reduced_a(), sigma0.reduced_a()); }
};

inline TwirledPair twirled_pair(const HardInstance &inst, std::size_t n) {
    return TwirledPair{TwirledState(inst.psi, n), TwirledState(inst.phi, n)};
}

// Average of (U tau U^dag)^{(x)N} over U in G.
inline Matrix stabilizer_averaged_power(const Matrix &tau, std::size_t n) {
    return stabilizer_twirl(kron_power(tau, n), n, static_cast<std::size_t>(tau.rows()));
}

struct BoundCheck {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    double margin() const { return rhs - lhs; }
    bool holds(double tol = 1e-12) const { return margin() >= -tol; }
};

struct DistanceReport {
    std::size_t copies = 0, r = 0, d = 0;
    double theta = 0.0;
    BoundCheck lemma;   // d_tr(rho0, sigma0) <= 4 sqrt2 N theta / r min(N theta, 1)
    BoundCheck tau;     // d_tr of G-averaged tau powers <= sqrt2 (N/(r-1) + N/(d-1))
    double full_distance = 0.0;
    double reduced_distance = 0.0;
    double reduced_gap() const { return std::abs(full_distance - reduced_distance); }
    bool holds() const { return lemma.holds() && tau.holds() && reduced_gap() <= 1e-9; }
};

inline DistanceReport verify_distance_bounds(const TwirledPair &pair, const HardInstance &inst) {
    DistanceReport rep;
    const auto n = pair.copies();
    const double nd = static_cast<double>(n);
    rep.copies = n;
    rep.r = inst.r;
    rep.d = inst.d;
    rep.theta = inst.theta;
    rep.full_distance = pair.trace_distance();
    rep.reduced_distance = pair.reduced_trace_distance();
    rep.lemma = {"twirled_pair_distance", rep.full_distance,
                 4.0 * std::sqrt(2.0) * nd * inst.theta / static_cast<double>(inst.r) * std::min(nd * inst.theta, 1.0)};
    const double tau_lhs = trace_distance(stabilizer_averaged_power(tau_state(inst.r, inst.d), n),
                                          stabilizer_averaged_power(tau_state(inst.d, inst.d), n));
    rep.tau = {"tau_average_distance", tau_lhs,
               std::sqrt(2.0) * (nd / static_cast<double>(inst.r - 1) + nd / static_cast<double>(inst.d - 1))};
    return rep;
}

struct HelstromResult {
    double success = 0.5;
    Matrix povm; // projector onto the positive part of rho - sigma
    double achieved = 0.5;
};

inline HelstromResult helstrom_bound(const Matrix &rho, const Matrix &sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw std::invalid_argument("helstrom_bound: shape mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rho - sigma));
    HelstromResult out;
    out.povm = Matrix::Zero(rho.rows(), rho.cols());
    for (Index i = 0; i < rho.rows(); ++i)
        if (es.eigenvalues()(i) > 0.0) out.povm += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    out.success = 0.5 * (1.0 + 0.5 * es.eigenvalues().cwiseAbs().sum());
    const Matrix id = Matrix::Identity(rho.rows(), rho.cols());
    out.achieved = 0.5 * (out.povm * rho).trace().real() + 0.5 * ((id - out.povm) * sigma).trace().real();
    return out;
}

inline Matrix appendix_state(double x) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0 - x;
    m(1, 1) = x;
    return m;
}

struct PurityCurveRow {
    std::size_t s = 0;
    double fidelity_sq = 1.0;
    double closed_form = 1.0;
    double success_bound = 0.5;
};

// F(rho_0^S, rho_eps^S)^2 by direct computation: dense for S <= 6, diagonal enumeration beyond.
inline std::vector<PurityCurveRow> purity_lower_bound_curve(double eps, std::size_t s_max) {
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("purity_lower_bound_curve: need 0 <= eps < 1");
    if (s_max > 24) throw std::invalid_argument("purity_lower_bound_curve: S_max > 24");
    std::vector<PurityCurveRow> rows;
    const Matrix r0 = appendix_state(0.0), re = appendix_state(eps);
    for (std::size_t s = 0; s <= s_max; ++s) {
        PurityCurveRow row;
        row.s = s;
        if (s <= 6) {
            row.fidelity_sq = std::pow(fidelity(kron_power(r0, s), kron_power(re, s)), 2);
        } else {
            double f = 0.0;
            const std::size_t total = std::size_t{1} << s;
            for (std::size_t x = 0; x < total; ++x) {
                double p = 1.0, q = 1.0;
                for (std::size_t k = 0; k < s; ++k) {
                    const bool one = ((x >> k) & 1u) != 0;
                    p *= one ? 0.0 : 1.0;
                    q *= one ? eps : 1.0 - eps;
                }
                f += std::sqrt(p * q);
            }
            row.fidelity_sq = f * f;
        }
        row.closed_form = std::pow(1.0 - eps, static_cast<double>(s));
        row.success_bound = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - row.fidelity_sq)));
        rows.push_back(row);
    }
    return rows;
}

} // namespace loctest
