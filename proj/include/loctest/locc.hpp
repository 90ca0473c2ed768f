#pragma once

#include "testers.hpp"

#include "json.hpp"

#include <limits>
#include <sstream>

namespace loctest {

inline Operator l_lambda(std::size_t dim) {
    return Operator(l_lambda_matrix(static_cast<Index>(dim)), SystemLayout::uniform(2, dim));
}

struct ShotRecord {
    std::uint64_t shot = 0;
    std::uint64_t digest = 0; // seed of the per-shot stream that drew Bob's unitaries
    int lambda_b = -1;
    int i_b = -1;
    int lambda_a = -1;        // -1 when Alice rejects
    int i_a = -1;
    bool accept = false;
};

struct LoccTranscript {
    std::uint64_t seed = 0;
    std::vector<YoungDiagram> diagrams; // lambda indices in shot records refer to this list
    std::vector<ShotRecord> shots;

    std::string to_jsonl() const {
        std::ostringstream os;
        for (const auto &s : shots) {
            nlohmann::ordered_json j;
            j["shot"] = s.shot;
            j["seed"] = seed;
            j["digest"] = s.digest;
            j["lambda_b"] = diagrams.at(static_cast<std::size_t>(s.lambda_b)).rows();
            j["i_b"] = s.i_b;
            j["lambda_a"] = s.lambda_a < 0 ? nlohmann::ordered_json(nullptr)
                                           : nlohmann::ordered_json(diagrams.at(static_cast<std::size_t>(s.lambda_a)).rows());
            j["i_a"] = s.i_a;
            j["accept"] = s.accept;
            os << j.dump() << '\n';
        }
        return os.str();
    }
};

struct LoccSimulation {
    double acceptance = 0.0;
    LoccTranscript transcript;
};

namespace detail {
inline std::size_t sample_index(const std::vector<double> &w, Rng &rng) {
    double total = 0.0;
    for (double x : w) total += x;
    std::uniform_real_distribution<double> u(0.0, total);
    double r = u(rng), acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        if (r < acc) return i;
    }
    return w.size() - 1;
}
} // namespace detail

// Bob measures each lambda block in a Haar-rotated basis conj(U)|i>, Alice measures U|i><i|U^dag (x) K_lambda.
inline LoccSimulation simulate_one_way_locc(const Tester &t, const Matrix &rho, std::size_t shots, std::uint64_t seed) {
    const auto n = t.copies(), d = t.local_dim();
    require_density(rho, static_cast<Index>(d * d));
    const LoccMeasurement meas = locc_measurement(t);
    for (const auto &lb : meas.blocks)
        if (hermitian_eigenvalues(lb.alice).maxCoeff() > 1.0 + 1e-9)
            throw VerificationError("simulate_one_way_locc: non-normalizable measurement residue");

    auto basis = build_bipartite_basis(n, d);
    const auto &side = basis->side();
    const Index dn = side.dim();
    Matrix rs = basis->to_schur(kron_power(rho, n));

    // x[b] acts on (A Schur index) (x) V_{b,B}, after tracing W_{b,B}
    std::vector<Matrix> x;
    std::vector<Matrix> bob;
    for (const auto &blk : side.blocks()) {
        Matrix xb = Matrix::Zero(dn * blk.dim_v, dn * blk.dim_v);
        for (Index ia = 0; ia < dn; ++ia)
            for (Index ia2 = 0; ia2 < dn; ++ia2)
                for (Index v = 0; v < blk.dim_v; ++v)
                    for (Index v2 = 0; v2 < blk.dim_v; ++v2) {
                        cplx s = 0.0;
                        for (Index w = 0; w < blk.dim_w; ++w) s += rs(ia * dn + blk.column(v, w), ia2 * dn + blk.column(v2, w));
                        xb(ia * blk.dim_v + v, ia2 * blk.dim_v + v2) = s;
                    }
        bob.push_back(partial_trace(xb, {static_cast<std::size_t>(dn), static_cast<std::size_t>(blk.dim_v)}, {1}));
        x.push_back(std::move(xb));
    }

    LoccSimulation out;
    out.transcript.seed = seed;
    for (const auto &blk : side.blocks()) out.transcript.diagrams.push_back(blk.lambda);
    std::size_t accepted = 0;
    const std::size_t nb = side.blocks().size();
    for (std::size_t s = 0; s < shots; ++s) {
        ShotRecord rec;
        rec.shot = s;
        rec.digest = stream_seed(seed, s, 0);
        Rng rng(rec.digest);
        std::vector<Matrix> us;
        for (const auto &blk : side.blocks()) us.push_back(haar_unitary(blk.dim_v, rng));

        std::vector<double> pb;
        std::vector<std::pair<std::size_t, Index>> outcomes;
        for (std::size_t b = 0; b < nb; ++b)
            for (Index i = 0; i < side.block(b).dim_v; ++i) {
                Vector u = us[b].col(i).conjugate();
                pb.push_back(std::max(0.0, u.dot(bob[b] * u).real()));
                outcomes.emplace_back(b, i);
            }
        auto [bb, ib] = outcomes[detail::sample_index(pb, rng)];
        rec.lambda_b = static_cast<int>(bb);
        rec.i_b = static_cast<int>(ib);

        const auto &bblk = side.block(bb);
        Vector ub = us[bb].col(ib);
        Matrix cond = Matrix::Zero(dn, dn);
        for (Index ia = 0; ia < dn; ++ia)
            for (Index ia2 = 0; ia2 < dn; ++ia2) {
                cplx sacc = 0.0;
                for (Index v = 0; v < bblk.dim_v; ++v)
                    for (Index v2 = 0; v2 < bblk.dim_v; ++v2)
                        sacc += ub(v) * x[bb](ia * bblk.dim_v + v, ia2 * bblk.dim_v + v2) * std::conj(ub(v2));
                cond(ia, ia2) = sacc;
            }
        cond /= cond.trace().real();

        std::vector<double> pa;
        std::vector<std::pair<int, int>> aout;
        double used = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const auto &blk = side.block(b);
            const Matrix &k = meas.blocks[b].alice;
            for (Index i = 0; i < blk.dim_v; ++i) {
                Vector u = us[b].col(i);
                cplx q = 0.0;
                for (Index v = 0; v < blk.dim_v; ++v)
                    for (Index v2 = 0; v2 < blk.dim_v; ++v2)
                        for (Index w = 0; w < blk.dim_w; ++w)
                            for (Index w2 = 0; w2 < blk.dim_w; ++w2)
                                q += u(v) * std::conj(u(v2)) * k(w, w2) * cond(blk.column(v2, w2), blk.column(v, w));
                const double qr = std::max(0.0, q.real());
                pa.push_back(qr);
                used += qr;
                aout.emplace_back(static_cast<int>(b), static_cast<int>(i));
            }
        }
        if (used > 1.0 + 1e-9) throw VerificationError("simulate_one_way_locc: non-normalizable measurement residue");
        pa.push_back(std::max(0.0, 1.0 - used));
        aout.emplace_back(-1, -1);
        auto [la, ia] = aout[detail::sample_index(pa, rng)];
        rec.lambda_a = la;
        rec.i_a = ia;
        rec.accept = la == rec.lambda_b && ia == rec.i_b;
        accepted += rec.accept ? 1 : 0;
        out.transcript.shots.push_back(rec);
    }
    out.acceptance = shots == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(shots);
    return out;
}

struct AmplifierConfig {
    double c = 0.0, s = 0.0;
    std::uint64_t n = 0;
    double t = 0.0;
    // distance from the threshold to c and to (s+c)/2
    double delta() const { return (c - s) / 4.0; }
};

inline AmplifierConfig amplification_schedule(double c, double s) {
    if (!(0.0 < s && s < c && c <= 1.0)) throw std::invalid_argument("amplification_schedule: need 0 < s < c <= 1");
    AmplifierConfig a;
    a.c = c;
    a.s = s;
    a.n = static_cast<std::uint64_t>(std::ceil(100.0 * std::log(1.0 / s + 10.0) / std::pow(c - s, 3)));
    a.t = 0.75 * c + 0.25 * s;
    return a;
}

enum class Tail { AtLeast, Below };

inline double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
    const double nn = static_cast<double>(n), kk = static_cast<double>(k);
    return std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + kk * std::log(p) + (nn - kk) * std::log1p(-p);
}

// Smallest k with k/n >= t.
inline std::uint64_t threshold_count(std::uint64_t n, double t) {
    if (t <= 0.0) return 0;
    auto k = static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * t));
    while (k > 0 && static_cast<double>(k - 1) / static_cast<double>(n) >= t) --k;
    while (k <= n && static_cast<double>(k) / static_cast<double>(n) < t) ++k;
    return k;
}

// Pr[mean >= t] or Pr[mean < t] for n Bernoulli(p) trials, summed in log space.
inline double amplified_error_exact(double p, std::uint64_t n, double t, Tail tail = Tail::AtLeast) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("amplified_error_exact: p outside [0,1]");
    const std::uint64_t kmin = threshold_count(n, t);
    if (p == 0.0 || p == 1.0) {
        const std::uint64_t k = p == 0.0 ? 0 : n;
        const bool at_least = k >= kmin;
        return (tail == Tail::AtLeast) == at_least ? 1.0 : 0.0;
    }
    std::uint64_t lo = tail == Tail::AtLeast ? kmin : 0;
    std::uint64_t hi = tail == Tail::AtLeast ? n : (kmin == 0 ? 0 : kmin - 1);
    if (tail == Tail::Below && kmin == 0) return 0.0;
    if (lo > hi) return 0.0;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::uint64_t k = lo; k <= hi; ++k) mx = std::max(mx, log_binomial_pmf(n, k, p));
    double acc = 0.0;
    for (std::uint64_t k = lo; k <= hi; ++k) acc += std::exp(log_binomial_pmf(n, k, p) - mx);
    return std::min(1.0, std::exp(mx + std::log(acc)));
}

inline double hoeffding_bound(std::uint64_t n, double gap) {
    return std::exp(-2.0 * static_cast<double>(n) * gap * gap);
}

inline double kl_bernoulli(double a, double b) {
    auto term = [](double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); };
    return term(a, b) + term(1.0 - a, 1.0 - b);
}

// exp(-n D(t || p)) for the tail on the far side of t from p.
inline double chernoff_kl_bound(std::uint64_t n, double t, double p) {
    return std::exp(-static_cast<double>(n) * kl_bernoulli(t, p));
}

} // namespace loctest
