#pragma once

#include "hilbert.hpp"

#include <cstdint>
#include <random>

namespace loctest {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream for (seed, a, b); used for per-shot and per-grid-point generators.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (a + 0x632be59bd9b4e019ULL));
    return splitmix64(s ^ (b + 0x2545f4914f6cdd1dULL));
}

inline Rng stream_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
    return Rng(stream_seed(seed, a, b));
}

inline Matrix ginibre(Index rows, Index cols, Rng &rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            double re = g(rng);
            double im = g(rng);
            m(i, j) = cplx(re, im);
        }
    return m;
}

inline Matrix haar_unitary(Index d, Rng &rng) {
    Matrix z = ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < d; ++k) {
        cplx rk = r(k, k);
        double a = std::abs(rk);
        q.col(k) *= (a > 0 ? rk / a : cplx(1.0));
    }
    return q;
}

inline Vector haar_state(Index dim, Rng &rng) {
    Vector v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

// Random density operator of the given rank (induced measure).
inline Matrix random_density(Index dim, Index rank, Rng &rng) {
    Matrix g = ginibre(dim, rank, rng);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline Matrix random_density(Index dim, Rng &rng) { return random_density(dim, dim, rng); }

inline Matrix random_hermitian(Index dim, Rng &rng) {
    Matrix g = ginibre(dim, dim, rng);
    return hermitian_part(g);
}

// Random 0 <= T <= I: Haar eigenbasis, eigenvalues uniform on [0,1].
inline Matrix random_povm_element(Index dim, Rng &rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix v = haar_unitary(dim, rng);
    RealVector ev(dim);
    for (Index i = 0; i < dim; ++i) ev(i) = u(rng);
    return v * ev.cast<cplx>().asDiagonal() * v.adjoint();
}

inline RealVector random_probability_vector(Index n, Rng &rng) {
    std::exponential_distribution<double> e(1.0);
    RealVector p(n);
    for (Index i = 0; i < n; ++i) p(i) = e(rng);
    return p / p.sum();
}

} // namespace loctest
