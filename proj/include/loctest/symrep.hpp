#pragma once

#include "hilbert.hpp"
#include "young.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace loctest {

// One-line notation on {0..N-1}: position m is sent to images()[m].
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<std::size_t> images) : img_(std::move(images)) {
        std::vector<bool> seen(img_.size(), false);
        for (auto p : img_) {
            if (p >= img_.size() || seen[p]) throw std::invalid_argument("Permutation: not a bijection");
            seen[p] = true;
        }
    }
    Permutation(std::initializer_list<std::size_t> images) : Permutation(std::vector<std::size_t>(images)) {}

    static Permutation identity(std::size_t n) {
        std::vector<std::size_t> v(n);
        std::iota(v.begin(), v.end(), 0);
        return Permutation(std::move(v));
    }
    static Permutation transposition(std::size_t n, std::size_t i, std::size_t j) {
        auto p = identity(n);
        std::swap(p.img_.at(i), p.img_.at(j));
        return p;
    }
    static Permutation adjacent(std::size_t n, std::size_t k) { return transposition(n, k, k + 1); }

    // All N! permutations in lexicographic order of their one-line form.
    static std::vector<Permutation> all(std::size_t n) {
        std::vector<std::size_t> v(n);
        std::iota(v.begin(), v.end(), 0);
        std::vector<Permutation> out;
        do {
            out.emplace_back(v);
        } while (std::next_permutation(v.begin(), v.end()));
        return out;
    }

    std::size_t size() const { return img_.size(); }
    std::size_t operator()(std::size_t i) const { return img_.at(i); }
    const std::vector<std::size_t> &images() const { return img_; }

    // (p * q)(i) = p(q(i))
    Permutation operator*(const Permutation &q) const {
        if (q.size() != size()) throw std::invalid_argument("Permutation: size mismatch");
        std::vector<std::size_t> v(size());
        for (std::size_t i = 0; i < size(); ++i) v[i] = img_[q.img_[i]];
        return Permutation(std::move(v));
    }
    Permutation inverse() const {
        std::vector<std::size_t> v(size());
        for (std::size_t i = 0; i < size(); ++i) v[img_[i]] = i;
        return Permutation(std::move(v));
    }
    bool is_identity() const {
        for (std::size_t i = 0; i < size(); ++i)
            if (img_[i] != i) return false;
        return true;
    }
    std::size_t cycle_count() const {
        std::vector<bool> seen(size(), false);
        std::size_t c = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            if (seen[i]) continue;
            ++c;
            for (std::size_t j = i; !seen[j]; j = img_[j]) seen[j] = true;
        }
        return c;
    }
    // Generators k_1, k_2, ... with this = s_{k_m} ... s_{k_2} s_{k_1}.
    std::vector<std::size_t> descent_word() const {
        std::vector<std::size_t> w;
        auto cur = img_;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
                if (cur[k] > cur[k + 1]) {
                    std::swap(cur[k], cur[k + 1]);
                    w.push_back(k);
                    changed = true;
                    break;
                }
            }
        }
        return w;
    }
    bool operator==(const Permutation &) const = default;

private:
    std::vector<std::size_t> img_;
};

// P(pi)|x_0 ... x_{N-1}> places factor m at position pi(m).
inline Matrix perm_action(const Permutation &pi, std::size_t d) {
    std::vector<std::size_t> dims(pi.size(), d);
    auto map = factor_permutation_map(dims, pi.images());
    const auto dim = static_cast<Index>(map.size());
    Matrix p = Matrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) p(static_cast<Index>(map[static_cast<std::size_t>(i)]), i) = 1.0;
    return p;
}

inline Operator perm_action(const Permutation &pi, std::size_t n, std::size_t d) {
    if (pi.size() != n) throw std::invalid_argument("perm_action: permutation size differs from N");
    return Operator(perm_action(pi, d), SystemLayout::uniform(n, d));
}

// Permutation of the 2N factors A1 B1 ... AN BN induced by permuting the N copies.
inline Permutation doubled_permutation(const Permutation &pi) {
    std::vector<std::size_t> v(2 * pi.size());
    for (std::size_t m = 0; m < pi.size(); ++m) {
        v[2 * m] = 2 * pi(m);
        v[2 * m + 1] = 2 * pi(m) + 1;
    }
    return Permutation(std::move(v));
}

inline Operator simultaneous_perm(const Permutation &pi, std::size_t n, std::size_t d) {
    if (pi.size() != n) throw std::invalid_argument("simultaneous_perm: permutation size differs from N");
    return Operator(perm_action(doubled_permutation(pi), d), SystemLayout::bipartite_copies(n, d));
}

// Young's orthogonal form for one partition.
class SymIrrep {
public:
    explicit SymIrrep(YoungDiagram lambda) : lambda_(std::move(lambda)), tableaux_(standard_tableaux(lambda_)) {
        const int n = lambda_.size();
        const auto dim = static_cast<Index>(tableaux_.size());
        std::map<std::vector<std::vector<int>>, Index> index;
        for (Index t = 0; t < dim; ++t) index[tableaux_[static_cast<std::size_t>(t)].filling()] = t;
        for (int k = 0; k + 1 < n; ++k) {
            const int a = k + 1, b = k + 2;
            RealMatrix g = RealMatrix::Zero(dim, dim);
            for (Index t = 0; t < dim; ++t) {
                const auto &tab = tableaux_[static_cast<std::size_t>(t)];
                auto [ra, ca] = tab.position(a);
                auto [rb, cb] = tab.position(b);
                if (ra == rb) {
                    g(t, t) = 1.0;
                } else if (ca == cb) {
                    g(t, t) = -1.0;
                } else {
                    const double rho = static_cast<double>(tab.content(b) - tab.content(a));
                    auto f = tab.filling();
                    std::swap(f[static_cast<std::size_t>(ra)][static_cast<std::size_t>(ca)],
                              f[static_cast<std::size_t>(rb)][static_cast<std::size_t>(cb)]);
                    g(t, t) = 1.0 / rho;
                    g(index.at(f), t) = std::sqrt(1.0 - 1.0 / (rho * rho));
                }
            }
            generators_.push_back(std::move(g));
        }
    }

    const YoungDiagram &diagram() const { return lambda_; }
    Index dim() const { return static_cast<Index>(tableaux_.size()); }
    const std::vector<StandardTableau> &tableaux() const { return tableaux_; }
    const RealMatrix &generator(std::size_t k) const { return generators_.at(k); }
    std::size_t copies() const { return static_cast<std::size_t>(lambda_.size()); }

    RealMatrix matrix(const Permutation &pi) const {
        if (pi.size() != copies()) throw std::invalid_argument("sym_irrep_matrix: size mismatch");
        RealMatrix m = RealMatrix::Identity(dim(), dim());
        for (auto k : pi.descent_word()) m = generators_[k] * m;
        return m;
    }
    RealVector apply(const Permutation &pi, RealVector v) const {
        if (pi.size() != copies()) throw std::invalid_argument("sym_irrep_matrix: size mismatch");
        for (auto k : pi.descent_word()) v = generators_[k] * v;
        return v;
    }

private:
    YoungDiagram lambda_;
    std::vector<StandardTableau> tableaux_;
    std::vector<RealMatrix> generators_;
};

inline std::shared_ptr<const SymIrrep> sym_irrep(const YoungDiagram &lambda) {
    static std::mutex mu;
    static std::map<YoungDiagram, std::shared_ptr<const SymIrrep>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(lambda);
    if (it != cache.end()) return it->second;
    auto h = std::make_shared<const SymIrrep>(lambda);
    cache.emplace(lambda, h);
    return h;
}

inline RealMatrix sym_irrep_matrix(const YoungDiagram &lambda, const Permutation &pi) {
    if (static_cast<std::size_t>(lambda.size()) != pi.size()) throw std::invalid_argument("sym_irrep_matrix: size mismatch");
    return sym_irrep(lambda)->matrix(pi);
}

} // namespace loctest
