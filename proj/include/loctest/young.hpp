#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loctest {

class YoungDiagram {
public:
    YoungDiagram() = default;
    explicit YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i] <= 0) throw std::invalid_argument("YoungDiagram: rows must be positive");
            if (i > 0 && rows_[i] > rows_[i - 1]) throw std::invalid_argument("YoungDiagram: rows must be weakly decreasing");
        }
    }
    YoungDiagram(std::initializer_list<int> rows) : YoungDiagram(std::vector<int>(rows)) {}

    const std::vector<int> &rows() const { return rows_; }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    int row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }
    int size() const { return std::accumulate(rows_.begin(), rows_.end(), 0); }
    int column_length(int j) const {
        int c = 0;
        for (int r : rows_) c += (r > j) ? 1 : 0;
        return c;
    }
    int hook(int i, int j) const { return row(i) - j + column_length(j) - i - 1; }

    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_.size(); ++i) os << (i ? "," : "") << rows_[i];
        os << ']';
        return os.str();
    }

    auto operator<=>(const YoungDiagram &) const = default;

private:
    std::vector<int> rows_;
};

namespace detail {
inline void partitions_rec(int remaining, int max_part, int rows_left, std::vector<int> &cur,
                           std::vector<YoungDiagram> &out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (rows_left == 0) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_rec(remaining - p, p, rows_left - 1, cur, out);
        cur.pop_back();
    }
}
} // namespace detail

// Lexicographically descending.
inline std::vector<YoungDiagram> enumerate_partitions(int n, int d) {
    if (n < 1 || d < 1) throw std::invalid_argument("enumerate_partitions: need N >= 1, d >= 1");
    std::vector<YoungDiagram> out;
    std::vector<int> cur;
    detail::partitions_rec(n, n, d, cur, out);
    return out;
}

inline std::uint64_t dim_sym_irrep(const YoungDiagram &lambda) {
    const int n = lambda.size();
    if (n > 20) throw std::invalid_argument("dim_sym_irrep: N > 20 overflows");
    std::vector<std::uint64_t> hooks;
    for (int i = 0; i < lambda.num_rows(); ++i)
        for (int j = 0; j < lambda.row(i); ++j) hooks.push_back(static_cast<std::uint64_t>(lambda.hook(i, j)));
    unsigned __int128 num = 1, den = 1;
    for (int k = 2; k <= n; ++k) num *= static_cast<unsigned>(k);
    for (auto h : hooks) den *= h;
    return static_cast<std::uint64_t>(num / den);
}

inline std::uint64_t dim_unitary_irrep(const YoungDiagram &lambda, int d) {
    if (lambda.num_rows() > d) return 0;
    auto gcd128 = [](unsigned __int128 a, unsigned __int128 b) {
        while (b != 0) {
            auto t = a % b;
            a = b;
            b = t;
        }
        return a;
    };
    unsigned __int128 num = 1, den = 1;
    for (int i = 0; i < lambda.num_rows(); ++i)
        for (int j = 0; j < lambda.row(i); ++j) {
            num *= static_cast<unsigned>(d + j - i);
            den *= static_cast<unsigned>(lambda.hook(i, j));
            auto g = gcd128(num, den);
            num /= g;
            den /= g;
        }
    if (den != 1) throw std::logic_error("dim_unitary_irrep: non-integral result");
    return static_cast<std::uint64_t>(num);
}

class StandardTableau {
public:
    StandardTableau() = default;
    explicit StandardTableau(std::vector<std::vector<int>> filling) : filling_(std::move(filling)) {
        int n = 0;
        for (const auto &r : filling_) n += static_cast<int>(r.size());
        std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
        for (std::size_t i = 0; i < filling_.size(); ++i)
            for (std::size_t j = 0; j < filling_[i].size(); ++j) {
                int v = filling_[i][j];
                if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) throw std::invalid_argument("StandardTableau: bad entries");
                seen[static_cast<std::size_t>(v)] = true;
                if (j > 0 && filling_[i][j - 1] >= v) throw std::invalid_argument("StandardTableau: row not increasing");
                if (i > 0 && (j >= filling_[i - 1].size() || filling_[i - 1][j] >= v))
                    throw std::invalid_argument("StandardTableau: column not increasing");
            }
        pos_.assign(static_cast<std::size_t>(n) + 1, {0, 0});
        for (std::size_t i = 0; i < filling_.size(); ++i)
            for (std::size_t j = 0; j < filling_[i].size(); ++j)
                pos_[static_cast<std::size_t>(filling_[i][j])] = {static_cast<int>(i), static_cast<int>(j)};
    }

    const std::vector<std::vector<int>> &filling() const { return filling_; }
    std::pair<int, int> position(int k) const { return pos_.at(static_cast<std::size_t>(k)); }
    int content(int k) const {
        auto [r, c] = position(k);
        return c - r;
    }
    std::vector<int> reading_word() const {
        std::vector<int> w;
        for (const auto &r : filling_) w.insert(w.end(), r.begin(), r.end());
        return w;
    }
    bool operator==(const StandardTableau &o) const { return filling_ == o.filling_; }

private:
    std::vector<std::vector<int>> filling_;
    std::vector<std::pair<int, int>> pos_;
};

// Exhaustive, ordered by row-reading word (lexicographic ascending).
inline std::vector<StandardTableau> standard_tableaux(const YoungDiagram &lambda) {
    const int n = lambda.size();
    if (n > 10) throw std::invalid_argument("standard_tableaux: N > 10");
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(lambda.num_rows()));
    std::vector<StandardTableau> out;
    // Place 1..n one at a time at outer corners of the growing shape.
    auto rec = [&](auto &&self, int k) -> void {
        if (k > n) {
            out.emplace_back(grid);
            return;
        }
        for (int i = 0; i < lambda.num_rows(); ++i) {
            auto &row = grid[static_cast<std::size_t>(i)];
            if (static_cast<int>(row.size()) >= lambda.row(i)) continue;
            if (i > 0 && grid[static_cast<std::size_t>(i - 1)].size() <= row.size()) continue;
            row.push_back(k);
            self(self, k + 1);
            row.pop_back();
        }
    };
    rec(rec, 1);
    std::sort(out.begin(), out.end(), [](const StandardTableau &a, const StandardTableau &b) {
        return a.reading_word() < b.reading_word();
    });
    return out;
}

} // namespace loctest
