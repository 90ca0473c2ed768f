#include "loctest/young.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace loctest;

TEST(Partitions, Enumeration) {
    EXPECT_EQ(enumerate_partitions(4, 2), (std::vector<YoungDiagram>{{4}, {3, 1}, {2, 2}}));
    EXPECT_EQ(enumerate_partitions(3, 1), (std::vector<YoungDiagram>{{3}}));
    EXPECT_EQ(enumerate_partitions(2, 2), (std::vector<YoungDiagram>{{2}, {1, 1}}));
    EXPECT_EQ(enumerate_partitions(5, 5).size(), 7u);
    EXPECT_EQ(enumerate_partitions(6, 6).size(), 11u);
    EXPECT_THROW(enumerate_partitions(0, 2), std::invalid_argument);
    EXPECT_THROW(enumerate_partitions(2, 0), std::invalid_argument);
}

TEST(Partitions, RejectsMalformedDiagram) {
    EXPECT_THROW(YoungDiagram({1, 2}), std::invalid_argument);
    EXPECT_THROW(YoungDiagram({2, 0}), std::invalid_argument);
}

TEST(SymmetricGroupDimension, KnownValues) {
    EXPECT_EQ(dim_sym_irrep({5}), 1u);
    EXPECT_EQ(dim_sym_irrep({1, 1, 1, 1}), 1u);
    EXPECT_EQ(dim_sym_irrep({4, 3, 1}), 70u);
    EXPECT_THROW(dim_sym_irrep(YoungDiagram(std::vector<int>(21, 1))), std::invalid_argument);
}

TEST(SymmetricGroupDimension, HookFormulaMatchesBruteForceCount) {
    for (int n = 1; n <= 7; ++n)
        for (const auto &l : enumerate_partitions(n, n)) EXPECT_EQ(dim_sym_irrep(l), oracle::count_standard_bruteforce(l.rows())) << l.to_string();
}

TEST(SymmetricGroupDimension, SumOfSquaresIsFactorial) {
    std::uint64_t fact = 1;
    for (int n = 1; n <= 9; ++n) {
        fact *= static_cast<std::uint64_t>(n);
        std::uint64_t s = 0;
        for (const auto &l : enumerate_partitions(n, n)) s += dim_sym_irrep(l) * dim_sym_irrep(l);
        EXPECT_EQ(s, fact);
    }
}

TEST(UnitaryGroupDimension, KnownValues) {
    EXPECT_EQ(dim_unitary_irrep({2}, 2), 3u);
    EXPECT_EQ(dim_unitary_irrep({1, 1}, 2), 1u);
    EXPECT_EQ(dim_unitary_irrep({4}, 1), 1u);
    EXPECT_EQ(dim_unitary_irrep({1, 1, 1}, 2), 0u);
}

TEST(UnitaryGroupDimension, ContentFormulaMatchesSemistandardCount) {
    for (int d = 1; d <= 4; ++d)
        for (int n = 1; n <= 5; ++n)
            for (const auto &l : enumerate_partitions(n, n))
                EXPECT_EQ(dim_unitary_irrep(l, d), oracle::count_ssyt(l.rows(), d)) << l.to_string() << " d=" << d;
}

TEST(UnitaryGroupDimension, SchurWeylCount) {
    for (int d = 1; d <= 4; ++d)
        for (int n = 1; n <= 6; ++n) {
            std::uint64_t s = 0, dn = 1;
            for (int i = 0; i < n; ++i) dn *= static_cast<std::uint64_t>(d);
            for (const auto &l : enumerate_partitions(n, d)) s += dim_sym_irrep(l) * dim_unitary_irrep(l, d);
            EXPECT_EQ(s, dn);
        }
}

TEST(StandardTableaux, Enumeration) {
    EXPECT_EQ(standard_tableaux({2, 1}).size(), 2u);
    EXPECT_EQ(standard_tableaux({3}).size(), 1u);
    EXPECT_EQ(standard_tableaux({2, 2}).size(), 2u);
    auto ts = standard_tableaux({2, 1});
    EXPECT_EQ(ts[0].filling(), (std::vector<std::vector<int>>{{1, 2}, {3}}));
    EXPECT_EQ(ts[1].filling(), (std::vector<std::vector<int>>{{1, 3}, {2}}));
    for (int n = 1; n <= 6; ++n)
        for (const auto &l : enumerate_partitions(n, n)) EXPECT_EQ(standard_tableaux(l).size(), dim_sym_irrep(l));
}

TEST(StandardTableaux, ContentAndValidation) {
    StandardTableau t({{1, 2, 4}, {3}});
    EXPECT_EQ(t.content(1), 0);
    EXPECT_EQ(t.content(4), 2);
    EXPECT_EQ(t.content(3), -1);
    EXPECT_THROW(StandardTableau({{2, 1}}), std::invalid_argument);
    EXPECT_THROW(StandardTableau({{1, 4}, {2, 3}}), std::invalid_argument);
}
