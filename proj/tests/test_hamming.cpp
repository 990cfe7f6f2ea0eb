#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cubetree/hamming.hpp"

using namespace cubetree;

TEST(Point, CanonicalForm) {
    Point p{7, 3, 3, 1};
    EXPECT_EQ(p.str(), "[1,3,7]");
    EXPECT_EQ(Point{}.str(), "[]");
    EXPECT_THROW(Point({0, 2}), DomainError);
}

TEST(Distance, Examples) {
    EXPECT_EQ(distance(Point{1, 2}, Point{2, 3}), 2);
    EXPECT_EQ(distance(Point{1, 3, 7}, Point{1, 3, 7}), 0);
    EXPECT_EQ(distance(Point{}, Point{5, 9}), 2);
}

TEST(Distance, MetricAxiomsOnAllTriples) {
    auto pts = collect(enumerate_delta_k(5, Universe{5}));
    ASSERT_EQ(pts.size(), 32u);
    for (const auto& a : pts) {
        for (const auto& b : pts) {
            auto dab = distance(a, b);
            EXPECT_EQ(dab, distance(b, a));
            EXPECT_EQ(dab == 0, a == b);
            EXPECT_EQ(dab, static_cast<std::int64_t>(a.minus(b).size() + b.minus(a).size()));
            for (const auto& c : pts) {
                EXPECT_LE(dab, distance(a, c) + distance(c, b));
            }
        }
    }
}

TEST(DeltaK, CountsAndOrder) {
    auto k1 = collect(enumerate_delta_k(1, Universe{3}));
    EXPECT_EQ(k1, (std::vector<Point>{Point{}, Point{1}, Point{2}, Point{3}}));
    EXPECT_EQ(collect(enumerate_delta_k(2, Universe{4})).size(), 11u);
    EXPECT_EQ(collect(enumerate_delta_k(0, Universe{9})), std::vector<Point>{Point{}});
    EXPECT_EQ(collect(enumerate_delta_k(3, Universe{0})), std::vector<Point>{Point{}});

    for (std::size_t k = 0; k <= 4; ++k) {
        auto pts = collect(enumerate_delta_k(k, Universe{7}));
        EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
        EXPECT_EQ(std::adjacent_find(pts.begin(), pts.end()), pts.end());
        std::size_t expected = 0, c = 1;
        for (std::size_t i = 0; i <= k; ++i) {
            expected += c;
            c = c * (7 - i) / (i + 1);
        }
        EXPECT_EQ(pts.size(), expected);
    }
}

TEST(DeltaK, Stratification) {
    for (std::size_t k = 0; k < 5; ++k) {
        auto small = collect(enumerate_delta_k(k, Universe{6}));
        auto big = collect(enumerate_delta_k(k + 1, Universe{6}));
        std::set<Point> bigset(big.begin(), big.end());
        for (const auto& p : small) EXPECT_TRUE(bigset.count(p));
    }
}

TEST(DeltaK, RangeFor) {
    std::size_t n = 0;
    for (const Point& p : enumerate_delta_k(2, Universe{4})) {
        EXPECT_LE(p.size(), 2u);
        ++n;
    }
    EXPECT_EQ(n, 11u);
}

TEST(Schreier, Definition) {
    EXPECT_TRUE(is_schreier(Point{2, 3}));
    EXPECT_FALSE(is_schreier(Point{1, 2}));
    EXPECT_TRUE(is_schreier(Point{}));
    EXPECT_TRUE(is_schreier(Point{1}));
    EXPECT_TRUE(is_schreier(Point{3, 4, 9}));
    for (const Point& p : enumerate_schreier(Universe{8})) EXPECT_TRUE(is_schreier(p));
}

TEST(TildeDelta2, Expansion) {
    auto n3 = collect(enumerate_tilde_delta2(Universe{3}));
    EXPECT_EQ(n3, (std::vector<Point>{Point{}, Point{1}, Point{2}, Point{3}, Point{1, 2}, Point{1, 3}, Point{2, 3}}));
    EXPECT_EQ(collect(enumerate_tilde_delta2(Universe{4})).size(), 10u);
    EXPECT_TRUE(in_tilde_delta2(Point{2, 5}));
    EXPECT_FALSE(in_tilde_delta2(Point{3, 5}));
    EXPECT_THROW(enumerate_tilde_delta2(Universe{2}), DomainError);
    for (const Point& p : enumerate_tilde_delta2(Universe{9})) EXPECT_LE(p.size(), 2u);
}
