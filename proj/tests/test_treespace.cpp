#include <gtest/gtest.h>

#include <random>

#include "cubetree/embeddings.hpp"
#include "cubetree/treespace.hpp"
#include "cubetree/verify.hpp"

using namespace cubetree;

namespace {

SparseVector vec(std::size_t h, std::vector<std::pair<std::vector<Element>, std::int64_t>> entries) {
    SparseVectorBuilder b(h);
    for (auto& [p, c] : entries) b.add(p, c);
    return std::move(b).build();
}

} // namespace

TEST(Prefixes, Examples) {
    EXPECT_EQ(prefixes(TreeNode{2, 5, 9}), (std::vector<TreeNode>{TreeNode{}, TreeNode{2}, TreeNode{2, 5}, TreeNode{2, 5, 9}}));
    EXPECT_EQ(prefixes(TreeNode{}), std::vector<TreeNode>{TreeNode{}});
    EXPECT_EQ(prefixes(TreeNode{7}), (std::vector<TreeNode>{TreeNode{}, TreeNode{7}}));
    EXPECT_THROW(TreeNode({3, 3}), DomainError);
}

TEST(BranchFunctional, Examples) {
    auto x = vec(2, {{{3}, 1}, {{3, 5}, 2}});
    EXPECT_EQ(branch_functional(x, TreeNode{3, 5}), 3);
    auto y = vec(3, {{{}, -4}, {{1}, 2}, {{1, 2, 3}, 9}});
    EXPECT_EQ(branch_functional(y, TreeNode{}), -4);
    // f_2(3) has −1 at (1) and +2 at (1,3).
    auto f = embed_point(EmbeddingSpec::finite_rank(2, 2), 3).component(2);
    EXPECT_EQ(branch_functional(f, TreeNode{1, 3}), 1);
    EXPECT_THROW(branch_functional(x, TreeNode{1, 2, 3}), DomainError);
}

TEST(Norm, Examples) {
    EXPECT_EQ(norm(SparseVector(3)), 0);
    for (std::size_t r = 1; r <= 5; ++r) {
        for (Element m = 1; m <= 8; ++m) {
            EXPECT_EQ(norm(embed_point(EmbeddingSpec::finite_rank(r, r), m).component(r)), 1);
        }
    }
    auto spec = EmbeddingSpec::finite_rank(3, 2);
    auto diff = embed_set(spec, Point{1, 2}).component(2) - embed_set(spec, Point{5, 6, 7}).component(2);
    EXPECT_EQ(norm(diff), 5);
}

TEST(Norm, BasisVectorsHaveNormOne) {
    for (const Point& p : enumerate_delta_k(3, Universe{6})) {
        TreeNode t(std::vector<Element>(p.elements().begin(), p.elements().end()));
        EXPECT_EQ(norm(SparseVector::basis(3, t)), 1);
    }
}

TEST(Norm, IsANormOnRandomIntegerVectors) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t h = 1 + rng() % 5;
        auto x = verify::random_sparse_vector(rng, h, 1 + rng() % 60, 12);
        auto y = verify::random_sparse_vector(rng, h, 1 + rng() % 60, 12);
        std::int64_t c = static_cast<std::int64_t>(rng() % 7) - 3;
        EXPECT_EQ(norm(c * x), (c < 0 ? -c : c) * norm(x));
        EXPECT_LE(norm(x + y), norm(x) + norm(y));
        EXPECT_EQ(norm(x - x), 0);
        // Every branch functional is dominated by the norm.
        for (std::size_t i = 0; i < x.size(); i += 3) {
            auto p = x.entry(i).path;
            std::vector<Element> ext(p.begin(), p.end());
            EXPECT_LE(std::abs(branch_functional(x, TreeNode(ext))), norm(x));
        }
    }
}

TEST(Norm, AgreesWithPrefixClosureOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t support = std::size_t{1} << (rng() % 11);
        auto x = verify::random_sparse_vector(rng, 1 + rng() % 8, support, 30);
        ASSERT_EQ(norm(x), verify::prefix_closure_norm(x)) << "trial " << trial;
    }
}

TEST(SparseVector, BuilderMergesAndSorts) {
    auto x = vec(3, {{{2, 4}, 1}, {{1}, 3}, {{2, 4}, -1}, {{2}, 5}, {{1, 7}, 2}});
    ASSERT_EQ(x.size(), 3u);
    EXPECT_EQ(x.coefficient(TreeNode{1}), 3);
    EXPECT_EQ(x.coefficient(TreeNode{1, 7}), 2);
    EXPECT_EQ(x.coefficient(TreeNode{2}), 5);
    EXPECT_EQ(x.coefficient(TreeNode{2, 4}), 0);
    EXPECT_THROW(vec(1, {{{1, 2}, 1}}), DomainError);
    EXPECT_THROW(x.with_height(1), DomainError);
    EXPECT_THROW(x + SparseVector(2), DomainError);
}

TEST(SparseVector, OverflowAborts) {
    auto x = vec(1, {{{1}, INT64_MAX}});
    EXPECT_THROW(x + x, OverflowError);
    EXPECT_THROW(norm(vec(2, {{{1}, INT64_MAX}, {{1, 2}, 1}})), OverflowError);
}

TEST(Bundle, NormIsMaxOverComponents) {
    EXPECT_EQ(bundle_norm(BundleVector{}), 0);
    auto x = vec(2, {{{1}, 3}});
    EXPECT_EQ(bundle_norm(BundleVector::single(x)), 3);
    BundleVector b({Band{1, 1, vec(1, {{{1}, 2}})}, Band{2, 5, vec(2, {{{1}, 1}, {{1, 2}, -5}})}});
    EXPECT_EQ(bundle_norm(b), 4);
    auto s = EmbeddingSpec::schreier();
    EXPECT_EQ(bundle_norm(embed_set(s, Point{2, 3}) - embed_set(s, Point{3, 5})), 2);
}

TEST(Bundle, ArithmeticSplitsAndCoalescesBands) {
    BundleVector a({Band{1, 4, vec(1, {{{1}, 1}})}});
    BundleVector b({Band{3, 6, vec(3, {{{1}, 1}})}});
    auto sum = a + b;
    ASSERT_EQ(sum.bands().size(), 3u);
    EXPECT_EQ(sum.component(2).coefficient(TreeNode{1}), 1);
    EXPECT_EQ(sum.component(4).coefficient(TreeNode{1}), 2);
    EXPECT_EQ(sum.component(6).coefficient(TreeNode{1}), 1);
    EXPECT_TRUE(sum.component(7).is_zero());
    EXPECT_TRUE((a - a).is_zero());
    // Equal neighbours coalesce: [1,2] + [3,4] with identical vectors is one band.
    BundleVector c({Band{1, 2, vec(1, {{{1}, 1}})}, Band{3, 4, vec(3, {{{1}, 1}})}});
    ASSERT_EQ(c.bands().size(), 1u);
    EXPECT_EQ(c, a);
    EXPECT_THROW(BundleVector({Band{1, 3, vec(1, {{{1}, 1}})}, Band{3, 4, vec(3, {{{2}, 1}})}}), DomainError);
}
