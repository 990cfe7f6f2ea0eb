#include <gtest/gtest.h>

#include "cubetree/audit.hpp"
#include "cubetree/verify.hpp"

using namespace cubetree;

TEST(Distortion, FiniteRankThreeTwoOnSix) {
    auto r = measure_distortion(EmbeddingSpec::finite_rank(3, 2), 3, Universe{6});
    EXPECT_EQ(r.max_expansion, Rational(1));
    ASSERT_TRUE(r.max_contraction);
    EXPECT_EQ(*r.max_contraction, Rational(3, 2));
    EXPECT_EQ(*r.distortion, Rational(3, 2));
    EXPECT_EQ(r.expansion_witness, (PairWitness{Point{}, Point{1}}));
    EXPECT_EQ(r.contraction_witness, (PairWitness{Point{}, Point{1, 2, 3}}));
    EXPECT_EQ(r.pairs_checked, 42u * 41u / 2u);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_EQ(r.domain, "delta_k(k=3,n=6)");
}

TEST(Distortion, FiniteRankTwoOneOnFour) {
    auto r = measure_distortion(EmbeddingSpec::finite_rank(2, 1), 2, Universe{4});
    EXPECT_EQ(*r.distortion, Rational(2));
    EXPECT_EQ(r.expansion_witness, (PairWitness{Point{}, Point{1}}));
    EXPECT_EQ(r.contraction_witness, (PairWitness{Point{}, Point{1, 2}}));
}

TEST(Distortion, IsometricCases) {
    for (std::size_t k = 1; k <= 3; ++k) {
        auto r = measure_distortion(EmbeddingSpec::finite_rank(k, k), k, Universe{5});
        EXPECT_EQ(*r.distortion, Rational(1));
    }
    auto s = measure_schreier_distortion(EmbeddingSpec::schreier(), Universe{8});
    EXPECT_EQ(*s.distortion, Rational(1));
    EXPECT_EQ(s.violations, 0u);
}

TEST(Distortion, BoundedByRatioAndMonotoneInUniverse) {
    for (std::size_t k = 2; k <= 3; ++k) {
        for (std::size_t r = 1; r < k; ++r) {
            auto spec = EmbeddingSpec::finite_rank(k, r);
            Rational prev(0);
            for (Element n = k; n <= 6; ++n) {
                auto rep = measure_distortion(spec, k, Universe{n});
                ASSERT_TRUE(rep.distortion);
                EXPECT_LE(*rep.distortion, Rational(static_cast<std::int64_t>(k), static_cast<std::int64_t>(r)));
                EXPECT_GE(*rep.distortion, prev);
                prev = *rep.distortion;
            }
        }
    }
}

TEST(Distortion, TightnessValues) {
    for (Element n = 4; n <= 6; ++n) {
        EXPECT_EQ(*measure_distortion(EmbeddingSpec::finite_rank(2, 1), 2, Universe{n}).distortion, Rational(2));
        EXPECT_EQ(*measure_distortion(EmbeddingSpec::finite_rank(3, 2), 3, Universe{n}).distortion, Rational(3, 2));
    }
}

TEST(Distortion, WorkerCountDoesNotChangeReport) {
    auto spec = EmbeddingSpec::finite_rank(3, 2);
    auto one = measure_distortion(spec, 3, Universe{6}, AuditOptions{1, {}});
    for (std::size_t w : {2u, 3u, 7u, 64u}) {
        EXPECT_EQ(measure_distortion(spec, 3, Universe{6}, AuditOptions{w, {}}), one) << w;
    }
    SamplerConfig cfg{11, 300, 12};
    auto ai = EmbeddingSpec::almost_isometric(Rational(1, 2));
    EXPECT_EQ(sample_distortion(ai, cfg, AuditOptions{1, {}}), sample_distortion(ai, cfg, AuditOptions{4, {}}));
}

TEST(Distortion, EmptyAndCollapsedDomains) {
    auto r = measure_distortion(EmbeddingSpec::schreier(), std::vector<Point>{Point{1}}, "one");
    EXPECT_EQ(r.pairs_checked, 0u);
    EXPECT_EQ(r.max_expansion, Rational(0));
    EXPECT_EQ(*r.distortion, Rational(0));
    EXPECT_THROW(measure_distortion(EmbeddingSpec::schreier(), std::vector<Point>{Point{1, 2}}, "bad"), DomainError);
}

TEST(Distortion, PairBoundChecks) {
    auto f = EmbeddingSpec::finite_rank(3, 2);
    EXPECT_FALSE(check_pair_bounds(f, Point{}, Point{1, 2, 3}, 2, 3));
    EXPECT_TRUE(check_pair_bounds(f, Point{}, Point{1, 2, 3}, 1, 3));
    EXPECT_TRUE(check_pair_bounds(f, Point{}, Point{1}, 2, 1));
    EXPECT_TRUE(check_pair_bounds(EmbeddingSpec::schreier(), Point{}, Point{1}, 0, 1));
    auto ai = EmbeddingSpec::almost_isometric(Rational(1, 2));
    EXPECT_TRUE(check_pair_bounds(ai, Point{}, Point{1}, 0, 1));
}

TEST(Sampler, Deterministic) {
    auto spec = EmbeddingSpec::almost_isometric(Rational(1, 4));
    SamplerConfig cfg{42, 200, 15};
    auto a = sample_distortion(spec, cfg);
    auto b = sample_distortion(spec, cfg);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.pairs_checked, 200u);
    EXPECT_EQ(a.violations, 0u);
    ASSERT_TRUE(a.max_contraction);
    EXPECT_LE(*a.max_contraction, Rational(4, 3));
    EXPECT_LE(a.max_expansion, Rational(1));
    cfg.seed = 43;
    EXPECT_NE(sample_distortion(spec, cfg).contraction_witness, a.contraction_witness);
}

TEST(Sampler, DrawsStayInDomain) {
    auto spec = EmbeddingSpec::schreier();
    PointSampler s(spec, SamplerConfig{5, 0, 10});
    for (int i = 0; i < 500; ++i) {
        auto [a, b] = s.pair();
        EXPECT_TRUE(is_schreier(a));
        EXPECT_TRUE(is_schreier(b));
        EXPECT_FALSE(a == b);
        if (!a.empty()) {
            EXPECT_LE(a.max(), 10u);
        }
    }
    for (int i = 0; i < 1000; ++i) EXPECT_LT(s.below(7), 7u);
}

TEST(Packing, BoundExamples) {
    EXPECT_EQ(packing_bound(Rational(1), Rational(2), 1), 2u);
    EXPECT_EQ(packing_bound(Rational(1), Rational(3), 1), 1u);
    EXPECT_EQ(packing_bound(Rational(1), Rational(1), 2), 9u);
    EXPECT_EQ(packing_bound(Rational(3, 2), Rational(1), 0), 1u);
    EXPECT_THROW(packing_bound(Rational(0), Rational(1), 1), DomainError);
    EXPECT_THROW(packing_bound(Rational(100), Rational(1), 64), OverflowError);
}

TEST(Packing, MatchesGridSearch) {
    for (auto [c, eta] : std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}, {1, 2}, {2, 1}}) {
        for (std::size_t d = 1; d <= 2; ++d) {
            EXPECT_EQ(verify::max_separated_grid(c, Rational(eta), d), packing_bound(Rational(c), Rational(eta), d));
        }
    }
}

TEST(Xij, Examples) {
    FiniteEmbedding f;
    f.domain = {Point{}, Point{1}, Point{2}, Point{3}};
    f.images = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(1), Rational(0)},
                {Rational(-1), Rational(2)}};
    auto all = xij_sets(f, Rational(0), {{1, 3}});
    EXPECT_EQ(all.at({1, 3}), (IndexSet{0, 1}));
    EXPECT_TRUE(xij_sets(f, Rational(1, 2), {{1, 2}}).at({1, 2}).empty());
    EXPECT_EQ(xij_sets(f, Rational(2), {{1, 3}, {2, 3}}).at({2, 3}), (IndexSet{0, 1}));
    EXPECT_THROW(xij_sets(f, Rational(1), {{1, 9}}), DomainError);
}

TEST(Trace, RejectsClaimsOfTwoOrMore) {
    auto f = verify::overpacked_indicator_embedding(5);
    EXPECT_THROW(aharoni_trace(f, Rational(2)), DomainError);
    EXPECT_THROW(aharoni_trace(f, Rational(5, 2)), DomainError);
    EXPECT_THROW(aharoni_trace(f, Rational(0)), DomainError);
}

TEST(Trace, OverpackedInputIsContradiction) {
    auto t = aharoni_trace(verify::overpacked_indicator_embedding(20), Rational(3, 2));
    EXPECT_EQ(t.verdict, TraceVerdict::Contradiction);
    EXPECT_EQ(t.eta, Rational(1));
    EXPECT_EQ(t.x12, (IndexSet{0, 1}));
    EXPECT_EQ(t.probes.size(), 18u);
    EXPECT_EQ(*t.bound, 16u);
    ASSERT_TRUE(t.upper_violation);
    EXPECT_FALSE(t.lower_violation);
}

TEST(Trace, FewSingletonsIsInconclusive) {
    auto t = aharoni_trace(verify::overpacked_indicator_embedding(3), Rational(3, 2));
    EXPECT_EQ(t.verdict, TraceVerdict::Inconclusive);
    EXPECT_EQ(t.probes, (std::vector<Element>{3}));
}

TEST(Trace, LowerBoundViolationComesFirst) {
    auto f = verify::overpacked_indicator_embedding(6);
    for (auto& v : f.images)
        for (auto& x : v) x = x * Rational(1, 8);
    auto t = aharoni_trace(f, Rational(3, 2));
    EXPECT_EQ(t.verdict, TraceVerdict::LowerBoundViolation);
    ASSERT_TRUE(t.lower_violation);
    EXPECT_EQ(*t.lower_violation, (PairWitness{Point{}, Point{1}}));
    EXPECT_TRUE(t.probes.empty());
}

TEST(Trace, IsometricEmbeddingFromTreeSpace) {
    auto domain = collect(enumerate_tilde_delta2(Universe{6}));
    auto f = finite_embedding_from_spec(EmbeddingSpec::finite_rank(2, 2), domain);
    for (std::size_t i = 0; i < domain.size(); ++i) {
        for (std::size_t j = i + 1; j < domain.size(); ++j) {
            EXPECT_EQ(sup_distance(f.images[i], f.images[j]), Rational(distance(domain[i], domain[j])));
        }
    }
    auto t = aharoni_trace(f, Rational(3, 2));
    EXPECT_FALSE(t.lower_violation);
    EXPECT_FALSE(t.upper_violation);
    EXPECT_EQ(t.verdict, TraceVerdict::Inconclusive);
}
