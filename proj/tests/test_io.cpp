#include <gtest/gtest.h>

#include <random>

#include "cubetree/io.hpp"
#include "cubetree/verify.hpp"

using namespace cubetree;

TEST(Parse, Points) {
    EXPECT_EQ(io::parse_point("1,2,5"), (Point{1, 2, 5}));
    EXPECT_EQ(io::parse_point("[5, 2]"), (Point{2, 5}));
    EXPECT_EQ(io::parse_point("{}"), Point{});
    EXPECT_EQ(io::parse_point(""), Point{});
    EXPECT_THROW(io::parse_point("0,1"), ParseError);
    EXPECT_THROW(io::parse_point("1,,2"), ParseError);
    EXPECT_THROW(io::parse_point("[1,2"), ParseError);
    EXPECT_THROW(io::parse_point("a"), ParseError);
}

TEST(Parse, Specs) {
    EXPECT_EQ(io::parse_spec("finite:3,2").str(), "finite:3,2");
    EXPECT_EQ(io::parse_spec("schreier").str(), "schreier");
    EXPECT_EQ(io::parse_spec("ai:1/4").str(), "ai:1/4");
    EXPECT_EQ(io::parse_spec("ai:1/2:4,9").str(), "ai:1/2:4,9");
    EXPECT_THROW(io::parse_spec("finite:2,3"), DomainError);
    EXPECT_THROW(io::parse_spec("finite:2"), ParseError);
    EXPECT_THROW(io::parse_spec("ai:3/2"), DomainError);
    EXPECT_THROW(io::parse_spec("ai:1/2:3"), DomainError);
    EXPECT_THROW(io::parse_spec("tree"), ParseError);
    for (const char* s : {"finite:4,1", "schreier", "ai:2/3", "ai:1/2:4,9,13"}) {
        EXPECT_EQ(io::parse_spec(io::parse_spec(s).str()).str(), s);
    }
}

TEST(Json, SparseVectorRoundTrip) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        auto x = verify::random_sparse_vector(rng, 1 + i % 4, 1 + static_cast<std::size_t>(i) * 3, 5);
        auto j = io::to_json(x);
        EXPECT_EQ(io::sparse_vector_from_json(io::json::parse(j.dump())), x);
    }
}

TEST(Json, BundleRoundTrip) {
    auto spec = EmbeddingSpec::almost_isometric(Rational(1, 2));
    auto img = embed_set(spec, Point{2, 3, 5});
    auto back = io::bundle_from_json(io::json::parse(io::to_json(img).dump()));
    EXPECT_EQ(back, img);
    EXPECT_EQ(bundle_norm(back), 3);
}

TEST(Json, SparseVectorShape) {
    auto img = embed_point(EmbeddingSpec::finite_rank(2, 2), 2).component(2);
    auto j = io::to_json(img);
    EXPECT_EQ(j.at("height"), 2);
    EXPECT_EQ(j.at("entries").dump(), "[[[1],-1],[[1,2],2],[[2],1]]");
}

TEST(Json, Rationals) {
    EXPECT_EQ(io::rational_from_json(io::json::parse("3")), Rational(3));
    EXPECT_EQ(io::rational_from_json(io::json::parse("\"-2/4\"")), Rational(-1, 2));
    EXPECT_EQ(io::rational_from_json(io::to_json(Rational(5, 7))), Rational(5, 7));
    EXPECT_THROW(io::rational_from_json(io::json::parse("{\"num\":1,\"den\":0}")), ParseError);
    EXPECT_THROW(io::rational_from_json(io::json::parse("1.5")), ParseError);
}

TEST(Json, DistortionReportSchema) {
    auto rep = measure_distortion(EmbeddingSpec::finite_rank(3, 2), 3, Universe{6});
    auto j = io::to_json(rep);
    EXPECT_EQ(j.at("schema"), "cubetree/distortion-report/1");
    EXPECT_EQ(j.at("spec"), "finite:3,2");
    EXPECT_EQ(j.at("distortion").at("num"), 3);
    EXPECT_EQ(j.at("distortion").at("den"), 2);
    EXPECT_EQ(j.at("contraction_witness").dump(), "[[],[1,2,3]]");
    EXPECT_TRUE(j.at("first_violation").is_null());
    EXPECT_EQ(io::csv_row(rep), "\"finite:3,2\",\"delta_k(k=3,n=6)\",861,1/1,3/2,3/2,\"[] [1]\",\"[] [1,2,3]\",0");
    EXPECT_NE(io::to_text(rep).find("distortion:      3/2"), std::string::npos);
}

TEST(Json, FiniteEmbeddingRoundTripAndTrace) {
    auto f = verify::overpacked_indicator_embedding(6);
    auto g = io::finite_embedding_from_json(io::json::parse(io::to_json(f).dump()));
    EXPECT_EQ(g.domain, f.domain);
    EXPECT_EQ(g.images, f.images);
    auto t = io::to_json(aharoni_trace(g, Rational(3, 2)));
    EXPECT_EQ(t.at("schema"), "cubetree/trace-report/1");
    EXPECT_EQ(t.at("verdict"), "INCONCLUSIVE");
    EXPECT_EQ(t.at("probes").size(), 4u);
    EXPECT_EQ(t.at("packing_bound"), 16);
    auto bad = io::json::parse(R"({"points": [[], [1]], "images": [[0]]})");
    EXPECT_THROW(io::finite_embedding_from_json(bad), DomainError);
}

TEST(Text, BundleListing) {
    EXPECT_EQ(io::to_text(embed_set(EmbeddingSpec::schreier(), Point{})), "zero\n");
    EXPECT_EQ(io::to_text(embed_point(EmbeddingSpec::finite_rank(2, 2), 2)), "T_2:\n(1) -1\n(1,2) 2\n(2) 1\n");
}
