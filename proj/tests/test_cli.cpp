#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "cubetree/cli.hpp"

using namespace cubetree;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "cubetree");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST(Cli, EmbedText) {
    auto r = run({"embed", "--spec", "finite:2,2", "--set", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "T_2:\n(1) -1\n(1,2) 2\n(2) 1\n");
}

TEST(Cli, EmbedJson) {
    auto r = run({"embed", "--spec", "schreier", "--set", "1", "--format", "json"});
    EXPECT_EQ(r.code, 0);
    auto j = io::json::parse(r.out);
    EXPECT_EQ(j.at("bands").size(), 1u);
}

TEST(Cli, EmbedOutsideDomain) {
    auto r = run({"embed", "--spec", "schreier", "--set", "1,2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("[1,2]"), std::string::npos);
}

TEST(Cli, Gap) {
    auto r = run({"gap", "--spec", "finite:3,2", "--a", "1,2", "--b", "5,6,7"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "gap = 5\ndistance = 5\n");
}

TEST(Cli, Norm) {
    auto r = run({"norm", "--vector", R"({"height":2,"entries":[[[1],-1],[[1,2],2],[[2],1]]})"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1\n");
    EXPECT_EQ(run({"norm", "--vector", "{"}).code, 2);
}

TEST(Cli, AuditExhaustive) {
    auto r = run({"audit", "--spec", "finite:3,2", "--k", "3", "--n", "6", "--format", "json"});
    EXPECT_EQ(r.code, 0);
    auto j = io::json::parse(r.out);
    EXPECT_EQ(j.at("distortion").at("num"), 3);
    EXPECT_EQ(j.at("distortion").at("den"), 2);
}

TEST(Cli, AuditModes) {
    EXPECT_EQ(run({"audit", "--spec", "schreier", "--max-element", "7"}).code, 0);
    EXPECT_EQ(run({"audit", "--spec", "ai:1/2", "--pairs", "50", "--seed", "1", "--format", "csv"}).code, 0);
    EXPECT_EQ(run({"audit", "--spec", "ai:1/2", "--pairs", "50"}).code, 2);
    EXPECT_EQ(run({"audit", "--spec", "finite:2,1"}).code, 2);
    EXPECT_EQ(run({"audit", "--spec", "finite:2,1", "--k", "3", "--n", "4"}).code, 2);
}

TEST(Cli, CantorBendixson) {
    auto r = run({"cb", "w^2*3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "I_CB = 3\nchain: Interval(w^2*3) -> Interval(w*3) -> Finite(3) -> Empty\n");
    EXPECT_EQ(run({"cb", "5"}).out, "I_CB = 1\nchain: Interval(5) -> Empty\n");
    EXPECT_EQ(run({"cb", "w^w"}).out.substr(0, 13), "I_CB = w + 1\n");
    EXPECT_EQ(run({"cb", "--node", "2:"}).out, "w^2\n");
    EXPECT_EQ(run({"cb", "--node", "2:2,5"}).out, "w + 3\n");
    EXPECT_EQ(run({"cb", "w^"}).code, 2);
}

TEST(Cli, Trace) {
    auto r = run({"trace", "--claim", "3/2", "--spec", "finite:2,2", "--n", "6"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 22), "verdict: INCONCLUSIVE\n");
    EXPECT_EQ(run({"trace", "--claim", "2", "--spec", "finite:2,2", "--n", "6"}).code, 2);
    auto low = run({"trace", "--claim", "3/2", "--spec", "finite:2,2", "--n", "6", "--scale", "1/2"});
    EXPECT_EQ(low.out.substr(0, 31), "verdict: LOWER_BOUND_VIOLATION\n");
}

TEST(Cli, BudgetFromEnvironment) {
    ::setenv("CUBETREE_NODE_BUDGET", "10", 1);
    auto r = run({"embed", "--spec", "schreier", "--set", "9"});
    ::unsetenv("CUBETREE_NODE_BUDGET");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("budget"), std::string::npos);
    EXPECT_EQ(run({"--node-budget", "10", "embed", "--spec", "schreier", "--set", "9"}).code, 2);
    EXPECT_EQ(run({"embed", "--spec", "schreier", "--set", "9"}).code, 0);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"embed", "--spec", "schreier"}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
