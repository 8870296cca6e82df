// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "json.hpp"

#include "docprune/corpus_io.hpp"
#include "docprune/synthetic.hpp"

namespace fs = std::filesystem;
using namespace docprune;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "docprune");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("docprune_cli_" + std::to_string(::getpid()) + "_" +
               ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
        synthetic::PlantedOptions o;
        o.documents = 12;
        o.queries = 6;
        o.dim = 8;
        o.min_patches = 10;
        o.max_patches = 20;
        const auto b = synthetic::make_planted_benchmark(o);
        write_corpus(path("corpus.mvdr"), b.corpus);
        write_queries(path("queries.mvdq"), b.queries);
        write_qrels(path("qrels.txt"), b.qrels);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }
    std::vector<std::string> inputs() const {
        return {"--corpus", path("corpus.mvdr"), "--queries", path("queries.mvdq"), "--qrels", path("qrels.txt")};
    }
    std::vector<std::string> with_inputs(std::vector<std::string> head, std::vector<std::string> tail = {}) const {
        for (const auto& a : inputs()) head.push_back(a);
        for (const auto& a : tail) head.push_back(a);
        return head;
    }

    fs::path dir;
};

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_F(CliTest, EvaluateWritesJsonReport) {
    const auto r = invoke(with_inputs({"evaluate"}, {"--k", "0"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["method"], "docpruner");
    EXPECT_EQ(j["config"]["k"], 0.0);
    EXPECT_EQ(j["per_query"].size(), 6u);
    EXPECT_GE(j["aggregate_ndcg"].get<double>(), 0.0);
    EXPECT_LE(j["aggregate_ndcg"].get<double>(), 1.0);
}

TEST_F(CliTest, DefaultsAreDocPrunerAtMinusQuarter) {
    const auto r = invoke(with_inputs({"evaluate"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["method"], "docpruner");
    EXPECT_EQ(j["config"]["k"], -0.25);
    EXPECT_EQ(j["cutoff"], 5);
}

TEST_F(CliTest, RepeatedRunsAreIdenticalApartFromTiming) {
    auto args = with_inputs({"evaluate", "--method", "random"}, {"--ratio", "0.3", "--seed", "11", "--threads", "3"});
    auto a = nlohmann::json::parse(invoke(args).out);
    auto b = nlohmann::json::parse(invoke(args).out);
    a.erase("offline_seconds");
    b.erase("offline_seconds");
    EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(CliTest, OutFileAndCsv) {
    const auto r = invoke(with_inputs({"evaluate", "--format", "csv", "--out", path("r.csv")}));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const auto csv = slurp(path("r.csv"));
    EXPECT_EQ(csv.rfind("query_id,ndcg,method", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(invoke({"evaluate", "--queries", path("queries.mvdq"), "--qrels", path("qrels.txt")}).code,
              cli::kExitUsage);
    EXPECT_EQ(invoke({}).code, cli::kExitUsage);
    EXPECT_EQ(invoke(with_inputs({"evaluate", "--method", "bogus"})).code, cli::kExitUsage);
    EXPECT_EQ(invoke(with_inputs({"evaluate", "--ratio", "1.5"})).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"validate"}).code, cli::kExitUsage);
    const auto bad_grid = invoke(with_inputs({"sweep", "--method", "pool1d", "--grid", "2.5"}));
    EXPECT_EQ(bad_grid.code, cli::kExitUsage);
    EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, DataErrorsExitTwo) {
    {
        std::ofstream f(path("bad.mvdr"), std::ios::binary);
        f << "NOPE0000000000000000";
    }
    const auto r = invoke({"evaluate", "--corpus", path("bad.mvdr"), "--queries", path("queries.mvdq"), "--qrels",
                           path("qrels.txt")});
    EXPECT_EQ(r.code, cli::kExitData);
    EXPECT_NE(r.err.find("BadMagic"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("bad.mvdr"), std::string::npos) << r.err;

    EXPECT_EQ(invoke({"stats", "--corpus", path("absent.mvdr")}).code, cli::kExitData);
    EXPECT_EQ(invoke(with_inputs({"evaluate", "--method", "pool2d"})).code, cli::kExitData);
    EXPECT_EQ(invoke(with_inputs({"sweep", "--method", "attention-threshold"})).code, cli::kExitData);
}

TEST_F(CliTest, SweepReportsEveryGridPoint) {
    const auto r = invoke(with_inputs({"sweep"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["method"], "docpruner");
    EXPECT_EQ(j["reports"].size(), 6u);
    EXPECT_EQ(j["frontier"].size(), 6u);

    const auto g = invoke(with_inputs({"sweep", "--method", "attention-threshold", "--grid", "0.2,0.5"}));
    ASSERT_EQ(g.code, 0) << g.err;
    const auto jg = nlohmann::json::parse(g.out);
    ASSERT_EQ(jg["reports"].size(), 2u);
    EXPECT_EQ(jg["reports"][1]["config"]["threshold"], 0.5);
}

TEST_F(CliTest, StatsInspectValidate) {
    const auto s = invoke({"stats", "--corpus", path("corpus.mvdr"), "--k", "0.5"});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto stats = nlohmann::json::parse(s.out);
    EXPECT_FALSE(stats.empty());

    const auto corpus = read_corpus(path("corpus.mvdr"));
    const auto i = invoke({"inspect", "--corpus", path("corpus.mvdr"), "--doc", corpus[0].doc_id, "--embeddings"});
    ASSERT_EQ(i.code, 0) << i.err;
    const auto j = nlohmann::json::parse(i.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["doc_id"], corpus[0].doc_id);
    EXPECT_EQ(j[0]["embeddings"].size(), corpus[0].patch_count());
    EXPECT_EQ(invoke({"inspect", "--corpus", path("corpus.mvdr"), "--doc", "nope"}).code, cli::kExitData);

    const auto v = invoke({"validate", "--corpus", path("corpus.mvdr"), "--queries", path("queries.mvdq"), "--qrels",
                           path("qrels.txt")});
    EXPECT_EQ(v.code, 0) << v.err;
    EXPECT_NE(v.out.find("12 documents"), std::string::npos);

    {
        std::ofstream f(path("broken.txt"));
        f << "q0 0 d0\n";
    }
    const auto bad = invoke({"validate", "--qrels", path("broken.txt")});
    EXPECT_EQ(bad.code, cli::kExitData);
    EXPECT_NE(bad.err.find("line 1"), std::string::npos) << bad.err;
}

TEST_F(CliTest, SynthWritesLoadableFixture) {
    const auto out_dir = path("fixture");
    const auto r = invoke({"synth", "--out-dir", out_dir, "--docs", "8", "--queries", "4", "--dim", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_corpus(out_dir + "/corpus.mvdr").size(), 8u);
    EXPECT_EQ(read_queries(out_dir + "/queries.mvdq").size(), 4u);
    EXPECT_EQ(read_qrels(out_dir + "/qrels.txt").size(), 4u);
}
