#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "prioritizer/cli.hpp"
#include "prioritizer/errors.hpp"
#include "prioritizer/model_format.hpp"
#include "prioritizer/prioritize.hpp"
#include "test_support.hpp"

using namespace prioritizer;
using namespace prioritizer::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "prioritizer");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(2024);
    model_ = make_mlp(4, 8, 3, Task::classification, rng, 0.3);
    save_model(model_, dir_ / "m.json", dir_ / "m.nnwb");
    inputs_ = random_tensor({10, 4}, rng, -2, 2);
    save_tensor_file(inputs_, dir_ / "x.tbin");
    save_tensor_file(random_tensor({60, 4}, rng, -2, 2), dir_ / "train.tbin");
    IndexTensor labels{{10}, {}};
    for (int i = 0; i < 10; ++i) labels.data.push_back(static_cast<std::uint32_t>(rng() % 3));
    save_index_file(labels, dir_ / "y.tbin");
    labels_ = labels;
  }

  std::vector<std::string> model_flags() const {
    return {"--model", path("m.json"), "--weights", path("m.nnwb"), "--inputs", path("x.tbin")};
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  ScratchDir dir_;
  ModelManifest model_;
  Tensor inputs_;
  IndexTensor labels_;
};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_F(CliTest, PredictScoreEvaluateEndToEnd) {
  ASSERT_EQ(invoke(concat({"predict"}, concat(model_flags(), {"--out", path("p.tbin")}))).code, 0);
  const auto score = invoke(concat({"score", "--method", "softmax"}, concat(model_flags(), {"--out", path("s.csv")})));
  ASSERT_EQ(score.code, 0) << score.err;
  const auto eval = invoke({"evaluate", "--scores", path("s.csv"), "--predictions", path("p.tbin"), "--labels",
                            path("y.tbin"), "--task", "classification", "--out", path("curve.csv"), "--report",
                            path("r.json")});

  // Composed in-process pipeline.
  const Network net(model_);
  const Tensor preds = predict_batch(net, inputs_);
  const auto correctness = derive_correctness(preds, labels_, Task::classification);
  if (correctness.error_count() == 0) {
    EXPECT_EQ(eval.code, 1);
    return;
  }
  ASSERT_EQ(eval.code, 0) << eval.err;
  const auto report = evaluate(rank_by_score(score_softmax_batch(net, inputs_)), correctness);
  char expect[64];
  std::snprintf(expect, sizeof expect, "apfd_percent=%.6f\n", report.apfd_percent);
  EXPECT_EQ(eval.out, expect);

  const auto curve = slurp(dir_ / "curve.csv");
  EXPECT_EQ(curve.substr(0, curve.find('\n')), "rank,input_index,is_error,cum_errors");
  EXPECT_NE(slurp(dir_ / "r.json").find("\"method\": \"softmax\""), std::string::npos);
  EXPECT_EQ(load_tensor_file(dir_ / "p.tbin"), preds);
}

TEST_F(CliTest, ScoresCsvFormat) {
  ASSERT_EQ(invoke(concat({"score", "--method", "softmax"}, concat(model_flags(), {"--out", path("s.csv")}))).code, 0);
  const auto text = slurp(dir_ / "s.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "index,method,score");
  const auto back = cli::read_scores_csv(dir_ / "s.csv");
  ASSERT_EQ(back.size(), 10u);
  EXPECT_EQ(back[3].method, Method::softmax);
  EXPECT_EQ(cli::format_score(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(cli::format_score(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(cli::format_score(0.0), "0");
}

TEST_F(CliTest, ScoresCsvRoundTripsInf) {
  std::vector<ScoreRecord> s{{0, Method::dsa, 0.5}, {1, Method::dsa, std::numeric_limits<double>::infinity()}};
  cli::write_scores_csv(dir_ / "s.csv", s);
  EXPECT_EQ(slurp(dir_ / "s.csv"), "index,method,score\n0,dsa,0.5\n1,dsa,inf\n");
  EXPECT_EQ(cli::read_scores_csv(dir_ / "s.csv"), s);
}

TEST_F(CliTest, DropoutAndDsa) {
  const auto drop = invoke(concat({"score", "--method", "dropout", "--samples", "20", "--seed", "7"},
                                  concat(model_flags(), {"--out", path("d.csv")})));
  ASSERT_EQ(drop.code, 0) << drop.err;
  const auto d = cli::read_scores_csv(dir_ / "d.csv");
  EXPECT_EQ(d[0].method, Method::dropout_cls);

  ASSERT_EQ(invoke({"trace", "--model", path("m.json"), "--weights", path("m.nnwb"), "--inputs", path("train.tbin"),
                    "--layers", "relu1,dense2", "--out", path("t.tbin"), "--classes", path("c.tbin")})
                .code,
            0);
  EXPECT_EQ(load_tensor_file(dir_ / "t.tbin").shape(), (Shape{60, 11}));
  EXPECT_EQ(load_index_file(dir_ / "c.tbin").shape, (Shape{60}));

  const auto dsa1 = invoke(concat({"score", "--method", "dsa", "--train-traces", path("t.tbin"), "--train-classes",
                                   path("c.tbin"), "--layers", "relu1,dense2"},
                                  concat(model_flags(), {"--out", path("a.csv")})));
  ASSERT_EQ(dsa1.code, 0) << dsa1.err;
  const auto dsa2 = invoke(concat({"score", "--method", "dsa", "--train-inputs", path("train.tbin"), "--layers",
                                   "dense2,relu1"},
                                  concat(model_flags(), {"--out", path("b.csv")})));
  ASSERT_EQ(dsa2.code, 0) << dsa2.err;
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));

  // Trace dimension must agree with the test-side layers.
  const auto mismatch = invoke(concat({"score", "--method", "dsa", "--train-traces", path("t.tbin"),
                                       "--train-classes", path("c.tbin")},
                                      concat(model_flags(), {"--out", path("e.csv")})));
  EXPECT_EQ(mismatch.code, 1);
  EXPECT_EQ(mismatch.err.rfind("error: dimension:", 0), 0u) << mismatch.err;
}

TEST_F(CliTest, Select) {
  ASSERT_EQ(invoke(concat({"score", "--method", "softmax"}, concat(model_flags(), {"--out", path("s.csv")}))).code, 0);
  ASSERT_EQ(invoke({"select", "--scores", path("s.csv"), "--k", "3", "--out", path("i.csv")}).code, 0);
  const auto chosen = select_top(cli::read_scores_csv(dir_ / "s.csv"), TopK{3});
  std::string expect = "rank,input_index\n";
  for (std::size_t r = 0; r < chosen.size(); ++r) expect += std::to_string(r + 1) + "," + std::to_string(chosen[r]) + "\n";
  EXPECT_EQ(slurp(dir_ / "i.csv"), expect);
  ASSERT_EQ(invoke({"select", "--scores", path("s.csv"), "--fraction", "0.5", "--out", path("h.csv")}).code, 0);
  const auto half = slurp(dir_ / "h.csv");
  EXPECT_EQ(std::count(half.begin(), half.end(), '\n'), 6);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  const auto zero = invoke(concat({"score", "--method", "dropout", "--samples", "0"},
                                  concat(model_flags(), {"--out", path("s.csv")})));
  EXPECT_EQ(zero.code, 2);
  EXPECT_EQ(zero.err.rfind("error: usage:", 0), 0u);
  const auto dsa = invoke(concat({"score", "--method", "dsa"}, concat(model_flags(), {"--out", path("s.csv")})));
  EXPECT_EQ(dsa.code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke(concat({"score", "--method", "lsa"}, concat(model_flags(), {"--out", path("s.csv")}))).code, 2);
  EXPECT_EQ(invoke({"select", "--scores", path("s.csv"), "--out", path("i.csv")}).code, 2);
  EXPECT_EQ(invoke({"select", "--scores", path("s.csv"), "--k", "1", "--fraction", "0.1", "--out", path("i.csv")}).code,
            2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, RuntimeErrorsExitOneWithCategory) {
  const auto missing = invoke({"predict", "--model", path("nope.json"), "--weights", path("m.nnwb"), "--inputs",
                               path("x.tbin"), "--out", path("p.tbin")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.err.rfind("error: io:", 0), 0u);
  EXPECT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);

  save_model(make_mlp(4, 8, 3, Task::classification, *std::make_unique<std::mt19937_64>(1)), dir_ / "plain.json",
             dir_ / "plain.nnwb");
  const auto nodrop = invoke({"score", "--method", "dropout", "--model", path("plain.json"), "--weights",
                              path("plain.nnwb"), "--inputs", path("x.tbin"), "--out", path("s.csv")});
  EXPECT_EQ(nodrop.code, 1);
  EXPECT_EQ(nodrop.err.rfind("error: model:", 0), 0u);

  save_tensor_file(Tensor({10, 5}), dir_ / "bad.tbin");
  const auto shape = invoke({"predict", "--model", path("m.json"), "--weights", path("m.nnwb"), "--inputs",
                             path("bad.tbin"), "--out", path("p.tbin")});
  EXPECT_EQ(shape.code, 1);
  EXPECT_EQ(shape.err.rfind("error: shape:", 0), 0u);
}

TEST_F(CliTest, OutputsIndependentOfThreads) {
  for (const std::string method : {"softmax", "dropout", "dsa"}) {
    std::vector<std::string> extra{"--method", method};
    if (method == "dsa") extra = concat(extra, {"--train-inputs", path("train.tbin")});
    ASSERT_EQ(invoke(concat(concat({"score"}, extra), concat(model_flags(), {"--threads", "1", "--out", path("1.csv")})))
                  .code,
              0);
    ASSERT_EQ(invoke(concat(concat({"score"}, extra), concat(model_flags(), {"--threads", "8", "--out", path("8.csv")})))
                  .code,
              0);
    EXPECT_EQ(slurp(dir_ / "1.csv"), slurp(dir_ / "8.csv")) << method;
  }
}
