#include "prioritizer/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "prioritizer/errors.hpp"
#include "prioritizer/model_format.hpp"
#include "prioritizer/nn_engine.hpp"
#include "prioritizer/prioritize.hpp"

namespace prioritizer::cli {
namespace {

struct RunConfig {
  std::string model;
  std::string weights;
  std::string inputs;
  std::string out;
  std::string classes_out;
  std::string method;
  std::uint32_t samples = 10;
  std::uint64_t seed = 42;
  std::vector<std::string> layers;
  std::string train_traces;
  std::string train_classes;
  std::string train_inputs;
  std::string scores;
  std::string predictions;
  std::string labels;
  std::string task;
  double threshold = kDefaultMaeThreshold;
  std::string report;
  double fraction = 0.0;
  std::size_t k = 0;
  std::size_t threads = 0;
};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string format_percent(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

Network load_network(const RunConfig& cfg) { return Network(load_model(cfg.model, cfg.weights)); }

std::vector<std::string> trace_layers(const RunConfig& cfg, const Network& net) {
  if (!cfg.layers.empty()) return cfg.layers;
  return {net.default_trace_layer()};
}

// ---- subcommands -------------------------------------------------------------------

int cmd_predict(const RunConfig& cfg, std::ostream&) {
  const Network net = load_network(cfg);
  const Tensor inputs = load_tensor_file(cfg.inputs);
  save_tensor_file(predict_batch(net, inputs, cfg.threads), cfg.out);
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg, std::ostream&) {
  const Network net = load_network(cfg);
  const Tensor inputs = load_tensor_file(cfg.inputs);
  const bool want_classes = !cfg.classes_out.empty();
  const auto set = capture_traces(net, inputs, trace_layers(cfg, net), want_classes, cfg.threads);
  save_tensor_file(set.traces, cfg.out);
  if (want_classes) save_index_file(IndexTensor{{set.count()}, set.predicted_class}, cfg.classes_out);
  return kExitOk;
}

int cmd_score(const RunConfig& cfg, std::ostream&) {
  const Network net = load_network(cfg);
  const Tensor inputs = load_tensor_file(cfg.inputs);
  std::vector<ScoreRecord> scores;
  if (cfg.method == "softmax") {
    scores = score_softmax_batch(net, inputs, cfg.threads);
  } else if (cfg.method == "dropout") {
    scores = score_dropout_batch(net, inputs, McConfig{cfg.samples, cfg.seed}, cfg.threads);
  } else {
    if (net.task() != Task::classification) throw ModelError("dsa scoring requires a classification model");
    const auto layers = trace_layers(cfg, net);
    ActivationTraceSet train;
    if (!cfg.train_traces.empty()) {
      train.traces = load_tensor_file(cfg.train_traces);
      if (train.traces.rank() != 2) throw DimensionError("training traces must be an [N, d] matrix");
      const IndexTensor classes = load_index_file(cfg.train_classes);
      if (classes.shape.size() != 1 && !(classes.shape.size() == 2 && classes.shape[1] == 1)) {
        throw DimensionError("training classes must have shape [N] or [N,1]");
      }
      train.predicted_class = classes.data;
      train.num_classes = net.output_size();
    } else {
      train = capture_traces(net, load_tensor_file(cfg.train_inputs), layers, true, cfg.threads);
    }
    const DsaIndex index = build_dsa_index(std::move(train));
    const auto tests = capture_traces(net, inputs, layers, true, cfg.threads);
    scores = score_dsa_batch(index, tests, cfg.threads);
  }
  write_scores_csv(cfg.out, scores);
  return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const auto scores = read_scores_csv(cfg.scores);
  const Tensor predictions = load_tensor_file(cfg.predictions);
  const AnyTensor labels = load_label_file(cfg.labels);
  const Task task = parse_task(cfg.task);
  const auto correctness = derive_correctness(predictions, labels, task, cfg.threshold);
  if (scores.size() != correctness.size()) {
    throw DimensionError("scores cover " + std::to_string(scores.size()) + " inputs, predictions " +
                         std::to_string(correctness.size()));
  }
  const auto report = evaluate(rank_by_score(scores), correctness);

  std::filesystem::path path(cfg.out);
  auto csv = open_output(path);
  csv << "rank,input_index,is_error,cum_errors\n";
  for (std::size_t r = 0; r < report.permutation.size(); ++r) {
    csv << (r + 1) << ',' << report.permutation[r] << ',' << report.is_error[r] << ',' << report.cum_errors[r]
        << '\n';
  }
  finish(csv, path);

  const std::string method = scores.empty() ? "" : to_string(scores.front().method);
  if (!cfg.report.empty()) {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["n"] = report.permutation.size();
    j["m"] = report.total_errors;
    j["apfd_percent"] = report.apfd_percent;
    std::filesystem::path rpath(cfg.report);
    auto rep = open_output(rpath);
    rep << j.dump(2) << '\n';
    finish(rep, rpath);
  }
  out << "apfd_percent=" << format_percent(report.apfd_percent) << '\n';
  return kExitOk;
}

int cmd_select(const RunConfig& cfg, std::ostream&) {
  const auto scores = read_scores_csv(cfg.scores);
  Selection selection = cfg.k != 0 ? Selection{TopK{cfg.k}} : Selection{Fraction{cfg.fraction}};
  const auto chosen = select_top(scores, selection);
  std::filesystem::path path(cfg.out);
  auto csv = open_output(path);
  csv << "rank,input_index\n";
  for (std::size_t r = 0; r < chosen.size(); ++r) csv << (r + 1) << ',' << chosen[r] << '\n';
  finish(csv, path);
  return kExitOk;
}

void add_model_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model, "Model manifest (JSON)")->required();
  sub->add_option("--weights", cfg.weights, "Weights blob (NNWB)")->required();
  sub->add_option("--inputs", cfg.inputs, "Input batch (TBIN, [N, ...input_shape])")->required();
  sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
}

}  // namespace

std::string format_score(double score) {
  if (std::isinf(score) && score > 0) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", score);
  return buf;
}

void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRecord>& scores) {
  auto out = open_output(path);
  out << "index,method,score\n";
  for (const auto& r : scores) out << r.input_index << ',' << to_string(r.method) << ',' << format_score(r.score) << '\n';
  finish(out, path);
}

std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "index,method,score") {
    throw FormatError("'" + path.string() + "': expected header 'index,method,score'");
  }
  std::vector<ScoreRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto where = "'" + path.string() + "' line " + std::to_string(line_no);
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw FormatError(where + ": expected three fields");
    ScoreRecord r;
    try {
      std::size_t used = 0;
      const std::string idx = line.substr(0, c1);
      const unsigned long long v = std::stoull(idx, &used);
      if (used != idx.size() || v > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument(idx);
      r.input_index = static_cast<std::uint32_t>(v);
      const std::string score = line.substr(c2 + 1);
      r.score = std::stod(score, &used);
      if (used != score.size()) throw std::invalid_argument(score);
    } catch (const std::logic_error&) {
      throw FormatError(where + ": malformed number");
    }
    r.method = parse_method(line.substr(c1 + 1, c2 - c1 - 1));
    rows.push_back(r);
  }

  std::vector<ScoreRecord> ordered(rows.size());
  std::vector<bool> seen(rows.size(), false);
  for (const auto& r : rows) {
    if (r.input_index >= rows.size() || seen[r.input_index]) {
      throw FormatError("'" + path.string() + "': indices must cover 0..N-1 exactly once");
    }
    seen[r.input_index] = true;
    ordered[r.input_index] = r;
  }
  return ordered;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Test input prioritization for trained neural networks", "prioritizer"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* predict = app.add_subcommand("predict", "Deterministic predictions for a batch");
  add_model_flags(predict, cfg);
  predict->add_option("--out", cfg.out, "Predictions (TBIN)")->required();

  auto* trace = app.add_subcommand("trace", "Capture activation traces");
  add_model_flags(trace, cfg);
  trace->add_option("--layers", cfg.layers, "Layers to trace")->delimiter(',');
  trace->add_option("--out", cfg.out, "Traces (TBIN, [N, d])")->required();
  trace->add_option("--classes", cfg.classes_out, "Predicted classes (TBIN u32)");

  auto* score = app.add_subcommand("score", "Score inputs by a sentiment measure");
  add_model_flags(score, cfg);
  score->add_option("--method", cfg.method, "softmax | dropout | dsa")
      ->required()
      ->check(CLI::IsMember({"softmax", "dropout", "dsa"}));
  score->add_option("--samples", cfg.samples, "Monte-Carlo samples T");
  score->add_option("--seed", cfg.seed, "Global seed");
  score->add_option("--train-traces", cfg.train_traces, "Training traces (TBIN)");
  score->add_option("--train-classes", cfg.train_classes, "Training predicted classes (TBIN u32)");
  score->add_option("--train-inputs", cfg.train_inputs, "Training inputs, traced on the fly (TBIN)");
  score->add_option("--layers", cfg.layers, "Trace layers for dsa")->delimiter(',');
  score->add_option("--out", cfg.out, "Scores CSV")->required();

  auto* eval = app.add_subcommand("evaluate", "Cumulative error curve and APFD");
  eval->add_option("--scores", cfg.scores, "Scores CSV")->required();
  eval->add_option("--predictions", cfg.predictions, "Predictions (TBIN)")->required();
  eval->add_option("--labels", cfg.labels, "Labels (TBIN)")->required();
  eval->add_option("--task", cfg.task, "classification | regression")
      ->required()
      ->check(CLI::IsMember({"classification", "regression"}));
  eval->add_option("--threshold", cfg.threshold, "Regression MAE threshold");
  eval->add_option("--out", cfg.out, "Curve CSV")->required();
  eval->add_option("--report", cfg.report, "JSON report");

  auto* select = app.add_subcommand("select", "Export the top-priority inputs");
  select->add_option("--scores", cfg.scores, "Scores CSV")->required();
  auto* frac = select->add_option("--fraction", cfg.fraction, "Fraction in (0, 1]");
  auto* topk = select->add_option("--k", cfg.k, "Absolute count");
  frac->excludes(topk);
  select->add_option("--out", cfg.out, "Indices CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (score->parsed()) {
      if (cfg.samples == 0) throw UsageError("--samples must be at least 1");
      if (cfg.method == "dsa") {
        const bool have_traces = !cfg.train_traces.empty();
        if (!have_traces && cfg.train_inputs.empty()) {
          throw UsageError("--method dsa requires --train-traces (with --train-classes) or --train-inputs");
        }
        if (have_traces && cfg.train_classes.empty()) throw UsageError("--train-traces requires --train-classes");
        if (have_traces && !cfg.train_inputs.empty()) {
          throw UsageError("--train-traces and --train-inputs are mutually exclusive");
        }
      }
    }
    if (select->parsed() && frac->count() == 0 && topk->count() == 0) {
      throw UsageError("select requires --fraction or --k");
    }
  } catch (const UsageError& e) {
    err << "error: " << e.category() << ": " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (predict->parsed()) return cmd_predict(cfg, out);
    if (trace->parsed()) return cmd_trace(cfg, out);
    if (score->parsed()) return cmd_score(cfg, out);
    if (eval->parsed()) return cmd_evaluate(cfg, out);
    return cmd_select(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.category() << ": " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace prioritizer::cli
