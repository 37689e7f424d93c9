// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <sstream>

#include <json.hpp>
#include <sys/wait.h>

#include "cohortsel/cli.hpp"
#include "cohortsel/config.hpp"
#include "cohortsel/error.hpp"
#include "cohortsel/model_io.hpp"
#include "cohortsel/util.hpp"
#include "test_support.hpp"

using namespace cohortsel;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli_argv(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"cohortsel"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Run cli(std::initializer_list<std::string> args) { return cli_argv(args); }

// A small synthetic corpus split into train/ and test/.
struct Workspace {
  testing::TempDir dir;
  fs::path train, test;
  Workspace() : train(dir / "train"), test(dir / "test") {
    const auto r = cli({"synth", "--seed", "5", "--docs", "120", "--holdout", "0.25", "--out", dir.path().string()});
    REQUIRE(r.code == 0);
  }
};

Run train(const Workspace& ws, const fs::path& model) {
  std::vector<std::string> args{"train",
                                "--corpus",
                                (ws.train / "corpus.jsonl").string(),
                                "--annotations",
                                (ws.train / "annotations.tsv").string(),
                                "--gold",
                                (ws.train / "gold.json").string(),
                                "--seed",
                                "11",
                                "--model",
                                model.string()};
  return cli_argv(args);
}

int exit_status_of(const std::string& command) {
  const int status = std::system(command.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("synth writes corpus, annotations and gold") {
  testing::TempDir dir;
  const auto r = cli({"synth", "--seed", "3", "--docs", "20", "--out", dir.path().string()});
  REQUIRE(r.code == 0);
  for (const char* name : {"corpus.jsonl", "annotations.tsv", "gold.json"}) CHECK(fs::exists(dir / name));
  const auto corpus = load_corpus(dir / "corpus.jsonl");
  CHECK(corpus.size() == 20);
  const auto gold = load_decisions(dir / "gold.json");
  validate_gold(gold, default_config().schema, corpus);

  // Same seed, same bytes.
  testing::TempDir again;
  REQUIRE(cli({"synth", "--seed", "3", "--docs", "20", "--out", again.path().string()}).code == 0);
  CHECK(read_file(dir / "corpus.jsonl") == read_file(again / "corpus.jsonl"));
  CHECK(read_file(dir / "gold.json") == read_file(again / "gold.json"));
}

TEST_CASE("usage errors exit 1, runtime errors exit 2") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"synth", "--seed", "1"}).code == 1);               // --out missing
  CHECK(cli({"synth", "--seed", "x", "--out", "/tmp"}).code == 1);
  CHECK(cli({"evaluate", "--gold", "g.json"}).code == 1);       // --pred missing
  CHECK(cli({"--help"}).code == 0);

  testing::TempDir dir;
  const auto missing = cli({"evaluate", "--gold", (dir / "nope.json").string(), "--pred", (dir / "nope.json").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error:") != std::string::npos);

  write_file_atomic(dir / "bad.json", "{not json");
  CHECK(cli({"evaluate", "--gold", (dir / "bad.json").string(), "--pred", (dir / "bad.json").string()}).code == 2);
  CHECK(cli({"train", "--model", (dir / "m.json").string()}).code == 2);  // no corpus path

  ::setenv("COHORTSEL_THREADS", "many", 1);
  CHECK(cli({"synth", "--seed", "1", "--docs", "2", "--out", (dir / "s").string()}).code == 2);
  ::unsetenv("COHORTSEL_THREADS");
}

TEST_CASE("the installed binary reports the same exit codes") {
  const std::string bin = COHORTSEL_CLI;
  CHECK(exit_status_of(bin + " --help > /dev/null 2>&1") == 0);
  CHECK(exit_status_of(bin + " frobnicate > /dev/null 2>&1") == 1);
  CHECK(exit_status_of(bin + " evaluate --gold /nonexistent/g.json --pred /nonexistent/p.json > /dev/null 2>&1") == 2);
}

TEST_CASE("evaluating gold against itself gives micro-F1 of 1") {
  Workspace ws;
  const auto out = ws.dir / "eval";
  const auto gold = (ws.train / "gold.json").string();
  const auto r = cli({"evaluate", "--gold", gold, "--pred", gold, "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto report = json::parse(read_file(out / "eval_report.json"));
  CHECK(report["micro_f1"].get<double>() == 1.0);
  CHECK(report["micro"]["fp"].get<int>() == 0);
  CHECK(report["micro"]["fn"].get<int>() == 0);
  CHECK(r.out.find("micro") != std::string::npos);

  // Predictions covering a different document set are rejected.
  const auto other = (ws.test / "gold.json").string();
  CHECK(cli({"evaluate", "--gold", gold, "--pred", other}).code == 2);
  // Restricting gold to the test corpus makes the test predictions comparable.
  CHECK(cli({"evaluate", "--gold", other, "--pred", other, "--corpus", (ws.test / "corpus.jsonl").string()}).code == 0);
}

TEST_CASE("train, predict and evaluate end to end") {
  Workspace ws;
  const auto model_a = ws.dir / "a.json";
  const auto model_b = ws.dir / "b.json";
  REQUIRE(train(ws, model_a).code == 0);
  REQUIRE(train(ws, model_b).code == 0);
  // Training is deterministic down to the byte.
  CHECK(read_file(model_a) == read_file(model_b));

  const auto pred = ws.dir / "pred.json";
  REQUIRE(cli({"predict", "--model", model_a.string(), "--corpus", (ws.test / "corpus.jsonl").string(),
               "--annotations", (ws.test / "annotations.tsv").string(), "--pred", pred.string()})
              .code == 0);

  // Reloading the model predicts exactly what the in-memory model does.
  const auto file = load_model(model_a);
  const auto test_corpus = load_corpus(ws.test / "corpus.jsonl");
  const auto test_spans = load_ner_annotations(ws.test / "annotations.tsv", test_corpus);
  const auto direct = predict_corpus(file.model, test_corpus, test_spans);
  CHECK(load_decisions(pred) == direct);

  const auto cfg = default_config();
  const auto train_corpus = load_corpus(ws.train / "corpus.jsonl");
  const auto train_spans = load_ner_annotations(ws.train / "annotations.tsv", train_corpus);
  const auto train_gold = load_decisions(ws.train / "gold.json");
  const auto in_memory = train_ensemble(cfg.schema, cfg.labels, cfg.component_weights, cfg.hp, train_corpus,
                                        train_spans, train_gold, 11);
  CHECK(predict_corpus(in_memory, test_corpus, test_spans) == direct);
  CHECK(serialize_model(file.config, file.model) == read_file(model_a));

  const auto r = cli({"evaluate", "--gold", (ws.test / "gold.json").string(), "--pred", pred.string()});
  CHECK(r.code == 0);
}

TEST_CASE("a model file edited after saving is rejected") {
  Workspace ws;
  const auto model = ws.dir / "m.json";
  REQUIRE(train(ws, model).code == 0);
  auto j = json::parse(read_file(model));
  auto& w = j["labels"][0]["logreg"]["weights"];
  REQUIRE(!w.empty());
  w[0] = w[0].get<double>() + 0.25;
  write_file_atomic(ws.dir / "edited.json", j.dump() + "\n");
  CHECK_THROWS_WITH_AS(load_model(ws.dir / "edited.json"), doctest::Contains("checksum mismatch"), Error);
  const auto r = cli({"predict", "--model", (ws.dir / "edited.json").string(), "--corpus",
                      (ws.test / "corpus.jsonl").string(), "--pred", (ws.dir / "p.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("checksum") != std::string::npos);

  write_file_atomic(ws.dir / "truncated.json", read_file(model).substr(0, 1000));
  CHECK_THROWS_AS(load_model(ws.dir / "truncated.json"), Error);
}

TEST_CASE("prediction falls back to dictionary tagging without annotations") {
  Workspace ws;
  const auto model = ws.dir / "m.json";
  REQUIRE(train(ws, model).code == 0);
  const auto pred = ws.dir / "p.json";
  REQUIRE(cli({"predict", "--model", model.string(), "--corpus", (ws.test / "corpus.jsonl").string(), "--pred",
               pred.string()})
              .code == 0);
  CHECK(load_decisions(pred).size() == load_corpus(ws.test / "corpus.jsonl").size());
}

TEST_CASE("config errors name the offending field") {
  testing::TempDir dir;
  auto j = config_to_json(default_config(), true);
  j["labels"][0]["gazetteers"][0]["window"] = -1;
  write_file_atomic(dir / "bad.json", j.dump());
  CHECK_THROWS_WITH_AS(load_config(dir / "bad.json"), doctest::Contains("labels[0].gazetteers[0].window"), Error);

  j = config_to_json(default_config(), true);
  j["svm"]["epochs_typo"] = 3;
  write_file_atomic(dir / "bad.json", j.dump());
  CHECK_THROWS_WITH_AS(load_config(dir / "bad.json"), doctest::Contains("epochs_typo"), Error);

  j = config_to_json(default_config(), true);
  j.erase("seed");
  write_file_atomic(dir / "bad.json", j.dump());
  CHECK_THROWS_WITH_AS(load_config(dir / "bad.json"), doctest::Contains("seed"), Error);

  j = config_to_json(default_config(), true);
  j["component_weights"] = {0, 0, 0};
  write_file_atomic(dir / "bad.json", j.dump());
  CHECK_THROWS_AS(load_config(dir / "bad.json"), Error);

  const auto r = cli({"train", "--config", (dir / "bad.json").string(), "--model", (dir / "m.json").string()});
  CHECK(r.code == 2);
}

TEST_CASE("shipped config loads and round-trips") {
  const auto cfg = load_config(fs::path(COHORTSEL_SOURCE_DIR) / "configs" / "default.json");
  const auto again = parse_config(config_to_json(cfg, true), ".");
  CHECK(config_to_json(again, true) == config_to_json(cfg, true));
  CHECK(cfg.schema.names() == default_config().schema.names());
}

TEST_CASE("tune writes a report and a loadable tuned config") {
  Workspace ws;
  auto j = config_to_json(default_config(), true);
  j["tuner"]["component_grid"] = {1.0, 2.0};
  j["tuner"]["feature_grid"] = {1.0};
  write_file_atomic(ws.dir / "small.json", j.dump());
  const auto out = ws.dir / "tune";
  const auto r = cli({"tune", "--config", (ws.dir / "small.json").string(), "--corpus",
                      (ws.train / "corpus.jsonl").string(), "--annotations", (ws.train / "annotations.tsv").string(),
                      "--gold", (ws.train / "gold.json").string(), "--folds", "3", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto report = json::parse(read_file(out / "cv_report.json"));
  CHECK(report["folds"].get<int>() == 3);
  CHECK(report["component_candidates"].size() == 8);
  const double f1 = report["cv"]["micro_f1"].get<double>();
  CHECK(f1 >= 0.0);
  CHECK(f1 <= 1.0);
  const auto tuned = load_config(out / "tuned_config.json");
  CHECK(tuned.schema.names() == default_config().schema.names());
  CHECK(tuned.component_weights == report["component_weights"].get<ComponentWeights>());

  CHECK(cli({"tune", "--corpus", (ws.train / "corpus.jsonl").string(), "--gold", (ws.train / "gold.json").string(),
             "--folds", "1", "--out", out.string()})
            .code == 2);
}
