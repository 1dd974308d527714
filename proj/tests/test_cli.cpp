#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "stance/corpus.hpp"

using namespace stance;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = STANCE_CLI_PATH;
const fs::path kDataDir = fs::path(STANCE_DATA_FIXTURE_DIR);
const fs::path kLexicons = kDataDir / "lexicons";
const fs::path kTrain = kDataDir / "demo_train.jsonl";
const fs::path kTest = kDataDir / "demo_test.jsonl";

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "stance_cli_test";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  std::string cmd = kCli + " " + args + " >" + (work_dir() / "stdout.txt").string() + " 2>" +
                    (work_dir() / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("train writes a model plus schema dump; predict covers every tweet") {
  fs::path dir = work_dir();
  fs::path model = dir / "model.json";
  int rc = run_cli("train --train " + kTrain.string() + " --lexicons " + kLexicons.string() +
                   " --out " + model.string());
  REQUIRE(rc == 0);
  CHECK(fs::exists(model));
  fs::path schema_dump = dir / "model.json.schema.json";
  REQUIRE(fs::exists(schema_dump));
  json schema = json::parse(slurp(schema_dump));
  CHECK(schema.at("schema").size() == 17);  // BEST17 default

  fs::path preds = dir / "preds.jsonl";
  rc = run_cli("predict --model " + model.string() + " --data " + kTest.string() +
               " --lexicons " + kLexicons.string() + " --out " + preds.string());
  REQUIRE(rc == 0);
  Dataset test = load_flat(kTest);
  CHECK(line_count(preds) == test.tweet_count());

  std::ifstream in(preds);
  std::string line;
  REQUIRE(std::getline(in, line));
  json first = json::parse(line);
  CHECK(first.contains("id"));
  CHECK(first.contains("label"));
  CHECK(first.at("decision_summary").contains("votes"));
  CHECK(first.at("decision_summary").contains("scores"));

  SUBCASE("eval in model mode writes a report") {
    fs::path report = dir / "report.json";
    rc = run_cli("eval --model " + model.string() + " --data " + kTest.string() + " --lexicons " +
                 kLexicons.string() + " --out " + report.string());
    REQUIRE(rc == 0);
    json j = json::parse(slurp(report));
    CHECK(j.at("accuracy").get<double>() >= 0.0);
    CHECK(j.at("accuracy").get<double>() <= 1.0);
    CHECK(j.at("config") == "BEST17");
  }

  SUBCASE("predict twice is byte-identical") {
    fs::path again = dir / "preds2.jsonl";
    rc = run_cli("predict --model " + model.string() + " --data " + kTest.string() +
                 " --lexicons " + kLexicons.string() + " --out " + again.string());
    REQUIRE(rc == 0);
    CHECK(slurp(preds) == slurp(again));
  }
}

TEST_CASE("train twice with the same inputs gives byte-identical model files") {
  fs::path dir = work_dir();
  fs::path m1 = dir / "det1.json", m2 = dir / "det2.json";
  std::string args = " --train " + kTrain.string() + " --lexicons " + kLexicons.string() +
                     " --config E --kernel rbf --C 1";
  REQUIRE(run_cli("train" + args + " --out " + m1.string()) == 0);
  REQUIRE(run_cli("train --workers 3" + args + " --out " + m2.string()) == 0);
  CHECK(slurp(m1) == slurp(m2));
}

TEST_CASE("eval --pred with gold labels reports accuracy 1.0") {
  fs::path dir = work_dir();
  fs::path preds = dir / "gold_preds.jsonl";
  {
    Dataset test = load_flat(kTest);
    std::ofstream out(preds, std::ios::trunc);
    for (const auto& thread : test.threads) {
      for (const Tweet& t : thread.tweets()) {
        if (t.label) {
          out << json{{"id", t.id}, {"label", to_string(*t.label)}}.dump() << "\n";
        }
      }
    }
  }
  fs::path report = dir / "gold_report.json";
  int rc = run_cli("eval --pred " + preds.string() + " --data " + kTest.string() + " --out " +
                   report.string());
  REQUIRE(rc == 0);
  json j = json::parse(slurp(report));
  CHECK(j.at("accuracy").get<double>() == 1.0);
}

TEST_CASE("ingest converts the SemEval layout to flat jsonl") {
  fs::path mini = fs::path(STANCE_FIXTURE_DIR) / "semeval_mini";
  fs::path out = work_dir() / "ingested.jsonl";
  int rc = run_cli("ingest --data " + mini.string() + " --data-key " +
                   (mini / "key.json").string() + " --split test --out " + out.string());
  REQUIRE(rc == 0);
  CHECK(line_count(out) == 5);
  Dataset back = load_flat(out);
  CHECK(back.threads.size() == 2);
}

TEST_CASE("ablate emits the 11-row table") {
  fs::path out = work_dir() / "ablation.json";
  int rc = run_cli("ablate --train " + kTrain.string() + " --test " + kTest.string() +
                   " --lexicons " + kLexicons.string() + " --out " + out.string());
  REQUIRE(rc == 0);
  json j = json::parse(slurp(out));
  CHECK(j.at("ablation").size() == 11);
  CHECK(j.at("ablation")[0].at("set") == "A");
  CHECK(j.at("ablation")[10].at("set") == "K");
}

TEST_CASE("grid emits 56 cells") {
  fs::path out = work_dir() / "grid.json";
  int rc = run_cli("grid --train " + kTrain.string() + " --dev " + kTest.string() +
                   " --lexicons " + kLexicons.string() + " --config E --out " + out.string());
  REQUIRE(rc == 0);
  json j = json::parse(slurp(out));
  CHECK(j.at("cells").size() == 56);
  CHECK(j.contains("best"));
}

TEST_CASE("balance runs the balanced experiment") {
  fs::path out = work_dir() / "balanced.json";
  int rc = run_cli("balance --train " + kTrain.string() + " --test " + kTest.string() +
                   " --lexicons " + kLexicons.string() +
                   " --per-class-train 10 --per-class-test 5 --out " + out.string());
  REQUIRE(rc == 0);
  json j = json::parse(slurp(out));
  long total = 0;
  for (const auto& row : j.at("confusion")) {
    for (const auto& v : row) total += v.get<long>();
  }
  CHECK(total == 20);
}

TEST_CASE("failures exit nonzero with a diagnostic") {
  CHECK(run_cli("train --train /nonexistent.jsonl --out /tmp/x.json") != 0);
  CHECK(!slurp(work_dir() / "stderr.txt").empty());
  CHECK(run_cli("eval --data " + kTest.string()) != 0);  // neither --model nor --pred
  CHECK(run_cli("--bogus-flag train") != 0);
  CHECK(run_cli("balance --train " + kTrain.string() + " --test " + kTest.string() +
                " --per-class-train 99999 --per-class-test 5") != 0);
}
