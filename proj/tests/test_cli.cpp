#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "fixtures.hpp"
#include "scisent/classify.hpp"
#include "scisent/error.hpp"
#include "scisent/text.hpp"

using namespace scisent;
using scisent::testing::TempDir;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Base benchmark, test-split fixture and paths inside a temp dir.
struct Workspace {
  TempDir dir;
  std::string dataset = dir.file("base.jsonl");
  std::string fixture = dir.file("fixture.json");

  explicit Workspace(const scisent::testing::ClassifyFixture& f = {}) {
    const Dataset d = scisent::testing::base_benchmark();
    save_dataset(d, dataset, DatasetFormat::JsonLines);
    scisent::testing::write_json(fixture, scisent::testing::classify_fixture(d, Split::Test, f));
  }
};

}  // namespace

TEST_CASE("flat toml") {
  const auto v = cli::parse_flat_toml(
      "# comment\nmodel_id = \"gpt-x\"  # trailing\nmax_tokens = 64\ntemperature = 0.5\n"
      "clamp_top_p_min = true\nendpoint_url = 'http://h/v1'\n");
  CHECK(std::get<std::string>(v.at("model_id")) == "gpt-x");
  CHECK(std::get<long long>(v.at("max_tokens")) == 64);
  CHECK(std::get<double>(v.at("temperature")) == 0.5);
  CHECK(std::get<bool>(v.at("clamp_top_p_min")));
  CHECK(std::get<std::string>(v.at("endpoint_url")) == "http://h/v1");
  CHECK_THROWS_AS(cli::parse_flat_toml("[table]\n"), ConfigError);
  CHECK_THROWS_AS(cli::parse_flat_toml("a = [1, 2]\n"), ConfigError);
  CHECK_THROWS_AS(cli::parse_flat_toml("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(cli::parse_flat_toml("novalue\n"), ConfigError);
}

TEST_CASE("config apply and precedence") {
  TempDir tmp;
  const std::string path = tmp.file("c.toml");
  write_file_atomic(path, "model_id = \"m\"\nendpoint_url = \"http://file/v1\"\ntop_k = \"none\"\nconcurrency = 2\n");
  ::unsetenv("SCISENT_API_BASE");
  auto cfg = cli::load_config(path);
  CHECK(cfg.backend.model_id == "m");
  CHECK(cfg.backend.endpoint_url == "http://file/v1");
  CHECK_FALSE(cfg.backend.top_k.has_value());
  CHECK(cfg.concurrency == 2);
  CHECK(cfg.echo().at("model_id") == "m");

  ::setenv("SCISENT_API_BASE", "http://env/v1", 1);
  CHECK(cli::load_config(path).backend.endpoint_url == "http://env/v1");
  ::unsetenv("SCISENT_API_BASE");

  cli::CliConfig c;
  CHECK_THROWS_AS(c.apply({{"no_such_key", 1LL}}), ConfigError);
  CHECK_THROWS_AS(c.apply({{"temperature", std::string("hot")}}), ConfigError);
}

TEST_CASE("validate and split") {
  TempDir tmp;
  const Dataset raw = scisent::testing::unsplit_dataset();
  save_dataset(raw, tmp.file("raw.csv"), DatasetFormat::Csv);
  const auto before = read_file(tmp.file("raw.csv"));

  auto r = invoke({"split", "--dataset", tmp.file("raw.csv"), "--out", tmp.file("base.jsonl"), "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("train 490, validation 70, test 140") != std::string::npos);
  CHECK(read_file(tmp.file("raw.csv")) == before);

  CHECK(invoke({"validate", "--dataset", tmp.file("base.jsonl"), "--profile", "base"}).code == 0);
  auto bad = invoke({"validate", "--dataset", tmp.file("base.jsonl"), "--profile", "augmented"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("violation") != std::string::npos);

  CHECK(invoke({"split", "--dataset", tmp.file("raw.csv"), "--out", tmp.file("x.jsonl"), "--ratios", "0.5,0.5,0.5"})
            .code == 2);
  CHECK(invoke({"validate", "--dataset", tmp.file("missing.jsonl")}).code == 3);
  CHECK(invoke({"validate"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
}

TEST_CASE("classify then eval") {
  Workspace ws;
  const std::string run = ws.dir.file("run");
  auto c = invoke({"--mock", ws.fixture, "--frozen-clock", "classify", "--dataset", ws.dataset, "--out", run});
  REQUIRE(c.code == 0);
  CHECK(c.out.find("140 predictions, 140 parsed, 0 unparsed") != std::string::npos);
  const auto loaded = read_run(run + "/manifest.json");
  CHECK(loaded.predictions.size() == 140);
  CHECK(loaded.model_id == "mock");

  auto e = invoke({"eval", "--run", run, "--dataset", ws.dataset, "--svg"});
  REQUIRE(e.code == 0);
  CHECK(e.out.find("F1=1.000") != std::string::npos);
  for (auto f : {"report.json", "report.csv", "confusion.csv", "confusion.svg"})
    CHECK(std::filesystem::exists(std::filesystem::path(run) / f));

  // Validation gold against a test run.
  CHECK(invoke({"eval", "--run", run, "--dataset", ws.dataset, "--split", "validation"}).code == 5);

  // Identical reports compare to zero.
  auto cmp = invoke({"compare", run + "/report.json", run + "/report.json", "--out", ws.dir.file("delta")});
  CHECK(cmp.code == 0);
  CHECK(cmp.out.find("0.000") != std::string::npos);
  CHECK(cmp.out.find("-0.000") == std::string::npos);
  CHECK(std::filesystem::exists(ws.dir.file("delta.csv")));
}

TEST_CASE("classify setup failures") {
  Workspace ws;
  auto t = invoke({"--mock", ws.fixture, "classify", "--dataset", ws.dataset, "--template", ws.dir.file("nope.txt"),
                "--out", ws.dir.file("r")});
  CHECK(t.code == 3);
  CHECK(t.err.find("nope.txt") != std::string::npos);

  Dataset no_test = scisent::testing::base_benchmark();
  std::erase_if(no_test.records, [](auto& r) { return r.split == Split::Test; });
  save_dataset(no_test, ws.dir.file("notest.jsonl"), DatasetFormat::JsonLines);
  CHECK(invoke({"--mock", ws.fixture, "classify", "--dataset", ws.dir.file("notest.jsonl"), "--out", ws.dir.file("r")})
            .code == 2);

  const char* saved = std::getenv("SCISENT_API_KEY");
  std::string keep = saved ? saved : "";
  ::unsetenv("SCISENT_API_KEY");
  CHECK(invoke({"classify", "--dataset", ws.dataset, "--model", "m", "--out", ws.dir.file("r")}).code == 4);
  if (saved) ::setenv("SCISENT_API_KEY", keep.c_str(), 1);
}

TEST_CASE("agree") {
  TempDir tmp;
  write_file_atomic(tmp.file("r.csv"),
                    "item_id,rater_id,label\ns1,A,Result\ns1,B,Result\ns2,A,Other\ns2,B,Other\n"
                    "s3,A,Limitation\ns3,B,Limitation\n");
  auto a = invoke({"agree", "--ratings", tmp.file("r.csv"), "--out", tmp.file("a.json")});
  CHECK(a.code == 0);
  CHECK(a.out.find("kappa 1.000, AC1 1.000") != std::string::npos);
  CHECK(nlohmann::json::parse(read_file(tmp.file("a.json")))["fleiss_kappa"] == 1.0);
}

TEST_CASE("augment then validate and report") {
  TempDir tmp;
  const Dataset d = scisent::testing::base_benchmark();
  save_dataset(d, tmp.file("base.jsonl"), DatasetFormat::JsonLines);
  scisent::testing::write_json(tmp.file("para.json"), scisent::testing::paraphrase_fixture(d));
  auto a = invoke({"--mock", tmp.file("para.json"), "augment", "--dataset", tmp.file("base.jsonl"), "--out",
                tmp.file("aug.jsonl")});
  REQUIRE(a.code == 0);
  CHECK(a.out.find("+1960 train, +280 validation") != std::string::npos);
  CHECK(std::filesystem::exists(tmp.file("aug.jsonl.report.json")));
  CHECK(invoke({"validate", "--dataset", tmp.file("aug.jsonl"), "--profile", "augmented"}).code == 0);
  auto r = invoke({"report", "--dataset", tmp.file("aug.jsonl"), "--out", tmp.file("sim.csv")});
  CHECK(r.code == 0);
  CHECK(read_file(tmp.file("sim.csv")).rfind("Data Type,Category", 0) == 0);
}
