#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sfw/config.hpp"
#include "sfw/errors.hpp"
#include "sfw/report.hpp"

using namespace sfw;
using nlohmann::json;

TEST_CASE("defaults round trip through the echo") {
  ExperimentConfig c = parse_config(json::object());
  json a = to_json(c);
  json b = to_json(parse_config(a));
  CHECK(a == b);
  CHECK(c.precision_bits == 256);
  CHECK(c.horizons.classify.value == 65536);
  CHECK(c.certificate.floor == 0.05);
}

TEST_CASE("a full config round trips") {
  json j = json::parse(R"({
    "alpha": {"kind": "rule", "rule": "power", "seed": [0, 2], "exponent": 3},
    "roof": {"kind": "table", "c0": 2.0, "entries": [[1, 0.1], [3, 0.05, -0.02]]},
    "horizons": {"classify": "2^20000", "hypotheses": 32},
    "lambda": {"values": [1, 2.5]},
    "plan": {"kind": "multi", "first_index": 3},
    "seed": 77,
    "thresholds": {"floor": 0.04},
    "clt": {"u": [4, 8], "source": "plan"},
    "output": {"dir": "x", "emit": "both"}
  })");
  ExperimentConfig c = parse_config(j);
  CHECK(c.horizons.classify.value == (mpz_class(1) << 20000));
  CHECK(c.roof.entries.size() == 2);
  CHECK(c.roof.entries[1].second == std::complex<double>(0.05, -0.02));
  CHECK(c.seed == 77);
  CHECK(c.certificate.floor == 0.04);
  json e = to_json(c);
  CHECK(e["horizons"]["classify"] == "2^20000");
  CHECK(to_json(parse_config(e)) == e);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"alpah": {}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"roof": {"kind": "dyadic", "c00": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"grids": {"direct": 256, "extra": 1}})")), ConfigError);
}

TEST_CASE("wrong types and ranges are rejected") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"precision_bits": "many"})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"precision_bits": 8})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"roof": {"kind": "wavy"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"lambda": {"values": [0]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"horizons": {"classify": "lots"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"horizons": {"classify": 0}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse("[1, 2]")), ConfigError);
}

TEST_CASE("big horizons") {
  CHECK(parse_big(json(12345), "h").value == 12345);
  CHECK(parse_big(json("99999999999999999999999"), "h").value == mpz_class("99999999999999999999999"));
  CHECK(parse_big(json("3^5"), "h").value == 243);
  CHECK_THROWS_AS(parse_big(json(1.5), "h"), ConfigError);
}

TEST_CASE("malformed rules surface as config errors") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"alpha": {"kind": "rule", "rule": "pow2", "seed": [0, 0]}})")),
                  ConfigError);
  ExperimentConfig bad = parse_config(json::parse(R"({"roof": {"kind": "constant", "c0": -1}})"));
  RotationNumber g(PartialQuotients::periodic({0}, {1}));
  CHECK_THROWS_AS(make_roof(bad.roof, g), ConfigError);
}

TEST_CASE("make_alpha builds the configured rotation") {
  ExperimentConfig c = parse_config(json::parse(R"({"alpha": {"kind": "quotients", "quotients": [0, 2, 2, 2]}})"));
  RotationNumber a = make_alpha(c);
  CHECK(a.q(3) == 12);
  ExperimentConfig e = parse_config(json::parse(R"({"alpha": {"kind": "euler"}})"));
  CHECK(make_alpha(e).value().to_double() == doctest::Approx(std::exp(1.0) - 2.0));
}

TEST_CASE("atomic writes leave no temp file") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "sfw_config_test";
  fs::create_directories(dir);
  std::string p = (dir / "a.txt").string();
  write_atomic(p, "one");
  write_atomic(p, "two");
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "two");
  CHECK_FALSE(fs::exists(p + ".tmp"));
  CHECK_THROWS(write_atomic((dir / "missing" / "b.txt").string(), "x"));
  fs::remove_all(dir);
}

TEST_CASE("csv quoting") {
  CsvTable t{"t", {"a", "b"}, {{"1", "x,y"}, {"say \"hi\"", ""}}};
  CHECK(csv_text(t) == "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
}

TEST_CASE("big integers in reports") {
  CHECK(big_json(mpz_class(42)) == 42);
  CHECK(big_json(mpz_class("123456789012345678901234567890")) == "123456789012345678901234567890");
  CHECK(big_json(mpz_class(1) << 20000) == "2^20000");
  CHECK(fmt(0.1) == "0.1");
  CHECK(finite_or_null(std::numeric_limits<double>::infinity()).is_null());
}

TEST_CASE("emit_report writes the requested files") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "sfw_emit_test";
  fs::remove_all(dir);
  Report r;
  r.command = "probe";
  r.config.output.dir = dir.string();
  r.config.output.emit = "both";
  r.result = {{"x", 1}};
  r.tables.push_back({"rows", {"a"}, {{"1"}}});
  std::vector<std::string> w = emit_report(r);
  CHECK(w.size() == 3);
  CHECK(fs::exists(dir / "probe.json"));
  CHECK(fs::exists(dir / "probe_rows.csv"));
  CHECK(fs::exists(dir / "probe.timings.json"));
  std::ifstream in(dir / "probe.json");
  json j = json::parse(in);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["result"]["x"] == 1);
  fs::remove_all(dir);
}
