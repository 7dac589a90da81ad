#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "collatz/cli.hpp"
#include "collatz/map.hpp"
#include "collatz/mapio.hpp"
#include "test_support.hpp"

using collatz::run_command;
using nlohmann::json;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("hyperplane listing as JSON") {
  const auto r = run({"hyperplanes", "--catalog", "zsqrt2", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["command"] == "hyperplanes");
  CHECK(j["map"]["source"] == "catalog:zsqrt2");
  CHECK(j["results"]["count"] == 10);
  REQUIRE(j["results"]["forms"].size() == 10);
  CHECK(j["results"]["forms"][0][0] == 0);
  CHECK(j["results"]["forms"][0][1] == 1);
}

TEST_CASE("map source flags are mutually exclusive and required") {
  CHECK(run({"hyperplanes"}).code == 2);
  CHECK(run({"hyperplanes", "--catalog", "zsqrt2", "--map", "x.json"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"hyperplanes", "--catalog", "zsqrt2", "--bogus"}).code == 2);
  CHECK(run({"stopping", "--catalog", "zsqrt2", "--point", "1,0", "--norm", "manhattan"}).code ==
        2);
}

TEST_CASE("csv output is limited to tabular commands") {
  CHECK(run({"validate", "--catalog", "zsqrt2", "--format", "csv"}).code == 2);

  const auto r = run({"hyperplanes", "--catalog", "zsqrt2", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("a1,a2\n", 0) == 0);
  CHECK(count_lines(r.out) == 11);
  CHECK(r.out.find("1,-4\n") != std::string::npos);
}

TEST_CASE("domain errors exit with status one") {
  CHECK(run({"trajectory", "--catalog", "zsqrt2", "--point", "abc"}).code == 1);
  CHECK(run({"validate", "--map", "/nonexistent/map.json"}).code == 1);
  CHECK(run({"sample-divergent", "--catalog", "zsqrt2", "--radius", "0"}).code == 1);

  const std::string path = write_file(
      "/tmp/collatz_test_even_map.json",
      R"({"rank":1,"d":2,"entries":[{"residue":[0],"m":2,"r":[0]},{"residue":[1],"m":2,"r":[2]}]})");
  const auto r = run({"cones", "--map", path});
  CHECK(r.code == 1);
  CHECK(r.err.find("NOT_RELATIVELY_PRIME") != std::string::npos);
}

TEST_CASE("maps load from files and round-trip through emit") {
  const collatz::CollatzMap map = collatz::validate_map(testsupport::zsqrt2_raw());
  const std::string text = collatz::emit_map_json(map);
  const std::string path = write_file("/tmp/collatz_test_zsqrt2.json", text);

  const auto r = run({"hyperplanes", "--map", path, "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["map"]["source"] == path);
  CHECK(j["results"]["count"] == 10);

  CHECK(collatz::emit_map_json(collatz::parse_map_json(text)) == text);
}

TEST_CASE("trajectory outcomes as JSON") {
  const auto r = run({"trajectory", "--catalog", "zsqrt2", "--point", "1,0", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["outcome"] == "cycle");
  CHECK(j["results"]["preperiod"] == 0);
  CHECK(j["results"]["period"] == 2);

  const auto d = run({"trajectory", "--catalog", "zsqrt2", "--point", "-1,1",
                      "--certify-divergence", "--format", "json"});
  REQUIRE(d.code == 0);
  const json dj = json::parse(d.out);
  CHECK(dj["results"]["outcome"] == "divergent");
  CHECK(dj["results"]["witness_step"] == 0);
}

TEST_CASE("stopping command reports the first norm decrease") {
  const auto none = run({"stopping", "--catalog", "zsqrt2", "--point", "1,0", "--format", "json"});
  REQUIRE(none.code == 0);
  CHECK(json::parse(none.out)["results"]["stopping_time"].is_null());

  const auto hit = run({"stopping", "--catalog", "zsqrt2", "--point", "-3,7", "--format", "json"});
  REQUIRE(hit.code == 0);
  CHECK(json::parse(hit.out)["results"]["stopping_time"] == 5);
}

TEST_CASE("seeded sampling is byte-identical across runs") {
  const std::vector<std::string> args = {"sample-divergent", "--catalog", "zsqrt2", "--radius",
                                         "1000", "--format", "json"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["results"]["divergent_fraction"]["value"] == doctest::Approx(0.482).epsilon(1e-9));
  CHECK(j["results"]["divergent_fraction"]["samples"] == 500);
  CHECK(j["results"]["divergent_fraction"]["seed"] == 7);
}

TEST_CASE("the reproduction report is deterministic and complete") {
  const auto a = run({"report", "--format", "json"});
  const auto b = run({"report", "--format", "json"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const json j = json::parse(a.out);
  const json& z = j["results"]["zsqrt2"];
  CHECK(z["form_count"] == 10);
  CHECK(z["chamber_count"] == 20);
  CHECK(z["wild_chamber_count"] == 5);
  CHECK(z["divergence_density_bound"]["value"] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(z["tame_lattice_density_radius_10"]["exact"] == "138/317");
  CHECK(z["product_hypothesis_holds"] == false);
  CHECK(z["orbit_1_0"]["period"] == 2);

  const json& f = j["results"]["section4:d=3,b=1"];
  CHECK(f["form_count"] >= 2);
  CHECK(f["bound_matches_closed_form"] == true);
  CHECK(f["product_hypothesis_holds"] == true);
  CHECK(f["multiplier_product"] == 8192);
}

TEST_CASE("results can be written to a file") {
  const std::string path = "/tmp/collatz_test_out.json";
  const auto r = run({"validate", "--catalog", "zsqrt2", "--out", path, "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const std::string contents = read_file(path);
  CHECK(contents.find("\"valid\": true") != std::string::npos);
}

TEST_CASE("help requests succeed") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("hyperplanes") != std::string::npos);

  const auto sub = run({"stopping", "--help"});
  CHECK(sub.code == 0);
  CHECK(sub.out.find("--point") != std::string::npos);
}

TEST_CASE("text rendering") {
  const auto r = run({"validate", "--catalog", "zsqrt2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("valid: true") != std::string::npos);
}

TEST_CASE("exact density CSV") {
  const auto r =
      run({"density-exact", "--catalog", "zsqrt2", "--radius", "10", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("radius,exact_density,value\n", 0) == 0);
  CHECK(r.out.find("10,138/317,") != std::string::npos);
}

TEST_CASE("stopping-set table CSV") {
  const auto r = run({"ak", "--catalog", "zsqrt2", "--k-max", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("k,a_k,value\n", 0) == 0);
  CHECK(r.out.find("1,1/4,0.25\n") != std::string::npos);
  CHECK(r.out.find("2,5/16,0.3125\n") != std::string::npos);
  CHECK(count_lines(r.out) == 4);
}

TEST_CASE("hypothesis command") {
  const auto r = run({"hypothesis", "--catalog", "section4:d=3,b=1", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["product"] == 8192);
  CHECK(j["results"]["bound"] == 19683);
  CHECK(j["results"]["holds"] == true);

  const auto z = run({"hypothesis", "--catalog", "zsqrt2", "--format", "json"});
  const json zj = json::parse(z.out);
  CHECK(zj["results"]["holds"] == false);
}

TEST_CASE("bound command includes the closed form for family maps") {
  const auto fam = run({"bound", "--catalog", "section4:d=3,b=1", "--format", "json"});
  REQUIRE(fam.code == 0);
  const json fj = json::parse(fam.out);
  CHECK(fj["results"].contains("closed_form_bound"));
  CHECK(fj["results"]["bound"]["kind"] == "exact");

  const auto z = run({"bound", "--catalog", "zsqrt2", "--format", "json"});
  const json zj = json::parse(z.out);
  CHECK_FALSE(zj["results"].contains("closed_form_bound"));
  CHECK(zj["results"]["bound"]["value"] == doctest::Approx(0.5).epsilon(1e-12));
}
