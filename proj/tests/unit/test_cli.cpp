#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "multitile");
  std::ostringstream out, err;
  const int code = multitile::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("multitile_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate") {
  const Result r = run({"validate", fixtures::scheme_path("square")});
  CHECK(r.code == 0);
  CHECK(r.out.find("volume identity: exact pass") != std::string::npos);
}

TEST_CASE("validation failure exits 1") {
  const std::string bad = tmp("bad.json");
  std::ofstream(bad) << R"({"name": "b", "dimension": 1,
    "prototiles": [{"id": 1, "label": "I", "vertices": [["0"], ["1"]]}],
    "rules": [{"parent": 1, "children": [{"type": 1, "scale": "1/2", "offset": ["0"]}]}]})";
  CHECK(run({"validate", bad}).code == 1);
  std::remove(bad.c_str());
}

TEST_CASE("graph verdict line") {
  const Result r = run({"graph", fixtures::scheme_path("square")});
  CHECK(r.code == 0);
  CHECK(r.out.find("incommensurable (witness: ln5, ln(5/3))") != std::string::npos);
  CHECK(run({"graph", fixtures::scheme_path("fixed-half")}).out.find("commensurable (generator: ln2)") !=
        std::string::npos);
}

TEST_CASE("stats line") {
  const Result r = run({"stats", fixtures::scheme_path("triangles"), "--type", "1", "--interval", "3/5", "4/5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("phi = (175/1152)/Z ≈ 0.29597") != std::string::npos);
  const Result j = run({"stats", fixtures::scheme_path("triangles"), "--type", "U", "--interval", "3/5", "4/5", "--json"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["relative_fraction"]["exact"] == "4375/57024");
  CHECK(run({"stats", fixtures::scheme_path("fixed-half"), "--type", "1"}).code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"generate", fixtures::scheme_path("square")}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("budget errors exit 3") {
  CHECK(run({"generate", fixtures::scheme_path("square"), "--time", "ln(100)", "--budget", "10"}).code == 3);
}

TEST_CASE("generate, oracle and census agree") {
  const std::string bin = tmp("sq.bin"), csv = tmp("sq.csv");
  const Result g = run({"generate", fixtures::scheme_path("square"), "--time", "ln(5/3)", "--out", bin, "--csv", csv});
  CHECK(g.code == 0);
  CHECK(g.out.find("tiles: 17") != std::string::npos);
  CHECK(run({"oracle", fixtures::scheme_path("square"), "--time", "ln(5/3)"}).out == "17\n");
  const Result c = run({"census", fixtures::scheme_path("square"), "--patch", bin});
  CHECK(c.out.find("scale 1/3: 16") != std::string::npos);
  CHECK(slurp(csv).rfind("type,scale_num,scale_den,offset_x,offset_y,depth", 0) == 0);
  std::remove(bin.c_str());
  std::remove(csv.c_str());
}

TEST_CASE("manifest records outputs and reproduces them") {
  const std::string bin = tmp("m.bin"), manifest = tmp("m.json");
  const std::vector<std::string> args{"generate", fixtures::scheme_path("triangles"), "--time", "ln(20)", "--out", bin,
                                      "--manifest", manifest};
  CHECK(run(args).code == 0);
  const auto first = nlohmann::json::parse(slurp(manifest));
  CHECK(first["outputs"].contains(bin));
  CHECK(first["workers"] == 1);
  std::vector<std::string> again = first["command"].get<std::vector<std::string>>();
  again.push_back("--workers");
  again.push_back("4");
  run(again);
  const auto second = nlohmann::json::parse(slurp(manifest));
  CHECK(second["outputs"][bin] == first["outputs"][bin]);
  CHECK(second["outputs"]["stdout"] == first["outputs"]["stdout"]);
  // Without --manifest the manifest goes to stderr.
  const Result r = run({"oracle", fixtures::scheme_path("square"), "--time", "0"});
  CHECK(nlohmann::json::parse(r.err)["schema"] == "multitile.manifest/1");
  std::remove(bin.c_str());
  std::remove(manifest.c_str());
}

TEST_CASE("complexity, discrepancy, stationary, occurrences, render") {
  const std::string sq = fixtures::scheme_path("square");
  const Result c = run({"complexity", sq, "--kmax", "5"});
  CHECK(c.out == "k,c_k\n0,1\n1,2\n2,3\n3,4\n4,5\n5,6\n");
  const Result d = run({"discrepancy", sq, "--period", "ln(5/3)", "--kmax", "3"});
  CHECK(d.out.rfind("t_num,t_den,count,expected,discrepancy\n5,3,17,", 0) == 0);
  const Result s = run({"stationary", sq});
  CHECK(s.out.find("[0] period ln(5/3), path 0, control point (1/2, 1/2)") != std::string::npos);
  CHECK(run({"stationary", sq, "--path", "0"}).out == "anchor: period ln(5/3), path 0, control point (1/2, 1/2)\n");
  CHECK(run({"stationary", sq, "--path", "1"}).code == 1);
  const std::string bin = tmp("st.bin"), svg = tmp("st.svg");
  CHECK(run({"stationary", sq, "--k", "3", "--out", bin}).code == 0);
  const Result o = run({"occurrences", sq, bin, "--extract-box", "-1/2", "-1/2", "1/2", "1/2"});
  CHECK(o.out.find("needle tiles: 1") != std::string::npos);
  CHECK(run({"render", bin, "--scheme", sq, "--style", "by-scale", "--out", svg}).code == 0);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
  CHECK(run({"render", bin, "--scheme", sq, "--supertiles", "1", "--period", "ln(5/3)", "--style", "by-supertile",
             "--out", svg})
            .code == 0);
  CHECK(run({"render", bin, "--scheme", fixtures::scheme_path("triangles")}).code == 1);
  const Result foreign = run({"occurrences", fixtures::scheme_path("triangles"), bin, "--extract-box", "0", "0",
                              "1", "1"});
  CHECK(foreign.code == 1);
  CHECK(foreign.err.find("different scheme") != std::string::npos);
  CHECK(run({"census", fixtures::scheme_path("triangles"), "--patch", bin}).code == 1);
  std::remove(bin.c_str());
  std::remove(svg.c_str());
}

}  // TEST_SUITE
