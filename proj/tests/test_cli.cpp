#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmv/cli.hpp"
#include "cmv/errors.hpp"
#include "cmv/report.hpp"

using namespace cmv;
namespace fs = std::filesystem;

namespace {

const std::string kData = CMV_TEST_DATA_DIR;
const std::string kGolden = CMV_TEST_GOLDEN_DIR;

CliResult run(std::vector<std::string> args) { return run_cli(args); }

Json json_of(const CliResult& r) { return Json::parse(r.out); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("cmv_test_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p.string();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const char* kCounterexampleSpec = R"json({
  "name": "cx",
  "parameters": {"A": 1, "B": 2},
  "metric": [["A*exp(z)", "1", "0"], [null, "x^2 + B*exp(-z)", "x"], [null, null, "1"]],
  "alpha": ["0", "x", "1"],
  "domain": {"min": [-0.25, -0.25, -0.25], "max": [0.25, 0.25, 0.25]}
})json";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check") {
  const CliResult t = run({"check", "--gallery", "flat-torus", "--points", "50", "--seed", "7"});
  CHECK(t.code == kExitOk);
  const Json j = json_of(t);
  CHECK(j["is_compatible"] == true);
  CHECK(std::abs(std::abs(j["k_fit"].get<double>()) - 1.0) < 1e-9);

  const CliResult h = run({"check", "--gallery", "hyperbolic"});
  CHECK(h.code == kExitCheckFailed);
  const Json hj = json_of(h);
  CHECK(hj["is_compatible"] == false);
  CHECK(hj["failed_predicates"][0] == "unit-normal");

  CHECK(run({"check", "--input", "missing.json"}).code == kExitBadInput);
  CHECK(run({"check", "--input", kData + "/counterexample.json"}).code == kExitOk);
  CHECK(run({"check", "--input", kData + "/euclid_dz.json"}).code == kExitCheckFailed);
}

TEST_CASE("lemma-verify") {
  const CliResult c = run({"lemma-verify", "--gallery", "counterexample", "-P", "A=1", "-P", "B=2",
                           "--points", "50", "--tol", "1e-5"});
  CHECK(c.code == kExitOk);
  const CliResult t = run({"lemma-verify", "--gallery", "flat-torus"});
  CHECK(t.code == kExitOk);
  for (const Json& p : json_of(t)["points"])
    for (const Json& row : p["direct"])
      for (const Json& v : row) CHECK(std::abs(v.get<double>()) < 1e-6);
  CHECK(run({"lemma-verify", "--input", kData + "/euclid_dz.json"}).code == kExitDegenerate);
  CHECK(run({"lemma-verify", "--gallery", "hyperbolic"}).code == kExitCheckFailed);
  // an impossible tolerance turns the residual table into a failure
  CHECK(run({"lemma-verify", "--gallery", "counterexample", "--points", "5", "--tol", "1e-30"})
            .code == kExitCheckFailed);
}

TEST_CASE("verdict") {
  const CliResult v = run({"verdict", "-P", "A=2", "-P", "B=1.25", "--radius", "0.1", "--grid", "5"});
  CHECK(v.code == kExitOk);
  const Json j = json_of(v);
  CHECK(j["params"]["AB"].get<double>() == 2.5);
  CHECK(j["summary"].contains("all_sectional_negative_everywhere"));
  CHECK(j["point_count"].get<std::size_t>() == j["points"].size());

  CHECK(run({"verdict", "-P", "A=1", "-P", "B=0.9"}).code == kExitBadInput);
  CHECK(run({"verdict", "-P", "C=1"}).code == kExitBadInput);
  CHECK(run({"verdict", "--radius", "-1"}).code == kExitBadInput);

  const CliResult csv = run({"verdict", "--format", "csv"});
  CHECK(csv.code == kExitOk);
  CHECK(line_count(csv.out) == 257 + 1);

  const std::string out = (fs::temp_directory_path() / "cmv_test_verdict.csv").string();
  fs::remove(out);
  const CliResult both = run({"verdict", "--radius", "0.1", "--grid", "3", "--csv-out", out});
  CHECK(both.code == kExitOk);
  CHECK(line_count(read_file(out)) == json_of(both)["point_count"].get<std::size_t>() + 1);
}

TEST_CASE("scan-umbilic") {
  const CliResult t = run({"scan-umbilic", "--gallery", "flat-torus", "--box", "0,0,0,1,1,1",
                           "--grid", "11"});
  CHECK(t.code == kExitOk);
  const Json tj = json_of(t);
  CHECK(tj["umbilic_points"].empty());
  CHECK(tj["min_lambda"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));

  const Json e = json_of(run({"scan-umbilic", "--input", kData + "/euclid_dz.json", "--grid", "4"}));
  CHECK(e["umbilic_points"].size() == 64);

  const Json c = json_of(run({"scan-umbilic", "--gallery", "counterexample", "--box",
                              "-0.25,-0.25,-0.25,0.25,0.25,0.25", "--grid", "7"}));
  CHECK(c["umbilic_points"].empty());

  const CliResult csv = run({"scan-umbilic", "--gallery", "flat-torus", "--grid", "3", "--format",
                             "csv"});
  CHECK(csv.code == kExitOk);
  CHECK(line_count(csv.out) == 27 + 1);
}

TEST_CASE("gallery and curvature") {
  const CliResult g = run({"gallery"});
  CHECK(g.code == kExitOk);
  CHECK(json_of(g).size() == 3);

  const CliResult c = run({"curvature", "--gallery", "counterexample", "--at", "0,0,0"});
  CHECK(c.code == kExitOk);
  const Json j = json_of(c);
  // Γ^l_ij stored as christoffel[l][i][j], zero-based
  CHECK(j["christoffel"][2][0][0].get<double>() == doctest::Approx(-0.5));
  CHECK(j["christoffel"][2][1][1].get<double>() == doctest::Approx(1.0));
  CHECK(run({"curvature", "--gallery", "counterexample"}).code == kExitBadInput);
  CHECK(run({"gallery", "--format", "csv"}).code == kExitBadInput);
}

TEST_CASE("fault injection: every bad input exits 2") {
  const std::vector<std::pair<std::string, std::string>> bad_specs{
      {"not_json", "{ nope"},
      {"not_object", "[1, 2, 3]"},
      {"unknown_key", R"json({"name":"a","colour":1,"metric":[["1","0","0"],["0","1","0"],["0","0","1"]],"alpha":["0","x","1"],"domain":{"min":[0,0,0],"max":[1,1,1]}})json"},
      {"no_domain", R"json({"name":"a","metric":[["1","0","0"],["0","1","0"],["0","0","1"]],"alpha":["0","x","1"]})json"},
      {"empty_domain", R"json({"name":"a","metric":[["1","0","0"],["0","1","0"],["0","0","1"]],"alpha":["0","x","1"],"domain":{"min":[0,0,0],"max":[-1,1,1]}})json"},
      {"mirror", R"json({"name":"a","metric":[["1","0.5","0"],["0","1","0"],["0","0","1"]],"alpha":["0","x","1"],"domain":{"min":[0,0,0],"max":[1,1,1]}})json"},
      {"syntax", R"json({"name":"a","metric":[["1 +","0","0"],[null,"1","0"],[null,null,"1"]],"alpha":["0","x","1"],"domain":{"min":[0,0,0],"max":[1,1,1]}})json"},
      {"identifier", R"json({"name":"a","metric":[["1","0","0"],[null,"w","0"],[null,null,"1"]],"alpha":["0","x","1"],"domain":{"min":[0,0,0],"max":[1,1,1]}})json"},
      {"short_alpha", R"json({"name":"a","metric":[["1","0","0"],[null,"1","0"],[null,null,"1"]],"alpha":["0","x"],"domain":{"min":[0,0,0],"max":[1,1,1]}})json"},
      {"number_entry", R"json({"name":"a","metric":[[1,"0","0"],[null,"1","0"],[null,null,"1"]],"alpha":["0","x","1"],"domain":{"min":[0,0,0],"max":[1,1,1]}})json"},
      {"not_pd", R"json({"name":"a","metric":[["-1","0","0"],[null,"1","0"],[null,null,"1"]],"alpha":["0","x","1"],"domain":{"min":[0,0,0],"max":[1,1,1]}})json"},
  };
  for (const auto& [name, text] : bad_specs) {
    const std::string path = temp_file(name + ".json", text);
    for (const char* cmd : {"check", "lemma-verify", "scan-umbilic", "curvature"}) {
      std::vector<std::string> args{cmd, "--input", path, "--grid", "2"};
      if (std::string(cmd) == "curvature") args = {cmd, "--input", path, "--at", "0.5,0.5,0.5"};
      if (std::string(cmd) == "check" || std::string(cmd) == "lemma-verify")
        args = {cmd, "--input", path, "--points", "3"};
      const CliResult r = run(args);
      CAPTURE(name);
      CAPTURE(cmd);
      CHECK(r.code == kExitBadInput);
      CHECK_FALSE(r.err.empty());
    }
  }

  const std::vector<std::vector<std::string>> bad_args{
      {},
      {"frobnicate"},
      {"check"},
      {"check", "--gallery", "sphere"},
      {"check", "--gallery", "flat-torus", "--input", kData + "/euclid_dz.json"},
      {"check", "--gallery", "counterexample", "-P", "B"},
      {"check", "--gallery", "counterexample", "-P", "B=abc"},
      {"check", "--gallery", "counterexample", "-P", "C=1"},
      {"check", "--gallery", "counterexample", "-P", "B=0.5"},
      {"check", "--gallery", "flat-torus", "--points", "-3"},
      {"check", "--gallery", "flat-torus", "--format", "xml"},
      {"check", "--input", kData + "/counterexample.json", "-P", "Q=2"},
      {"scan-umbilic", "--gallery", "flat-torus", "--box", "0,0,0,1,1"},
      {"scan-umbilic", "--gallery", "flat-torus", "--box", "1,1,1,0,0,0"},
      {"scan-umbilic", "--gallery", "flat-torus", "--grid", "0"},
      {"curvature", "--gallery", "flat-torus", "--at", "0,0"},
      {"verdict", "--grid", "0"},
      {"verdict", "--csv-out", "/nonexistent-dir/x.csv"},
  };
  for (const auto& args : bad_args) {
    const CliResult r = run(args);
    CAPTURE(args.empty() ? std::string("<none>") : args.back());
    CHECK(r.code == kExitBadInput);
  }
}

TEST_CASE("pair spec files") {
  const Pair p = parse_pair_spec(kCounterexampleSpec);
  CHECK(p.name == "cx");
  CHECK(p.params.at("B") == 2.0);
  const Pair q = parse_pair_spec(kCounterexampleSpec, {{"B", 3.0}});
  CHECK(q.params.at("B") == 3.0);
  CHECK(q.metric.eval_value({0, 0, 0}, q.params)(1, 1) == 3.0);
  CHECK(p.metric.eval_value({0.1, 0, 0}, p.params)(2, 1) == doctest::Approx(0.1));

  // mirrors may differ textually when they parse to the same tree
  const std::string spaced = R"json({"name":"s","metric":[["1","x*y","0"],["x * y","2","0"],[null,null,"1"]],"alpha":["0","x","1"],"domain":{"min":[0,0,0],"max":[1,1,1]}})json";
  CHECK(parse_pair_spec(spaced).metric.eval_value({0.5, 0.5, 0}, {})(0, 1) == 0.25);

  const CliResult f = run({"check", "--input", temp_file("cx.json", kCounterexampleSpec), "-P",
                           "A=2", "-P", "B=1.25"});
  CHECK(f.code == kExitOk);
  CHECK(json_of(f)["k_fit"].get<double>() == doctest::Approx(1.0 / std::sqrt(1.5)).epsilon(1e-7));
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::vector<std::string>> cmds{
      {"check", "--gallery", "counterexample", "--seed", "9"},
      {"lemma-verify", "--gallery", "counterexample", "--points", "10", "--seed", "3"},
      {"verdict", "--radius", "0.1", "--grid", "5", "--seed", "11"},
      {"scan-umbilic", "--gallery", "flat-torus", "--grid", "4", "--format", "csv"},
  };
  for (const auto& c : cmds) {
    const CliResult a = run(c), b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
  CHECK(run({"check", "--gallery", "counterexample", "--seed", "9"}).out !=
        run({"check", "--gallery", "counterexample", "--seed", "10"}).out);
}

TEST_CASE("verdict report matches the golden file") {
  const CliResult v = run({"verdict", "-P", "A=1", "-P", "B=2", "--radius", "0.25", "--grid", "9"});
  REQUIRE(v.code == kExitOk);
  const std::string golden = read_file(fs::path(kGolden) / "verdict_A1_B2_r0.25_n9.json");
  REQUIRE_FALSE(golden.empty());
  CHECK(v.out == golden);
}

TEST_CASE("JSON number formatting") {
  CHECK(dump(Json(0.1)) == "0.10000000000000001\n");
  CHECK(dump(Json(-0.0)) == "0\n");
  CHECK(dump(Json(std::nan(""))) == "null\n");
  CHECK(Json::parse(dump(Json(1.0 / 3.0))).get<double>() == 1.0 / 3.0);
}

}  // TEST_SUITE
