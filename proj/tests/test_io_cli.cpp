#include <doctest.h>

#include <fstream>
#include <random>

#include "skl/cli.hpp"
#include "skl/io.hpp"

using namespace skl;

namespace {

std::string data(const char* name) { return std::string(SKL_DATA_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(SKL_BINARY_DIR) + "/" + name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

RunConfig config(const std::string& sub, std::vector<std::string> inputs = {}) {
  RunConfig cfg;
  cfg.subcommand = sub;
  cfg.inputs = std::move(inputs);
  return cfg;
}

std::string input_error(const Json& j) {
  try {
    build_diagram(diagram_file_from_json(j));
  } catch (const InputError& e) {
    return e.where();
  }
  FAIL("expected an InputError");
  return {};
}

}  // namespace

TEST_CASE("laurent polynomials round trip") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> e(-9, 9), c(-50, 50), d(1, 40);
  for (int t = 0; t < 100; ++t) {
    LaurentPoly p;
    for (int k = 0; k < 4; ++k) p.add_term(e(rng), GaussRat(Rational(c(rng), d(rng)), Rational(c(rng), d(rng))));
    const Json j = laurent_to_json(p);
    CHECK(laurent_from_json(Json::parse(j.dump())) == p);
    for (std::size_t k = 1; k < j.size(); ++k) CHECK(j[k - 1][0].get<long>() < j[k][0].get<long>());
  }
  Integer big("1180591620717411303424");  // 2^70
  const LaurentPoly p = LaurentPoly::monomial(GaussRat(Rational(big, 3), Rational(-1, big)), -2);
  const Json j = laurent_to_json(p);
  CHECK(j[0][1].is_string());
  CHECK(j[0][4].is_string());
  CHECK(laurent_from_json(Json::parse(j.dump())) == p);
  CHECK(laurent_to_json(LaurentPoly::loop_value()).dump() == "[[-2,-1,1,0,1],[2,-1,1,0,1]]");

  CHECK_THROWS_AS(laurent_from_json(Json::parse("[[1,1,0,0,1]]")), InputError);
  CHECK_THROWS_AS(laurent_from_json(Json::parse("[[1,1,1,0,1],[1,2,1,0,1]]")), InputError);
  CHECK_THROWS_AS(laurent_from_json(Json::parse("[[1,1,1]]")), InputError);
}

TEST_CASE("diagram files round trip") {
  for (const char* name : {"loop.json", "trefoil.json", "torus_meridian_over_longitude.json"}) {
    const Json j = read_json_file(data(name));
    const DiagramFile f = diagram_file_from_json(j);
    const Json back = diagram_file_to_json(f);
    CHECK(diagram_file_to_json(diagram_file_from_json(Json::parse(back.dump()))) == back);
    CHECK(back == j);
  }
  Json p = read_json_file(data("loop.json"));
  p["surface"] = Json{{"kind", "punctured_torus"}, {"puncture", Json::parse("[[7,2],[-1,3]]")}};
  p["components"][0]["vertices"] = Json::parse("[[[1,10],[1,10]],[[2,10],[1,10]],[[2,10],[2,10]],[[1,10],[2,10]]]");
  const DiagramFile f = diagram_file_from_json(p);
  CHECK(f.surface.puncture() == Point(Rational(1, 2), Rational(2, 3)));
  CHECK(diagram_file_to_json(f)["surface"]["puncture"].dump() == "[[7,2],[-1,3]]");
}

TEST_CASE("self-crossing overrides") {
  // figure-eight curve; its one self-crossing is met first on segment 0
  Json j = Json::parse(R"({"surface": {"kind": "disk"},
    "components": [{"vertices": [[[0,1],[0,1]], [[2,1],[2,1]], [[2,1],[0,1]], [[0,1],[2,1]]], "level": 0}],
    "self_crossing_overrides": [{"component": 0, "crossing_index": 0, "over": true}]})");
  const Diagram a = build_diagram(diagram_file_from_json(j));
  CHECK(a.crossings()[0].over.segment == 0);
  j["self_crossing_overrides"][0]["over"] = false;
  const Diagram b = build_diagram(diagram_file_from_json(j));
  CHECK(b.crossings()[0].over.segment == 2);

  j["self_crossing_overrides"][0]["crossing_index"] = 1;
  CHECK(input_error(j) == "/self_crossing_overrides/0/crossing_index");
  j["self_crossing_overrides"] = Json::array();
  CHECK_THROWS_AS(build_diagram(diagram_file_from_json(j)), DiagramError);

  // the trefoil overrides alternate along the curve
  const Diagram t = build_diagram(diagram_file_from_json(read_json_file(data("trefoil.json"))));
  std::vector<std::pair<Rational, bool>> passages;
  for (const auto& c : t.crossings()) {
    passages.emplace_back(c.over.position(), true);
    passages.emplace_back(c.under.position(), false);
  }
  std::sort(passages.begin(), passages.end());
  for (std::size_t k = 1; k < passages.size(); ++k) CHECK(passages[k].second != passages[k - 1].second);
}

TEST_CASE("malformed diagram files name the field") {
  const Json good = read_json_file(data("torus_meridian_over_longitude.json"));
  Json j = good;
  j.erase("surface");
  CHECK(input_error(j) == "/surface");
  j = good;
  j["surface"]["kind"] = "sphere";
  CHECK(input_error(j) == "/surface/kind");
  j = good;
  j["components"][1].erase("level");
  CHECK(input_error(j) == "/components/1/level");
  j = good;
  j["components"][0]["vertices"][1][0] = Json::parse("[1,0]");
  CHECK(input_error(j) == "/components/0/vertices/1/0/1");
  j = good;
  j["components"][0]["wrap"] = "x";
  CHECK(input_error(j) == "/components/0/wrap");
  j = good;
  j["self_crossing_overrides"] = Json::parse(R"([{"component": 5, "crossing_index": 0, "over": true}])");
  CHECK(input_error(j) == "/self_crossing_overrides/0/component");

  const std::string path = write_temp("broken.json", "{\"surface\":\n  {\"kind\": \"disk\",,}}");
  try {
    read_json_file(path);
    FAIL("expected a syntax error");
  } catch (const InputError& e) {
    CHECK(e.where() == path + ":2:19");
  }
}

TEST_CASE("Heegaard files") {
  const HeegaardData h = heegaard_from_json(read_json_file(data("rp3.json")));
  CHECK(h.red == std::vector<IVec2>{{1, 0}});
  CHECK(h.blue == std::vector<IVec2>{{1, 2}});
  CHECK(heegaard_from_json(heegaard_to_json(h)).blue == h.blue);
  CHECK_THROWS_AS(heegaard_from_json(Json::parse(R"({"red": [[2,0]], "blue": [[0,1]]})")), InputError);
  CHECK_THROWS_AS(heegaard_from_json(Json::parse(R"({"red": [[1,0]]})")), InputError);
}

TEST_CASE("cli: bracket of the contractible loop") {
  const RunResult r = execute(config("bracket", {data("loop.json")}));
  REQUIRE(r.exit_code == 0);
  const Json& br = r.report["result"]["bracket"];
  REQUIRE(br.size() == 1);
  CHECK(br[0]["multicurve"]["slopes"].empty());
  CHECK(br[0]["coeff"].dump() == "[[-2,-1,1,0,1],[2,-1,1,0,1]]");
  CHECK(r.report["config"]["subcommand"] == "bracket");

  RunConfig at = config("bracket", {data("loop.json")});
  at.zeta = "-1";
  CHECK(execute(at).report["result"]["bracket"][0]["coeff"].dump() == "[[0,-2,1,0,1]]");
}

TEST_CASE("cli: verification suites") {
  RunConfig cfg = config("verify-comm");
  cfg.trials = 100;
  cfg.seed = 7;
  const RunResult r = execute(cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.report["result"]["commutativity_pass"] == 100);
  CHECK(execute(cfg).report.dump() == r.report.dump());

  RunConfig m = config("verify-marche");
  m.trials = 30;
  CHECK(execute(m).exit_code == 0);
  RunConfig a = config("a-algebra");
  a.trials = 200;
  CHECK(execute(a).exit_code == 0);
  CHECK(execute(config("verify-comm", {data("torus_meridian_over_longitude.json")})).exit_code == 0);
}

TEST_CASE("cli: Heegaard audit of RP3 reports a witness and succeeds") {
  const RunResult r = execute(config("heegaard-audit", {data("rp3.json")}));
  CHECK(r.exit_code == 0);
  const Json& w = r.report["result"]["witnesses"];
  REQUIRE(!w.empty());
  CHECK(w[0]["writhe_mod4"] == 2);
  CHECK(r.report["result"]["two_torsion"] == true);
  CHECK(r.report["result"]["h1"].dump() == "[2]");
}

TEST_CASE("cli: input errors exit 2") {
  CHECK(execute(config("bracket", {data("missing.json")})).exit_code == 2);
  CHECK(execute(config("bracket")).exit_code == 2);
  CHECK(execute(config("frobnicate")).exit_code == 2);
  RunConfig z = config("bracket", {data("loop.json")});
  z.zeta = "2";
  CHECK(execute(z).exit_code == 2);
  const RunResult bad = execute(config("heegaard-audit", {data("loop.json")}));
  CHECK(bad.exit_code == 2);
  CHECK(bad.diagnostic.find("/red") != std::string::npos);
  RunConfig cap = config("bracket", {data("trefoil.json")});
  cap.max_crossings = 2;
  CHECK(execute(cap).exit_code == 2);
}
