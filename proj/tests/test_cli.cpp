#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "causalbounds/cli/app.hpp"
#include "causalbounds/cli/config.hpp"
#include "causalbounds/cli/report.hpp"
#include "causalbounds/cli/svg.hpp"
#include "causalbounds/csv.hpp"
#include "causalbounds/error.hpp"
#include "causalbounds/stat_identify.hpp"

using namespace causalbounds;
using namespace causalbounds::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_scratch";
  fs::create_directories(dir);
  return dir / name;
}

std::string put(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string slurp(const std::string& path) { return read_file(path); }

std::string model(const std::string& name) { return CAUSALBOUNDS_SOURCE_DIR "/models/" + name; }

std::string records_csv() {
  std::string s = "y,a,w\n";
  const int cells[2][2][2] = {{{30, 10}, {20, 20}}, {{15, 25}, {12, 28}}};  // [w][a][y]
  for (int w = 0; w < 2; ++w)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        for (int k = 0; k < cells[w][a][y]; ++k) s += std::to_string(y) + "," + std::to_string(a) + ",s" + std::to_string(w) + "\n";
  return s;
}

std::string sbp_csv() {
  std::string s = "BPXSY1,WTMEC2YR\n";
  for (int k = 0; k < 60; ++k) s += std::to_string(120 + k) + "," + std::to_string(1 + k % 3) + "\n";
  s += ".,2\n";
  return s;
}

int count(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

LabeledResult labeled(std::string label, double lo, double hi, IdentificationKind kind) {
  BoundsResult r;
  r.interval = Interval(lo, hi);
  r.kind = kind;
  return {std::move(label), r};
}

double attr(const std::string& svg, const std::string& tag_class, const std::string& name) {
  const std::regex re("class=\"" + tag_class + "\"[^>]*?\\s" + name + "=\"([-0-9.e]+)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, re));
  return std::stod(m[1]);
}

}  // namespace

TEST_CASE("manski and randomized print the worked example") {
  const auto m = invoke({"manski", "--table", "0.3,0.2,0.1,0.4"});
  CHECK(m.code == kExitOk);
  CHECK(m.out == "ACE (nonparametric bounds): [-0.30, 0.70] (partial)\n");
  const auto r = invoke({"randomized", "--counts", "30,20,10,40", "--precision", "4"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "ACE (randomized): 0.4000 (point)\n");
}

TEST_CASE("exit codes") {
  const auto data = put("records.csv", records_csv());
  const auto bad_records = put("bad_records.csv", "y,a\n1,1\n2,0\n");
  const auto separated = put("separated.csv", "y,a,w\n1,1,p\n1,1,p\n0,0,p\n0,0,p\n1,1,q\n0,0,q\n1,0,q\n0,1,q\n");
  const auto broken_model = put("broken.model", "fun g(a) = expit(;\n");
  const auto bad_model = put("bad_prob.model", "param k in [0, 2]; fun g(a) = k*a; fun h(a, m) = m;\n");
  const auto cfg = CAUSALBOUNDS_SOURCE_DIR "/config/amlodipine.toml";
  const auto sbp = put("sbp.csv", sbp_csv());
  const auto low = put("low.csv", "BPXSY1,WTMEC2YR\n120,1\n130,1\n");

  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases{
      {{}, kExitInput},
      {{"--help"}, kExitOk},
      {{"mech", "bounds", "--help"}, kExitOk},
      {{"wibble"}, kExitInput},
      {{"manski"}, kExitInput},
      {{"manski", "--table", "0.3,0.2,0.1"}, kExitInput},
      {{"manski", "--table", "0.5,0.5,0.5,0.5"}, kExitInput},
      {{"manski", "--table", "0.3,0.2,0.1,0.4", "--counts", "1,1,1,1"}, kExitInput},
      {{"manski", "--counts", "0,0,0,0"}, kExitInput},
      {{"manski", "--counts", "1,-1,1,1"}, kExitInput},
      {{"manski", "--data", data}, kExitOk},
      {{"manski", "--data", bad_records}, kExitInput},
      {{"manski", "--data", "no-such-file.csv"}, kExitInput},
      {{"randomized", "--table", "0.5,0.5,0,0"}, kExitComputation},
      {{"gformula", "--data", data}, kExitOk},
      {{"gformula", "--data", data, "--design", "main-effects"}, kExitOk},
      {{"gformula", "--data", data, "--design", "cubic"}, kExitInput},
      {{"gformula", "--data", separated, "--design", "saturated"}, kExitComputation},
      {{"mech", "bounds", model("mediator-slope.model")}, kExitOk},
      {{"mech", "bounds", broken_model}, kExitInput},
      {{"mech", "bounds", bad_model, "--grid", "11"}, kExitComputation},
      {{"mech", "bounds", model("mediator-slope.model"), "--grid", "1"}, kExitInput},
      {{"mech", "check-vacuous", model("constant-outcome.model")}, kExitOk},
      {{"mech", "check-vacuous", model("constant-outcome.model"), "--cap", "0"}, kExitInput},
      {{"pkpd", "run", "--data", sbp, "--config", cfg}, kExitOk},
      {{"pkpd", "run", "--data", low, "--config", cfg}, kExitInput},
      {{"pkpd", "run", "--data", sbp}, kExitInput},
  };
  for (const auto& c : cases) {
    std::string joined;
    for (const auto& a : c.args) joined += a + " ";
    CAPTURE(joined);
    CHECK(invoke(c.args).code == c.code);
  }
}

TEST_CASE("errors go to stderr with a reason") {
  const auto r = invoke({"manski", "--table", "0.5,0.5,0.5,0.5"});
  CHECK(r.out.empty());
  CHECK(r.err.find("error:") == 0);
  const auto u = invoke({"manski", "--bogus"});
  CHECK(u.err.find("Usage") != std::string::npos);
}

TEST_CASE("JSON reports are byte-identical across reruns and omit timing") {
  const auto data = put("records.csv", records_csv());
  const auto sbp = put("sbp.csv", sbp_csv());
  const std::vector<std::vector<std::string>> commands{
      {"manski", "--table", "0.3,0.2,0.1,0.4"},
      {"randomized", "--data", data},
      {"gformula", "--data", data, "--design", "saturated"},
      {"mech", "bounds", model("mediator-slope.model")},
      {"mech", "check-vacuous", model("logistic-full.model")},
      {"pkpd", "run", "--data", sbp, "--config", CAUSALBOUNDS_SOURCE_DIR "/config/amlodipine.toml"},
  };
  for (const auto& base : commands) {
    std::vector<std::string> first = base, second = base;
    const auto a = scratch("a.json").string(), b = scratch("b.json").string();
    first.insert(first.end(), {"--json", a});
    second.insert(second.end(), {"--json", b});
    REQUIRE(invoke(first).code == kExitOk);
    REQUIRE(invoke(second).code == kExitOk);
    // The report records its own command line, which differs only in the path.
    std::string ja = slurp(a), jb = slurp(b);
    CHECK(ja.find("duration_ms") == std::string::npos);
    jb.replace(jb.find("b.json"), 6, "a.json");
    CHECK(ja == jb);
  }
  const auto t = scratch("t.json").string();
  REQUIRE(invoke({"manski", "--table", "0.3,0.2,0.1,0.4", "--json", t, "--timing"}).code == kExitOk);
  CHECK(Json::parse(slurp(t)).contains("duration_ms"));
}

TEST_CASE("JSON report structure and round trip") {
  const auto path = scratch("m.json").string();
  REQUIRE(invoke({"manski", "--table", "0.3,0.2,0.1,0.4", "--json", path}).code == kExitOk);
  const auto j = Json::parse(slurp(path));
  CHECK(j["schema_version"] == kReportSchemaVersion);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["label"] == "ACE (nonparametric bounds)");
  CHECK(j["inputs"][0]["digest"] == content_digest("0.3,0.2,0.1,0.4"));
  const auto back = bounds_from_json(j["results"][0]);
  CHECK(back == manski_ace_bounds(BinaryJointTable(JointEntries{0.3, 0.2, 0.1, 0.4}, "table")));

  BoundsResult r;
  r.interval = Interval(0.1 + 0.2, 1.0 / 3.0);
  r.argmax = ParamPoint{{"t1", 0.39999999999999997}};
  r.components = {{"x", 1e-300}};
  r.diagnostics = {42, "grid", 3, {"a note"}};
  CHECK(bounds_from_json(Json::parse(dump_json(to_json(r)))) == r);
  CHECK_THROWS_AS(bounds_from_json(Json::parse("{\"kind\": \"partial\"}")), DataFormatError);
}

TEST_CASE("content digest is FNV-1a") {
  CHECK(content_digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(content_digest("a") == "fnv1a64:af63dc4c8601ec8c");
}

TEST_CASE("svg geometry") {
  const std::vector<LabeledResult> one{labeled("ACE", -0.3, 0.7, IdentificationKind::partial)};
  const auto svg = render_svg_bounds(one, Interval(-1, 1));
  CHECK(count(svg, "class=\"null-line\"") == 1);
  CHECK(count(svg, "class=\"bound\"") == 1);
  const double x = attr(svg, "bound", "x"), w = attr(svg, "bound", "width");
  const double null_x = attr(svg, "null-line", "x1");
  CHECK(x < null_x);
  CHECK(x + w > null_x);
  CHECK(attr(svg, "bound", "data-lo") == -0.3);
  CHECK(attr(svg, "bound", "data-hi") == 0.7);
  const SvgLayout L;
  CHECK(null_x == doctest::Approx((L.plot_left() + L.plot_right()) / 2).epsilon(1e-3));
  CHECK(w == doctest::Approx(0.5 * (L.plot_right() - L.plot_left())).epsilon(1e-3));

  const std::vector<LabeledResult> pt{labeled("psi", 0.4, 0.4, IdentificationKind::point)};
  const auto p = render_svg_bounds(pt, Interval(-1, 1));
  CHECK(count(p, "class=\"point\"") == 1);
  CHECK(count(p, "class=\"bound\"") == 0);
  CHECK(attr(p, "point", "x1") == attr(p, "point", "x2"));

  const std::vector<LabeledResult> two{labeled("a", -0.3, 0.7, IdentificationKind::partial),
                                       labeled("b", 0.4, 0.4, IdentificationKind::point)};
  const auto t = render_svg_bounds(two, Interval(-1, 1));
  CHECK(count(t, "class=\"result\"") == 2);
  CHECK(count(t, "class=\"null-line\"") == 1);

  const auto unit = render_svg_bounds(std::vector{labeled("c", 0.2, 0.9, IdentificationKind::partial)}, Interval(0, 1));
  CHECK(count(unit, "class=\"null-line\"") == 1);
  CHECK(count(render_svg_bounds(std::vector{labeled("c", 0.2, 0.9, IdentificationKind::partial)}, Interval(0.1, 1)),
              "null-line") == 0);
  CHECK_THROWS_AS(render_svg_bounds(std::vector<LabeledResult>{}, Interval(-1, 1)), DomainError);
}

TEST_CASE("svg file from the command line") {
  const auto path = scratch("m.svg").string();
  REQUIRE(invoke({"manski", "--table", "0.3,0.2,0.1,0.4", "--svg", path}).code == kExitOk);
  const auto svg = slurp(path);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(count(svg, "class=\"null-line\"") == 1);
  CHECK(svg.find("data-label=\"ACE (nonparametric bounds)\"") != std::string::npos);
}

TEST_CASE("check-vacuous output") {
  const auto r = invoke({"mech", "check-vacuous", model("logistic-full.model")});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("vacuous (\xCE\xB5=0.01)\n", 0) == 0);
  CHECK(r.out.find("certified only up to this cap") != std::string::npos);
  const auto c = invoke({"mech", "check-vacuous", model("constant-outcome.model")});
  CHECK(c.out.rfind("non-vacuous", 0) == 0);
}

TEST_CASE("pkpd run warns about dropped rows") {
  const auto sbp = put("sbp.csv", sbp_csv());
  const auto r = invoke({"pkpd", "run", "--data", sbp, "--config", CAUSALBOUNDS_SOURCE_DIR "/config/amlodipine.toml"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("hypertension resolution contrast: [", 0) == 0);
  CHECK(r.err.find("1 of 61 rows dropped") != std::string::npos);
  const auto u = invoke({"pkpd", "run", "--data", sbp, "--config", CAUSALBOUNDS_SOURCE_DIR "/config/amlodipine.toml",
                      "--unweighted"});
  CHECK(u.code == kExitOk);
  CHECK(u.out != r.out);
}

TEST_CASE("config parser") {
  const auto c = parse_config(
      "# comment\n[model]\ndose_mg = 10\nthreshold = 140.0 # inline\n"
      "[parameters]\ntheta1 = [0.25, 0.40]\nlambda0 = 0\n"
      "[data]\nvalue_column = \"BPXSY1\"\nmissing_codes = [\".\", \"NA\"]\ndelimiter = \"\\t\"\n"
      "[search]\nlocal_refine = false\ngrid_points_per_dim = 11\n");
  CHECK(c.number("model", "dose_mg") == 10.0);
  CHECK(c.interval("parameters", "theta1") == Interval(0.25, 0.40));
  CHECK(c.interval("parameters", "lambda0") == Interval(0, 0));
  CHECK(c.boolean("search", "local_refine") == false);
  const auto map = column_map_from(c);
  CHECK(map.value_column == "BPXSY1");
  CHECK(map.delimiter == '\t');
  CHECK(map.missing_codes == std::vector<std::string>{".", "NA"});
  SearchConfig s;
  apply_search_section(c, s);
  CHECK(s.grid_points_per_dim == 11);
  CHECK_FALSE(s.local_refine);
  const auto p = pkpd_config_from(c);
  CHECK(p.theta1 == Interval(0.25, 0.40));
  CHECK(p.lambda1 == Interval(16.3, 36.3));

  try {
    parse_config("[model]\ndose_mg = 10\nthreshold = = 3\n");
    FAIL("expected DataFormatError");
  } catch (const DataFormatError& e) {
    CHECK(e.row() == 3);
  }
  CHECK_THROWS_AS(parse_config("[model\n"), DataFormatError);
  CHECK_THROWS_AS(parse_config("a = \"open\n"), DataFormatError);
  CHECK_THROWS_AS(parse_config("a = 1\na = 2\n"), DataFormatError);
  CHECK_THROWS_AS(pkpd_config_from(parse_config("[parameters]\ntheta9 = 1\n")), DomainError);
  CHECK_THROWS_AS(pkpd_config_from(parse_config("[parameters]\ntheta1 = [0.5, 0.1]\n")), DataFormatError);
  CHECK_THROWS_AS(column_map_from(parse_config("[data]\nweight_column = \"w\"\n")), DomainError);
}

TEST_CASE("shipped config files parse") {
  const auto shipped = read_config(CAUSALBOUNDS_SOURCE_DIR "/config/amlodipine.toml");
  CHECK_NOTHROW(pkpd_config_from(shipped));
  CHECK(column_map_from(shipped).weight_column == std::optional<std::string>("WTMEC2YR"));
  const auto alt = read_config(CAUSALBOUNDS_SOURCE_DIR "/config/nhanes-combined-columns.toml");
  CHECK(column_map_from(alt).value_column == "SystolicBloodPres1StRdgMmHg");
}

TEST_CASE("shipped models run through mech bounds") {
  for (const char* m : {"logistic-full.model", "constant-outcome.model", "no-direct-path.model",
                        "mediator-slope.model"}) {
    CAPTURE(m);
    CHECK(invoke({"mech", "bounds", model(m), "--grid", "5"}).code == kExitOk);
  }
}
