#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tcheb/cli.hpp"
#include "tcheb/errors.hpp"
#include "tcheb/json_io.hpp"

using namespace tcheb;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("tcheb_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    write("mm.json", R"({"model":"michaelis_menten","theta":[1.0,1.0],"interval":[0,10],"p1":1})");
    write("e3.json", R"({"model":"exponential3","theta":[1,1,-1],"interval":[0,3]})");
    write("d8.json", R"({"points":[1,2,3,4,5,6,7,8],"weights":[0.125,0.125,0.125,0.125,0.125,0.125,0.125,0.125]})");
    write("d1.json", R"({"points":[2],"weights":[1]})");
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tcheb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("reduce writes a report and a design table") {
  Workspace ws;
  REQUIRE(cli({"reduce", "--model", ws.path("mm.json"), "--design", ws.path("d8.json"), "--out", ws.path("r.json")}) == 0);
  const Json r = read_json_file(ws.path("r.json"));
  const Json& rep = r.at("report");
  CHECK(rep.at("branch") == "odd");
  CHECK(rep.at("direction") == "upper");
  const auto pts = rep.at("output").at("points").get<std::vector<double>>();
  CHECK(pts.size() <= 2);
  CHECK(pts.back() == 10.0);
  CHECK(rep.at("loewner_min_eigenvalue").get<double>() >= -1e-8);
  CHECK(ws.read("r.csv").rfind("point,weight\n", 0) == 0);

  // Round trip of the emitted design.
  const Design out = parse_design(rep.at("output"), Interval(0, 10));
  const auto w = rep.at("output").at("weights").get<std::vector<double>>();
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(out.weights()[i] - w[i]) <= 1e-12);
  CHECK(out.points() == pts);
}

TEST_CASE("reports are byte identical across runs") {
  Workspace ws;
  for (const std::string cmd : {"reduce", "optimize"}) {
    REQUIRE(cli({cmd, "--model", ws.path("mm.json"), "--design", ws.path("d8.json"), "--seed", "3", "--out", ws.path("a.json")}) == 0);
    REQUIRE(cli({cmd, "--model", ws.path("mm.json"), "--design", ws.path("d8.json"), "--seed", "3", "--out", ws.path("b.json")}) == 0);
    CHECK(ws.read("a.json") == ws.read("b.json"));
  }
}

TEST_CASE("moments of a one point design") {
  Workspace ws;
  REQUIRE(cli({"moments", "--model", ws.path("mm.json"), "--design", ws.path("d1.json"), "--out", ws.path("m.json")}) == 0);
  const Json m = read_json_file(ws.path("m.json"));
  CHECK(m.at("index").get<double>() == 1.0);
  CHECK(m.at("k") == 3);
  CHECK(m.at("moments")[1].get<double>() == doctest::Approx(4.0 / 9.0));
}

TEST_CASE("precondition failures exit with status 2") {
  Workspace ws;
  CHECK(cli({"check", "--model", ws.path("mm.json"), "--out", ws.path("c.json")}) == 0);
  CHECK(cli({"check", "--model", ws.path("mm.json"), "--direction", "upper", "--test-hook", "flip-kth", "--out",
             ws.path("c.json")}) == 2);
  const Json c = read_json_file(ws.path("c.json"));
  CHECK_FALSE(c.at("passed").get<bool>());
  CHECK(c.at("directions").at("upper").at("augmented")[0].at("report").at("witness").is_array());

  CHECK(cli({"reduce", "--model", ws.path("e3.json"), "--design", ws.path("d1.json"), "--direction", "upper",
             "--out", ws.path("e.json")}) == 2);
  CHECK(read_json_file(ws.path("e.json")).at("error").at("code") == "precondition_failed");
  // Automatic direction falls back to the valid one.
  CHECK(cli({"optimize", "--model", ws.path("e3.json"), "--out", ws.path("o.json")}) == 0);
  CHECK(read_json_file(ws.path("o.json")).at("direction") == "lower");
}

TEST_CASE("input and schema errors exit with status 1") {
  Workspace ws;
  ws.write("bad.json", "{not json");
  ws.write("unknown.json", R"({"model":"logistic","theta":[1],"interval":[0,1]})");
  ws.write("sum.json", R"({"points":[1,2],"weights":[0.5,0.4]})");
  CHECK(cli({"reduce", "--model", ws.path("missing.json"), "--design", ws.path("d8.json"), "--out", ws.path("x.json")}) == 1);
  CHECK(read_json_file(ws.path("x.json")).at("error").at("code") == "io_error");
  CHECK(cli({"reduce", "--model", ws.path("bad.json"), "--design", ws.path("d8.json"), "--out", ws.path("x.json")}) == 1);
  CHECK(read_json_file(ws.path("x.json")).at("error").at("code") == "schema_error");
  CHECK(cli({"check", "--model", ws.path("unknown.json"), "--out", ws.path("x.json")}) == 1);
  CHECK(read_json_file(ws.path("x.json")).at("error").at("message").get<std::string>().find("exponential3") !=
        std::string::npos);
  CHECK(cli({"moments", "--model", ws.path("mm.json"), "--design", ws.path("sum.json"), "--out", ws.path("x.json")}) == 1);
  CHECK(cli({"moments", "--model", ws.path("mm.json"), "--out", ws.path("x.json")}) == 1);
  CHECK(cli({"reduce", "--model", ws.path("mm.json"), "--design", ws.path("d8.json"), "--tol.nothing=1"}) == 1);
  CHECK(cli({"reduce", "--model", ws.path("mm.json"), "--direction", "sideways"}) == 1);
}

TEST_CASE("tolerance overrides and dominate") {
  Workspace ws;
  CHECK(cli({"dominate", "--model", ws.path("mm.json"), "--design", ws.path("d8.json"), "--tol.loewner=1e-6", "--out",
             ws.path("d.json")}) == 0);
  const Json d = read_json_file(ws.path("d.json"));
  CHECK(d.at("report").at("dominates").get<bool>());
  CHECK(d.at("report").at("tolerance").get<double>() == 1e-6);

  CHECK(cli({"dominate", "--model", ws.path("mm.json"), "--design", ws.path("d1.json"), "--against", ws.path("d8.json"),
             "--out", ws.path("d.json")}) == 0);
  CHECK_FALSE(read_json_file(ws.path("d.json")).at("report").at("dominates").get<bool>());
}

TEST_CASE("batch mode writes one report per input") {
  Workspace ws;
  fs::create_directories(ws.dir / "in");
  ws.write("in/a.json", R"({"points":[1,5,9],"weights":[0.2,0.3,0.5]})");
  ws.write("in/b.json", R"({"points":[3],"weights":[1]})");
  CHECK(cli({"reduce", "--model", ws.path("mm.json"), "--batch", ws.path("in"), "--out", ws.path("out")}) == 0);
  CHECK(fs::exists(ws.dir / "out" / "a.json"));
  CHECK(fs::exists(ws.dir / "out" / "b.csv"));
  CHECK(read_json_file(ws.path("out/b.json")).at("report").at("branch") == "identity");
}
