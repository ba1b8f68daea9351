#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "menger/commands.hpp"
#include "menger/report_json.hpp"

using namespace menger;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "menger_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string generated(const std::vector<std::string>& extra, const std::string& name) {
  const fs::path p = scratch(name);
  std::vector<std::string> args{"generate"};
  args.insert(args.end(), extra.begin(), extra.end());
  args.push_back("--out");
  args.push_back(p.string());
  REQUIRE(cli(args).code == kExitPass);
  return p.string();
}

}  // namespace

TEST_CASE("ball parsing") {
  const Ball B = parse_ball("1,-2.5,3:0.5");
  CHECK(B.center == vec({1, -2.5, 3}));
  CHECK(B.radius == 0.5);
  CHECK_THROWS_AS(parse_ball("1,2"), InputError);
  CHECK_THROWS_AS(parse_ball("1,2:-1"), InputError);
  CHECK_THROWS_AS(parse_ball("1,x:1"), InputError);
  CHECK_THROWS_AS(parse_ball(":1"), InputError);
}

TEST_CASE("generate writes the requested cloud") {
  const Run r = cli({"generate", "sphere", "--D", "3", "--n", "250", "--seed", "4"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  const auto cloud = read_cloud_csv(in);
  CHECK(cloud.size() == 250);
  CHECK(cloud.dim() == 3);
  CHECK(cli({"generate", "sphere", "--D", "3", "--n", "250", "--seed", "4"}).out == r.out);
  CHECK(cli({"generate", "sphere", "--D", "3", "--n", "250", "--seed", "5"}).out != r.out);

  std::istringstream c2(cli({"generate", "cantor", "--level", "2"}).out);
  CHECK(read_cloud_csv(c2).size() == 16);
  std::istringstream pl(cli({"generate", "plane", "--d", "2", "--D", "4", "--n", "40"}).out);
  CHECK(read_cloud_csv(pl).dim() == 4);
}

TEST_CASE("exit codes") {
  CHECK(cli({}).code == kExitInput);
  CHECK(cli({"nonsense"}).code == kExitInput);
  CHECK(cli({"generate", "torus"}).code == kExitInput);
  CHECK(cli({"generate", "plane", "--d", "3", "--D", "2"}).code == kExitInput);
  CHECK(cli({"beta", "--input", "/nonexistent/cloud.csv", "--ball", "0,0:1"}).code == kExitInput);
  CHECK(cli({"verify", "nosuchsuite"}).code == kExitInput);
  CHECK(cli({"constants", "--d", "0"}).code == kExitInput);
  CHECK(cli({"--help"}).code == kExitPass);
  CHECK(cli({"constants", "--d", "2"}).code == kExitPass);

  const fs::path bad = scratch("bad.csv");
  std::ofstream(bad) << "dim=2\n0,0,1\n1,oops,1\n";
  const Run r = cli({"curvature", "--input", bad.string()});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("beta and flatness") {
  const std::string plane = generated({"plane", "--d", "1", "--D", "2", "--n", "300"}, "plane.csv");
  const Run b = cli({"beta", "--input", plane, "--d", "1", "--ball", "0,0:100"});
  REQUIRE(b.code == 0);
  const auto j = nlohmann::json::parse(b.out);
  CHECK(j["beta2"].get<double>() < 1e-12);
  CHECK(j["provenance"]["command"] == "beta");

  const Run f = cli({"flatness", "--input", plane, "--d", "1", "--format", "json"});
  REQUIRE(f.code == 0);
  const FlatnessReport rep = flatness_from_json(Json::parse(f.out));
  CHECK(rep.total < 1e-20);
  CHECK(!rep.terms.empty());

  const Run csv = cli({"flatness", "--input", plane, "--d", "1", "--format", "csv", "--mode", "continuous"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("level,j,t,beta2sq,mass\n", 0) == 0);
  CHECK(cli({"beta", "--input", plane}).code == kExitInput);
}

TEST_CASE("curvature json round trip") {
  const std::string cantor = generated({"cantor", "--level", "2"}, "cantor.csv");
  const Run r = cli({"curvature", "--input", cantor, "--d", "1", "--mode", "exact", "--breakdown", "--samples", "5000"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  const MCEstimate e = estimate_from_json(j);
  CHECK(e.exact);
  CHECK(e.estimate > 0.0);
  CHECK(estimate_json(e, std::nullopt)["estimate"] == j["estimate"]);
  CHECK(j["class_breakdown"].is_object());
  CHECK(j["provenance"]["config"]["mode"] == "exact");

  const Run u = cli({"curvature", "--input", cantor, "--lambda", "0.3"});
  CHECK(u.code == kExitInput);
  const Run far = cli({"curvature", "--input", cantor, "--ball", "0,0:1", "--lambda", "0.3", "--format", "csv"});
  CHECK(far.code == 0);
}

TEST_CASE("output to a file") {
  const fs::path p = scratch("beta.json");
  const std::string sphere = generated({"sphere", "--D", "3", "--n", "400"}, "sphere.csv");
  CHECK(cli({"beta", "--input", sphere, "--d", "2", "--ball", "0,0,1:0.5", "--out", p.string()}).code == 0);
  std::ifstream in(p);
  const Json j = Json::parse(in);
  CHECK(j["beta2"].get<double>() > 0.0);
}

TEST_CASE("verify reports and planted violations") {
  const Run ok = cli({"verify", "geometry"});
  CHECK(ok.code == kExitPass);
  const Json j = Json::parse(ok.out);
  CHECK(j["pass"] == true);
  CHECK(j["seed"] == 7);
  CHECK(cli({"verify", "geometry"}).out == ok.out);

  const Run bad = cli({"verify", "geometry", "--plant-violation"});
  CHECK(bad.code == kExitInvariant);
  CHECK(bad.err.find("FAILED geometry.") != std::string::npos);
  CHECK(Json::parse(bad.out)["pass"] == false);
}

TEST_CASE("ratio tables") {
  const std::string cantor = generated({"cantor", "--level", "3"}, "cantor3.csv");
  const Run r = cli({"ratio", "prop11", "--input", cantor, "--balls", "3", "--lambda", "0.2,0.4", "--samples", "2000"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
  CHECK(cli({"ratio", "thm99", "--input", cantor}).code == kExitInput);
}

TEST_CASE("binary exit codes") {
  const std::string exe = MENGER_CLI;
  CHECK(std::system((exe + " constants --d 2 > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((exe + " generate torus > /dev/null 2>&1").c_str())) == kExitInput);
  CHECK(WEXITSTATUS(std::system((exe + " verify geometry --plant-violation > /dev/null 2>&1").c_str())) ==
        kExitInvariant);
}
