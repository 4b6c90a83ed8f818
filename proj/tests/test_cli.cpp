#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "json.hpp"

using namespace solitonlab::cli;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  json report;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  Run r{code, out.str(), nullptr};
  if (!r.out.empty()) r.report = json::parse(r.out);
  return r;
}

std::string data(const std::string& name) { return std::string(DATA_DIR) + "/" + name; }

std::string scratch(const std::string& name, const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "solitonlab_cli_test";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("soliton on the blown-up plane") {
  auto r = run({"soliton", "--family", "kr", "--in", data("blp2.json")});
  REQUIRE(r.code == 0);
  CHECK(r.report["status"] == "ok");
  const auto xi = r.report["result"]["xi_star"];
  CHECK(std::abs(xi[0].get<double>() + 0.528) < 1e-3);
  CHECK(std::abs(xi[1].get<double>() + 0.528) < 1e-3);
  CHECK(r.report["result"]["residual"].get<double>() < 1e-10);
  for (const char* key : {"dh_measure", "futaki", "reeb_volume", "ode_gauge", "version"})
    CHECK(r.report["conventions"].contains(key));
}

TEST_CASE("mabuchi soliton is exact") {
  auto r = run({"soliton", "--family", "mabuchi", "--in", data("blp2.json")});
  REQUIRE(r.code == 0);
  CHECK(r.report["result"]["xi_star_exact"] == json::array({"-6/11", "-6/11"}));
}

TEST_CASE("conifold volume minimization") {
  auto r = run({"msy", "--in", data("conifold.json")});
  REQUIRE(r.code == 0);
  CHECK(std::abs(r.report["result"]["vol_star"].get<double>() - 16.0 / 27) < 1e-12);
  const auto xi = r.report["result"]["xi_star"];
  CHECK(std::abs(xi[0].get<double>()) < 1e-10);
  CHECK(std::abs(xi[1].get<double>()) < 1e-10);
  CHECK(std::abs(xi[2].get<double>() - 1.5) < 1e-10);
}

TEST_CASE("obstructed interval exits 2") {
  auto r = run({"ode1d", "--in", data("teardrop.json")});
  CHECK(r.code == 2);
  CHECK(r.report["status"] == "infeasible");
  CHECK(r.report["error"]["code"] == "ObstructedFutaki");

  // float offsets go through their decimal form: 0.5 is 1/2
  auto path = scratch("teardrop_float.json", R"({"facets": [{"normal": [1], "offset": 1}, {"normal": [-1], "offset": 0.5}]})");
  CHECK(run({"ode1d", "--in", path}).code == 2);
}

TEST_CASE("quotient and crosscheck") {
  auto q = run({"quotient", "--in", data("conifold_quotient.json")});
  REQUIRE(q.code == 0);
  const auto xi = q.report["result"]["cone_soliton"]["xi_star"];
  CHECK(std::abs(xi[2].get<double>() - 1.5) < 1e-8);
  auto c = run({"crosscheck", "--in", data("conifold_crosscheck.json")});
  REQUIRE(c.code == 0);
  CHECK(c.report["result"]["dh_max_error"].get<double>() < 1e-10);
  CHECK(c.report["result"]["reeb_gap"].get<double>() < 1e-8);
  CHECK(c.report["result"]["dh_invariance"][0]["lhs_exact"] == "16/27");
}

TEST_CASE("futaki, delta and na reports") {
  auto f = run({"futaki", "--in", data("blp2_futaki.json")});
  REQUIRE(f.code == 0);
  for (const auto& row : f.report["result"]["futaki"]) CHECK(std::abs(row["futaki"].get<double>()) < 1e-10);

  auto d = run({"delta", "--in", data("blp2.json")});
  REQUIRE(d.code == 0);
  CHECK(std::abs(d.report["result"]["delta"].get<double>() - 6.0 / 7) < 1e-3);

  auto csv = scratch("density.csv", "");
  auto n = run({"na", "--in", data("blp2_filtration.json"), "--csv", csv});
  REQUIRE(n.code == 0);
  CHECK(n.report["result"]["energy_exact"] == "191/192");
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "s,density");
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::vector<std::string>> jobs{
      {"soliton", "--family", "kr", "--in", data("blp2.json")},
      {"delta", "--in", data("blp2.json"), "--seed", "5"},
      {"na", "--in", data("blp2_filtration.json")},
      {"ode1d", "--in", data("segment.json"), "--grid", "1025"},
      {"check", "--criterion", "4"},
  };
  for (const auto& job : jobs) {
    auto a = run(job), b = run(job);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
  auto file = scratch("report.json", "");
  auto a = run({"msy", "--in", data("conifold.json")});
  auto b = run({"msy", "--in", data("conifold.json"), "--out", file});
  CHECK(b.out.empty());
  std::stringstream written;
  written << std::ifstream(file).rdbuf();
  json wa = a.report, wb = json::parse(written.str());
  wa.erase("options");
  wb.erase("options");
  CHECK(wa == wb);
}

TEST_CASE("schema errors exit 1 with an error object") {
  auto unknown = scratch("unknown.json", R"({"polytope": {"vertices": [[0], [1]]}, "bogus": 1})");
  auto r = run({"futaki", "--in", unknown});
  CHECK(r.code == 1);
  CHECK(r.report["status"] == "error");
  CHECK(r.report["error"]["code"] == "InvalidInput");
  CHECK(r.report["error"]["pointer"] == "/bogus");

  auto family = scratch("family.json", R"({"polytope": "blp2.json", "weight": {"family": "nope"}})");
  std::filesystem::copy_file(data("blp2.json"), std::filesystem::path(family).parent_path() / "blp2.json",
                             std::filesystem::copy_options::overwrite_existing);
  r = run({"futaki", "--in", family});
  CHECK(r.code == 1);
  CHECK(r.report["error"]["pointer"] == "/weight/family");

  auto stray = scratch("stray.json", R"({"polytope": {"vertices": [[0], [1]]}, "weight": {"family": "kr", "xi": [0], "n": 2}})");
  r = run({"futaki", "--in", stray});
  CHECK(r.code == 1);
  CHECK(r.report["error"]["pointer"] == "/weight/n");

  auto broken = scratch("broken.json", "{\"vertices\": [[0], ");
  CHECK(run({"futaki", "--in", broken}).code == 1);
  CHECK(run({"futaki", "--in", data("missing.json")}).code == 1);
  CHECK(run({"msy"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
}

TEST_CASE("check reports failures with exit 1") {
  auto ok = run({"check", "--criterion", "3"});
  CHECK(ok.code == 0);
  CHECK(ok.report["result"]["passed"] == true);
  auto red = run({"check", "--criterion", "7"});
  CHECK(red.code == 1);
  CHECK(red.report["status"] == "failed");
}
