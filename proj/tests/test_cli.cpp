#include "loja/cli.hpp"
#include "loja/errors.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace loja;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs the installed tool through the shell; stderr is discarded.
Outcome tool(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = std::string("'") + LOJA_TOOL_PATH + "' " + args + " 2>/dev/null";
  if (!stdin_text.empty()) cmd = "printf '%s' '" + stdin_text + "' | " + cmd;
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

Json json_of(const Outcome& o) { return Json::parse(o.out); }

Outcome direct(std::vector<std::string> args) {
  std::vector<const char*> argv{"loja-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in;
  std::ostringstream out, err;
  Outcome o;
  o.code = main_entry(static_cast<int>(argv.size()), argv.data(), in, out, err);
  o.out = out.str();
  return o;
}

}  // namespace

TEST_CASE("analyze x1*x2") {
  auto o = tool("analyze 'x1*x2'");
  REQUIRE(o.code == 0);
  auto j = json_of(o);
  CHECK(j["schema"] == "loja-lab/1");
  CHECK(j["theta"] == "1/2");
  CHECK(j["optimal"] == true);
  CHECK(j["pass"] == true);
  CHECK(j["config"]["command"] == "analyze");
  CHECK(j["config"]["seed"] == 1);
}

TEST_CASE("exit codes") {
  CHECK(tool("analyze haraux").code == 2);
  CHECK(tool("analyze 'x^2 - y^3'").code == 2);
  CHECK(tool("analyze 'x^2 y'").code == 1);
  CHECK(tool("analyze").code == 1);
  CHECK(tool("frobnicate 'x'").code == 1);
  CHECK(tool("resolve 'x^2 - y^3' --format xml").code == 1);
  CHECK(tool("resolve 'x^2 - y^3' --format csv").code == 1);
  CHECK(tool("flow 'x^2'").code == 1);
  CHECK(tool("resolve 'y^2 - 2*x^2 - x^3'").code == 2);
  CHECK(tool("estimate 'x^2 - y^3'").code == 0);
  CHECK(tool("estimate delellis").code == 2);
  CHECK(tool("--help").code == 0);
}

TEST_CASE("resolve report") {
  auto o = tool("resolve 'x^2 - y^3'");
  REQUIRE(o.code == 0);
  auto j = json_of(o);
  CHECK(j["root"] == "x^2 - y^3");
  CHECK(j["theta_interval"] == Json::array({"1/2", "8/9"}));
  bool found = false;
  for (const auto& l : j["leaves"]) {
    if (l["chart_path"] == "root/1/2/2") {
      found = true;
      CHECK(l["monomial"] == Json::array({6, 2}));
      CHECK(l["N"] == 8);
      CHECK(l["theta_bound"] == "7/8");
      CHECK(l["residual"] == "1 - v_122");
      CHECK(l["composite_map"].size() == 2);
    }
  }
  CHECK(found);
}

TEST_CASE("stdin input") {
  auto a = tool("analyze -", "x1*x2");
  auto b = tool("analyze 'x1*x2'");
  CHECK(a.code == 0);
  auto ja = json_of(a), jb = json_of(b);
  CHECK(ja["theta"] == jb["theta"]);
  CHECK(ja["C0"] == jb["C0"]);
}

TEST_CASE("reports do not depend on the worker count") {
  for (const char* args : {"verify 'x^2*y^2' --point 0.3,0.4 --crit '0;1'", "demo-cusp", "estimate 'x^2 - y^3'"}) {
    INFO(args);
    auto one = tool(std::string(args) + " --workers 1");
    auto many = tool(std::string(args) + " --workers 6");
    CHECK(one.code == many.code);
    CHECK(one.out == many.out);
    CHECK(one.out == tool(std::string(args) + " --workers 1").out);
  }
}

TEST_CASE("seed changes sampled output") {
  auto a = tool("estimate 'x^2 - y^3' --seed 1");
  auto b = tool("estimate 'x^2 - y^3' --seed 2");
  CHECK(json_of(a)["envelope"] != json_of(b)["envelope"]);
}

TEST_CASE("flow writes the trajectory") {
  auto dir = std::filesystem::temp_directory_path() / "loja_cli_flow";
  std::filesystem::remove_all(dir);
  auto o = tool("flow 'x^2' --point 0.5 --output-path '" + dir.string() + "'");
  REQUIRE(o.code == 0);
  auto j = json_of(o);
  CHECK(std::abs(j["trajectory"]["arc_length"].get<double>() - 0.5) < 1e-6);
  CHECK(j["length_bound"]["pass"] == true);
  REQUIRE(std::filesystem::exists(dir / "report.json"));
  REQUIRE(std::filesystem::exists(dir / "trajectory.csv"));
  std::ifstream csv(dir / "trajectory.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,x_1,E,grad_norm,arc_length");
  std::ifstream rep(dir / "report.json");
  CHECK(Json::parse(rep) == j);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv and human formats") {
  auto csv = tool("estimate 'x1*x2' --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("radius,min_ratio\n", 0) == 0);
  auto h = tool("analyze 'x1*x2' --format human");
  CHECK(h.out.find("theta: 1/2") != std::string::npos);
}

TEST_CASE("estimate uses a saved resolve report") {
  auto dir = std::filesystem::temp_directory_path() / "loja_cli_bound";
  std::filesystem::remove_all(dir);
  REQUIRE(tool("resolve 'x^2 - y^3' --output-path '" + dir.string() + "'").code == 0);
  auto o = tool("estimate 'x^2 - y^3' --bound-from '" + (dir / "report.json").string() + "'");
  CHECK(o.code == 0);
  auto j = json_of(o);
  CHECK(j["bound_source"] == "file");
  CHECK(j["consistency"]["consistent"] == true);
  std::filesystem::remove_all(dir);
}

TEST_CASE("demo-cusp golden comparison") {
  auto o = direct({"demo-cusp"});
  REQUIRE(o.code == 0);
  auto j = Json::parse(o.out);
  CHECK(j["golden"].size() == 6);
  for (const auto& g : j["golden"]) CHECK(g["match"] == true);
  CHECK(j["leaf"]["match"] == true);
  CHECK(j["translated_point"]["N"] == 7);
  CHECK(j["translated_point"]["theta_bound"] == "6/7");
}

TEST_CASE("run rejects builtins where a polynomial is needed") {
  RunConfig c;
  c.command = "resolve";
  c.polynomial_text = "haraux";
  CHECK_THROWS_AS(run(c), PreconditionError);
}
