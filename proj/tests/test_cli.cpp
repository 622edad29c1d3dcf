#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(MEDJN_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string fixture(const char* name) { return std::string(MEDJN_FIXTURES_DIR) + "/" + name; }

std::string two_point_args() {
  return "--space " + fixture("two_point.json") + " --function " + fixture("f01.json");
}

}  // namespace

TEST_CASE("cli median and JN norm on the two-point fixture") {
  const Run m = cli("median " + two_point_args() + " --s 0.5 --set all");
  CHECK(m.status == 0);
  CHECK(nlohmann::json::parse(m.out)["median"] == 1.0);

  const Run jn = cli("jn-median " + two_point_args() + " --p 2 --s 0.5 --mode exact");
  CHECK(jn.status == 0);
  CHECK(nlohmann::json::parse(jn.out)["norm"].get<double>() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
}

TEST_CASE("cli text mode reports the same numbers") {
  const Run j = cli("jn-integral " + two_point_args() + " --p 2 --q 1");
  const Run t = cli("jn-integral " + two_point_args() + " --p 2 --q 1 --output text");
  REQUIRE(j.status == 0);
  REQUIRE(t.status == 0);
  const auto norm = nlohmann::json::parse(j.out)["norm"].dump();
  CHECK(t.out.find("norm: " + norm + "\n") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  CHECK(cli("median --bogus").status == 2);
  CHECK(cli("").status == 2);
  CHECK(cli("median --space /nonexistent.json --function x --s 0.5").status == 2);
  CHECK(cli("median " + two_point_args() + " --s 1.5").status == 2);
  CHECK(cli("jn-median " + two_point_args() + " --p 2 --s 0.5 --mode fancy").status == 2);
  CHECK(cli("--help").status == 0);

  // a decomposition whose chaining constant rho is too small
  const Run gen = cli("verify-boman --space " + fixture("grid1d_space.json"));
  REQUIRE(gen.status == 0);
  auto dec = nlohmann::json::parse(gen.out)["decomposition"];
  dec["rho"] = 1.0000001;
  const auto path = std::filesystem::temp_directory_path() / "medjn_cli_bad_decomposition.json";
  std::ofstream(path) << dec.dump();
  const Run bad = cli("verify-boman --space " + fixture("grid1d_space.json") + " --decomposition " + path.string());
  CHECK(bad.status == 1);
  CHECK(nlohmann::json::parse(bad.out)["violated"].get<std::string>().find("rho") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("cli pipeline commands") {
  const std::string log = "--space " + fixture("log64_space.json") + " --function " + fixture("log64_function.json");
  const Run local = cli("verify-local-jn " + log + " --center p15 --radius 0.2578125 --p 2");
  CHECK(local.status == 0);
  const auto rep = nlohmann::json::parse(local.out);
  CHECK(rep["entries"].size() == 50);
  for (const char* k : {"lambda0", "constant_c", "s0", "alpha"}) CHECK(rep[k].is_number());

  const std::string dy = "--space " + fixture("dyadic_space.json") + " --function " + fixture("dyadic_function.json") +
                         " --center p0 --radius 2 --eta 16";
  CHECK(cli("cz " + dy + " --lambda 4").status == 0);
  CHECK(cli("cz " + dy + " --lambda 4 --lambda-low 2").status == 0);
  CHECK(cli("cz " + dy + " --lambda 9").status == 2);
  CHECK(cli("good-lambda " + dy + " --lambda 2 --s 0.001").status == 0);
  CHECK(cli("five-cover --space " + fixture("grid2d_space.json")).status == 0);
  CHECK(cli("doubling --space " + fixture("grid2d_space.json")).status == 0);
  CHECK(cli("bmo " + two_point_args() + " --s 0.5").status == 0);
  CHECK(cli("oscillation " + two_point_args() + " --s 0.5 --q 2").status == 0);
  CHECK(cli("equivalence " + two_point_args() + " --p 2 --q 1 --s 0.5").status == 0);

  const std::string g1 = "--space " + fixture("grid1d_space.json") + " --function " + fixture("grid1d_function.json");
  const Run global = cli("verify-global-jn " + g1 + " --decomposition " + fixture("grid1d_decomposition.json") +
                         " --p 2 --lambda-grid log:0.01:10:20");
  CHECK(global.status == 0);
  CHECK(nlohmann::json::parse(global.out)["entries"].size() == 20);
}

TEST_CASE("cli generate is deterministic") {
  const std::string args = "generate --kind grid --dim 2 --n 3 --weights random --function-kind random_piecewise --seed 5";
  const Run a = cli(args);
  const Run b = cli(args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(cli("generate --kind torus").status == 2);
  CHECK(cli("generate --function-kind spike --param height").status == 2);
}
