// Acceptance runner: one line per criterion. Criteria 1-11 run in process;
// criterion 12 drives the CLI.

#include <array>
#include <cstdio>
#include <iostream>
#include <string>
#include <sys/wait.h>
#include <thread>

#include <json.hpp>

#include "medjn/acceptance.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(MEDJN_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// Checks the verify-all report shape; returns an empty string when valid.
std::string schema_error(const nlohmann::json& j) {
  if (!j.is_object()) return "report is not an object";
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) return "missing seed";
  if (!j.contains("pass") || !j["pass"].is_boolean()) return "missing pass";
  if (!j.contains("criteria") || !j["criteria"].is_array()) return "missing criteria";
  if (j["criteria"].size() != 11) return "expected 11 criteria";
  int expect = 1;
  for (const auto& c : j["criteria"]) {
    if (!c.is_object()) return "criterion is not an object";
    if (!c.contains("id") || c["id"] != expect++) return "criteria out of order";
    for (const char* k : {"instances", "violations", "skipped"})
      if (!c.contains(k) || !c[k].is_number_unsigned()) return std::string("criterion lacks ") + k;
    for (const char* k : {"name", "detail"})
      if (!c.contains(k) || !c[k].is_string()) return std::string("criterion lacks ") + k;
    if (!c.contains("pass") || !c["pass"].is_boolean()) return "criterion lacks pass";
  }
  return {};
}

medjn::acceptance::CriterionResult cli_round_trip(std::uint64_t seed) {
  medjn::acceptance::CriterionResult r;
  r.id = 12;
  r.name = "CLI round-trip";
  const std::size_t n = std::max(2u, std::min(8u, std::thread::hardware_concurrency()));
  const std::string base = "verify-all --seed " + std::to_string(seed) + " --fixtures " + MEDJN_FIXTURES_DIR;
  const Run a = run_cli(base + " --threads 1");
  const Run b = run_cli(base + " --threads 1");
  const Run c = run_cli(base + " --threads " + std::to_string(n));
  r.instances = 3;
  std::string err;
  for (const Run* run : {&a, &b, &c}) {
    if (run->status != 0) {
      err = "exit status " + std::to_string(run->status);
      break;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(run->out);
    } catch (const std::exception& e) {
      err = std::string("invalid JSON: ") + e.what();
      break;
    }
    if (err = schema_error(j); !err.empty()) break;
  }
  if (err.empty() && a.out != b.out) err = "two single-thread runs differ";
  if (err.empty() && a.out != c.out) err = "1 vs " + std::to_string(n) + " threads differ";
  r.pass = err.empty();
  r.violations = r.pass ? 0 : 1;
  r.detail = r.pass ? "3 runs exit 0, schema valid, byte-identical across 1 and " + std::to_string(n) + " threads"
                    : err;
  return r;
}

}  // namespace

int main() {
  medjn::acceptance::Options opt;
  opt.fixtures_dir = MEDJN_FIXTURES_DIR;
  opt.threads = std::max(1u, std::thread::hardware_concurrency());
  bool all = true;
  for (const auto& r : medjn::acceptance::run(opt)) {
    std::cout << medjn::acceptance::format_line(r) << std::endl;
    all = all && r.pass;
  }
  const auto r12 = cli_round_trip(opt.seed);
  std::cout << medjn::acceptance::format_line(r12) << std::endl;
  all = all && r12.pass;
  return all ? 0 : 1;
}
