#pragma once

// Property-based acceptance suite. Each criterion draws its own instances
// from a seeded generator, so results depend only on the seed, never on the
// thread count.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace medjn::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::size_t instances = 0;   // instances checked
  std::size_t violations = 0;  // failed assertions
  std::size_t skipped = 0;     // configurations rejected by preconditions
  std::string detail;          // summary, or the first violation
};

struct Options {
  std::uint64_t seed = 20240611;
  std::size_t threads = 1;
  std::optional<std::set<int>> only;
  // Directory holding the shipped fixtures; generated in memory when empty.
  std::string fixtures_dir;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult(const Options&, std::uint64_t seed)> run;
};

[[nodiscard]] const std::vector<Criterion>& criteria();

// Results sorted by criterion id.
[[nodiscard]] std::vector<CriterionResult> run(const Options& options);

[[nodiscard]] std::string format_line(const CriterionResult& r);

}  // namespace medjn::acceptance
