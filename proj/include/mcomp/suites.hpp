#pragma once

// Named randomized property suites. Case i of a run draws everything from
// mix_seed(seed, i), so a single case can be replayed on its own and the
// report does not depend on the thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcomp/json_io.hpp"

namespace mcomp {

struct SuiteOptions {
  std::string name;
  std::size_t cases = 100;
  std::uint64_t seed = 42;
  unsigned depth = 6;
  bool floating = false;
  /// Run only this case index (replay).
  std::optional<std::size_t> only_case;
};

struct SuiteFailure {
  std::string suite;
  std::size_t case_index = 0;
  std::uint64_t case_seed = 0;
  std::string check;
  std::string detail;
  io::Json inputs;
};

struct SuiteReport {
  std::string suite;
  std::size_t cases_run = 0;
  std::size_t checks = 0;
  std::vector<SuiteFailure> failures;
  double wall_seconds = 0;
  bool ok() const { return failures.empty(); }
};

/// Suite identifiers accepted by run_suite, "all" excluded.
const std::vector<std::string>& suite_names();

/// Throws PreconditionError for an unknown suite name.
SuiteReport run_suite(const SuiteOptions& options);

/// Everything except the wall time, so equal runs serialize identically.
io::Json to_json(const SuiteReport& report);

}  // namespace mcomp
