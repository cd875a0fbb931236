#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace csa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;  // unstable queue or empty feasible set

struct RunOptions {
  std::string command;  // analytic | simulate | optimize-age | optimize-throughput | sweep | validate
  std::string scenario_path;
  std::string out_path;  // empty or "-": stdout; relative paths join $CSA_OUT_DIR
  std::string format;    // empty picks the command default (sweep/trace: csv, rest: json)
  std::optional<std::uint64_t> seed;   // overrides [sim] seed
  std::optional<std::uint64_t> slots;  // overrides [sim] horizon
  std::optional<int> reps;             // overrides [sim] replications
  bool trace = false;  // simulate only: emit the per-packet CSV of one replication
};

// Runs one CLI command end to end. Results go to the resolved output target,
// progress and errors to err. Timing never reaches the output stream, so
// reruns with the same scenario and seed are byte-identical.
int run_command(const RunOptions& options, std::ostream& fallback_out, std::ostream& err);

}  // namespace csa
