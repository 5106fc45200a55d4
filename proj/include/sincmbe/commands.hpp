#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace sincmbe {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFail = 2;
inline constexpr int kExitBlowup = 3;

// Command-line overrides applied on top of a parsed config.
struct CliOverrides {
  std::optional<std::string> output_dir;
  std::optional<std::int64_t> record_every;
  std::optional<std::int64_t> snapshot_every;
  std::optional<std::uint64_t> seed;
};

// Runs one simulation; writes energy.csv, snapshots, and metadata.json into
// the output directory. Returns kExitBlowup when the run blows up and the
// config sets fail_on_blowup.
int cmd_simulate(const std::string& config_path, const CliOverrides& overrides);

// Runs both configs from config_a's initial datum (grids must match) and
// writes a_energy.csv, b_energy.csv, and the joined compare.csv.
int cmd_compare(const std::string& config_path_a,
                const std::string& config_path_b,
                const CliOverrides& overrides);

// Brackets the critical time step over the config's sweep_taus; writes
// sweep.csv (one row per probe) and metadata.json with the bracket.
int cmd_sweep(const std::string& config_path, const CliOverrides& overrides);

struct VerifyOptions {
  std::int64_t samples = 100000;
  std::uint64_t seed = 7041;
  int grid_n = 256;
};

// Certifies the pointwise lemma bounds, the multiplier identities and
// contraction constants, and the recurrence bounds. Prints one line per
// check; returns kExitVerifyFail if any fails.
int cmd_verify(const VerifyOptions& options);

}  // namespace sincmbe
