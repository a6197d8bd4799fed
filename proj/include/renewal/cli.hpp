#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "renewal/io.hpp"

namespace renewal {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum ExitStatus : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

// Runs one action described by a config object and writes its artifacts and a
// provenance file under config["out"]. Returns the list of files written.
//
// Keys: action, model (descriptor object), seed, length, replicas, horizon,
// out, desk_scale, threads, plus the action-specific keys documented in
// the README.
std::vector<std::filesystem::path> execute(const json& config, std::ostream& log);

// Re-runs the config stored in a provenance file, optionally into another
// output directory.
std::vector<std::filesystem::path> replay(const std::filesystem::path& provenance,
                                          const std::filesystem::path& out, std::ostream& log);

// Command-line entry point; maps errors to exit codes and prints an error
// JSON to `err` on failure.
int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace renewal
