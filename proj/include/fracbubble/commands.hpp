#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracbubble/config.hpp"
#include "fracbubble/io.hpp"

namespace fracbubble {

enum ExitCode { kExitOk = 0, kExitVerifyFailed = 1, kExitComputation = 2, kExitConfig = 3 };

// FRACBUBBLE_THREADS, when set to a positive integer, wins over the flag.
int resolve_threads(int flag_threads);

// Each command writes into `out` and finishes with manifest.json. The returned code
// is 0 or 1; errors propagate as fracbubble::Error.
int cmd_landscape(const RunConfig& c, OutputDir& out, int threads);
int cmd_asymptotics(const RunConfig& c, OutputDir& out, int threads);
int cmd_solve(const RunConfig& c, OutputDir& out, int threads);
int cmd_regularity(const RunConfig& c, OutputDir& out, int threads);
int cmd_verify(const RunConfig& c, OutputDir& out, int threads, std::string* report = nullptr);

// Maps exceptions to exit codes and prints one diagnostic line to stderr.
int run_guarded(const std::function<int()>& body);

}  // namespace fracbubble
