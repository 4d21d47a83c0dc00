#pragma once

#include "cli/config.hpp"

namespace fracschrod::cli {

void run_solve(const RunConfig& config);
void run_convergence(const RunConfig& config);
void run_spectrum(const RunConfig& config);
void run_complexity(const RunConfig& config);
/// Returns false if any check failed.
bool run_selftest(const RunConfig& config);

/// Full front end: parse, validate, dispatch. Exit codes: 0 success,
/// 1 numerical failure, 2 invalid input.
int run_cli(int argc, const char* const* argv);

} // namespace fracschrod::cli
