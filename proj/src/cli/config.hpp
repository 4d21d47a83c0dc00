#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace fracschrod::cli {

/// Everything a run needs. String fields accept "auto" where noted.
struct RunConfig {
  std::string subcommand;

  std::vector<int> d{1};
  double s = 0.2;
  std::vector<std::size_t> N{16};
  std::string gamma = "1"; ///< number or "auto"
  double Y = 10.0;

  std::string method = "cg"; ///< cg, direct, ode, fd, schrodinger
  double tol = 1e-10;
  std::string precond = "jacobi"; ///< jacobi or none (CG only)

  std::size_t Np = 2048;
  std::string T = "15"; ///< number or "auto" (from delta)
  double delta = 1e-4;
  std::string L = "auto";
  std::string R = "auto";
  double floor = 1e-9;
  double p_recover = 0.5;
  std::string scheme = "spectral";      ///< spectral, chebyshev, midpoint
  std::string time_unit = "relaxation"; ///< raw, relaxation

  std::string output = "-";
  std::string dump;
  unsigned long long seed = 20240531;
  bool no_timing = false;

  // Set by the parser: whether d / N came from the user or a config file.
  bool d_given = false;
  bool N_given = false;
};

/// Registers the subcommands and flags on app, writing into config. Flags are
/// shared by all subcommands and override values from a --config file.
void register_options(CLI::App& app, RunConfig& config);

/// After a successful parse: records the subcommand and which lists were given.
void finish_parse(const CLI::App& app, RunConfig& config);

/// Range checks before dispatch; throws InvalidArgument.
void validate(const RunConfig& config);

/// "auto" resolves to the automatic grading exponent for alpha.
double resolve_gamma(const RunConfig& config, double alpha);

} // namespace fracschrod::cli
