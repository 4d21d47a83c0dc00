#include "cli/config.hpp"

#include "fracschrod/errors.hpp"
#include "fracschrod/extension.hpp"

#include <CLI11.hpp>

#include <bit>
#include <cmath>
#include <string>

namespace fracschrod::cli {

namespace {

const char* const kSubcommands[] = {"solve", "convergence", "spectrum", "complexity", "selftest"};

bool is_auto(const std::string& v) { return v == "auto"; }

double parse_number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) {
      return x;
    }
  } catch (const std::exception&) {
  }
  throw InvalidArgument(key + " must be a number or auto, got '" + v + "'");
}

} // namespace

void register_options(CLI::App& app, RunConfig& c) {
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; flags override it");
  for (const char* name : kSubcommands) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("solve")->description("assemble and solve one system, write solve.csv row");
  app.get_subcommand("convergence")->description("L2 error sweep over N, write convergence.csv");
  app.get_subcommand("spectrum")->description("extreme eigenvalues over (d, N), write spectrum.csv");
  app.get_subcommand("complexity")->description("unit-constant cost models over (d, N)");
  app.get_subcommand("selftest")->description("quick internal consistency checks");

  app.add_option("--d", c.d, "dimension(s), comma separated for sweeps")->delimiter(',');
  app.add_option("--s", c.s, "fractional order in (0,1)");
  app.add_option("--N", c.N, "cells per direction, comma separated for sweeps")->delimiter(',');
  app.add_option("--gamma", c.gamma, "grading exponent or auto");
  app.add_option("--Y", c.Y, "truncation height");
  app.add_option("--method", c.method, "cg, direct, ode, fd or schrodinger");
  app.add_option("--tol", c.tol, "CG relative residual tolerance");
  app.add_option("--precond", c.precond, "CG preconditioner: jacobi or none");
  app.add_option("--Np", c.Np, "p-grid points (power of two)");
  app.add_option("--T", c.T, "evolution horizon or auto (from --delta)");
  app.add_option("--delta", c.delta, "steady-state tolerance for T = auto");
  app.add_option("--L", c.L, "left p-window bound or auto");
  app.add_option("--R", c.R, "right p-window bound or auto");
  app.add_option("--floor", c.floor, "e^{-R} floor for the auto window");
  app.add_option("--p-recover", c.p_recover, "recovery threshold (>= 1/2)");
  app.add_option("--scheme", c.scheme, "spectral, chebyshev or midpoint");
  app.add_option("--time-unit", c.time_unit, "raw or relaxation");
  app.add_option("--output", c.output, "CSV path, - for stdout");
  app.add_option("--dump", c.dump, "trace solution dump path (solve)");
  app.add_option("--seed", c.seed, "seed for randomized checks");
  app.add_flag("--no-timing", c.no_timing, "write wall_ms = 0");
}

void finish_parse(const CLI::App& app, RunConfig& c) {
  for (const char* name : kSubcommands) {
    if (app.got_subcommand(name)) {
      c.subcommand = name;
    }
  }
  c.d_given = app.get_option("--d")->count() > 0;
  c.N_given = app.get_option("--N")->count() > 0;
}

void validate(const RunConfig& c) {
  require(!c.d.empty() && !c.N.empty(), "d and N lists must be non-empty");
  for (int d : c.d) {
    require(d >= 1 && d <= 4, "d out of [1,4]");
  }
  for (std::size_t n : c.N) {
    require(n >= 2, "N must be >= 2");
  }
  require(c.s > 0.0 && c.s < 1.0, "s out of (0,1)");
  require(c.Y > 0.0, "Y must be positive");
  if (!is_auto(c.gamma)) {
    require(parse_number("gamma", c.gamma) >= 1.0, "gamma must be >= 1");
  }
  require(c.method == "cg" || c.method == "direct" || c.method == "ode" || c.method == "fd" ||
              c.method == "schrodinger",
          "method must be one of cg, direct, ode, fd, schrodinger");
  require(c.tol > 0.0 && c.tol < 1.0, "tol out of (0,1)");
  require(c.precond == "jacobi" || c.precond == "none", "precond must be jacobi or none");
  require(c.Np >= 2 && std::has_single_bit(c.Np), "Np must be a power of two");
  if (!is_auto(c.T)) {
    require(parse_number("T", c.T) > 0.0, "T must be positive");
  }
  require(c.delta > 0.0 && c.delta < 1.0, "delta out of (0,1)");
  require(is_auto(c.L) == is_auto(c.R), "L and R must both be numbers or both auto");
  if (!is_auto(c.L)) {
    require(parse_number("L", c.L) > 0.0 && parse_number("R", c.R) > 0.0, "L and R must be positive");
  }
  require(c.floor > 0.0 && c.floor < 1.0, "floor out of (0,1)");
  require(c.p_recover >= 0.5, "p-recover must be >= 1/2");
  require(c.scheme == "spectral" || c.scheme == "chebyshev" || c.scheme == "midpoint",
          "scheme must be spectral, chebyshev or midpoint");
  require(c.time_unit == "raw" || c.time_unit == "relaxation", "time-unit must be raw or relaxation");
  if (c.subcommand == "solve") {
    require(c.d.size() == 1 && c.N.size() == 1, "solve takes a single d and N");
  }
  if (c.subcommand == "convergence") {
    for (std::size_t i = 1; i < c.N.size(); ++i) {
      require(c.N[i] > c.N[i - 1], "N list must be strictly increasing");
    }
  }
  if (c.method == "fd") {
    require(c.d.size() == 1 && c.d.front() == 1, "method fd supports d = 1 only");
  }
}

double resolve_gamma(const RunConfig& c, double alpha) {
  return is_auto(c.gamma) ? auto_grading_exponent(alpha) : parse_number("gamma", c.gamma);
}

} // namespace fracschrod::cli
