#include "cli/commands.hpp"
#include "cli/csv.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace fracschrod::cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "fracschrod");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1e-300, 123456.789, -2.5e17, 1.0 / 3.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_size(42) == "42");
}

TEST_CASE("csv table") {
  CsvTable t({"a", "b"});
  t.comment("k", 0.5);
  t.row({"1", "2"});
  std::ostringstream os;
  t.write(os);
  CHECK(os.str() == "# k = 0.5\na,b\n1,2\n");
  CHECK_THROWS(t.row({"1"}));
}

TEST_CASE("solve writes one row with resolved values") {
  const auto r = run({"solve", "--d", "1", "--N", "8", "--s", "0.3", "--gamma", "auto", "--no-timing"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "method,d,s,N,gamma,Y,Np,T,h,kappa_est,iters,residual,l2_error,relerr_vs_cg,norm_drift,wall_ms");
  CHECK(count_fields(lines[1]) == 16);
  CHECK(lines[1].rfind("cg,1,0.3,8,", 0) == 0);
  CHECK(lines[1].substr(lines[1].size() - 2) == ",0");
  CHECK(r.out.find("# gamma = ") != std::string::npos);
  CHECK(r.out.find("# gamma_input = auto") != std::string::npos);
}

TEST_CASE("l2 error decreases from N = 16 to N = 32") {
  auto error_of = [](const std::string& N) {
    const auto r = run({"solve", "--N", N, "--gamma", "auto", "--no-timing"});
    REQUIRE(r.code == 0);
    const auto row = data_lines(r.out)[1];
    std::vector<std::string> cells;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    return std::stod(cells[12]);
  };
  CHECK(error_of("32") < error_of("16"));
}

TEST_CASE("solve methods") {
  for (const char* method : {"direct", "ode", "fd", "schrodinger"}) {
    CAPTURE(method);
    const auto r = run({"solve", "--N", "8", "--method", method, "--Np", "256", "--no-timing"});
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(count_fields(lines[1]) == 16);
  }
}

TEST_CASE("output and dump files are deterministic") {
  const fs::path dir = fs::temp_directory_path() / "fracschrod_cli_test";
  fs::create_directories(dir);
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string(), dump = (dir / "trace.csv").string();
  for (const auto& path : {a, b}) {
    REQUIRE(run({"solve", "--method", "schrodinger", "--N", "8", "--Np", "256", "--no-timing", "--output", path,
                 "--dump", dump})
                .code == 0);
  }
  CHECK(slurp(a) == slurp(b));
  CHECK(data_lines(slurp(dump)).size() == 7);
  fs::remove_all(dir);
}

TEST_CASE("convergence, spectrum and complexity tables") {
  const auto conv = run({"convergence", "--N", "8,16", "--gamma", "auto"});
  REQUIRE(conv.code == 0);
  auto lines = data_lines(conv.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "d,s,gamma,N,h,l2_error,observed_order");
  CHECK(lines[1].back() == ',');
  CHECK(conv.err.find("observed_order_final") != std::string::npos);

  const auto single = run({"convergence", "--N", "8"});
  REQUIRE(single.code == 0);
  lines = data_lines(single.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "d,s,gamma,N,h,l2_error");

  const auto spec = run({"spectrum", "--d", "1", "--N", "8"});
  REQUIRE(spec.code == 0);
  lines = data_lines(spec.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "d,N,h,lambda_min,lambda_max,kappa,kappa_bound,nnz_max");
  CHECK(lines[1].substr(lines[1].size() - 2) == ",9");

  const auto cx = run({"complexity"});
  REQUIRE(cx.code == 0);
  lines = data_lines(cx.out);
  CHECK(lines.size() == 13);
  CHECK(lines[0] == "d,h,classical_model,quantum_model,quantum_novtaa_model,g_model");
}

TEST_CASE("config file with flag override") {
  const fs::path cfg = fs::temp_directory_path() / "fracschrod_cli_test.ini";
  {
    std::ofstream out(cfg);
    out << "s = 0.6\nN = 8\n";
  }
  const auto r = run({"solve", "--config", cfg.string(), "--no-timing"});
  REQUIRE(r.code == 0);
  CHECK(data_lines(r.out)[1].rfind("cg,1,0.6,8,", 0) == 0);
  const auto over = run({"solve", "--config", cfg.string(), "--s", "0.4", "--no-timing"});
  REQUIRE(over.code == 0);
  CHECK(data_lines(over.out)[1].rfind("cg,1,0.4,8,", 0) == 0);
  fs::remove(cfg);
}

TEST_CASE("exit codes") {
  const auto bad_s = run({"solve", "--s", "1.5"});
  CHECK(bad_s.code == 2);
  CHECK(bad_s.err.find("s out of (0,1)") != std::string::npos);
  CHECK(run({"solve", "--method", "magic"}).code == 2);
  CHECK(run({"solve", "--Np", "1000", "--method", "schrodinger"}).code == 2);
  CHECK(run({"solve", "--method", "fd", "--d", "2"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"solve", "--unknown-flag"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  const auto st = run({"selftest"});
  CHECK(st.code == 0);
  CHECK(st.out.find("FAIL") == std::string::npos);
}
