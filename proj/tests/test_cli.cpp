// End-to-end checks of the command-line tool. The binary path arrives via
// the LCU_CLI environment variable (set by ctest); the cases are skipped
// when it is absent so the test binary stays runnable on its own.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lcu/integrals.hpp"

using namespace lcu;

namespace {

std::string run_command(const std::string& cmd, int* exit_code) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

const char* cli_path() { return std::getenv("LCU_CLI"); }

std::string temp_fcidump(uint64_t seed, int n, int rank) {
  IntegralSet iset = random_integrals(seed, n, rank);
  RawIntegrals raw{n, iset.T, iset.V, 0.0};
  std::string path = "cli_fixture_" + std::to_string(seed) + ".fcidump";
  std::ofstream out(path);
  write_fcidump(out, raw);
  return path;
}

}  // namespace

TEST_CASE("cli round trips") {
  const char* cli = cli_path();
  if (!cli) {
    MESSAGE("LCU_CLI not set; skipping the command-line checks");
    return;
  }
  int ec = 0;

  SUBCASE("paper estimates match the ledgers") {
    std::string out = run_command(std::string(cli) + " estimate --paper rwswt --variant lowrank-dirty", &ec);
    CHECK(ec == 0);
    CHECK(out.find("\"per_step_toffoli\": 310688") != std::string::npos);
    CHECK(out.find("\"qubit_total\": 378") != std::string::npos);

    // 2^23 * 9995 with the error budget shifted onto the phase register
    out = run_command(std::string(cli) + " estimate --paper llduc --variant sparse --reallocate-error", &ec);
    CHECK(ec == 0);
    CHECK(out.find("\"total_toffoli\": 83844136960") != std::string::npos);
    CHECK(out.find("\"m\": 23") != std::string::npos);
  }
  SUBCASE("invalid variant is a usage error") {
    run_command(std::string(cli) + " estimate --paper rwswt --variant nonsense", &ec);
    CHECK(ec == 2);
  }
  SUBCASE("factorize reports and scans") {
    // one-body-only input: lambda_W must be zero
    std::string path = temp_fcidump(2024, 3, 0);
    std::string out = run_command(std::string(cli) + " factorize --input " + path, &ec);
    CHECK(ec == 0);
    CHECK(out.find("\"lambda_W\": 0") != std::string::npos);

    // full-rank report carries both norms with lambda_V <= lambda_W
    std::string full = temp_fcidump(2026, 3, 4);
    out = run_command(std::string(cli) + " factorize --input " + full, &ec);
    CHECK(ec == 0);
    auto grab = [&](const char* key) {
      size_t pos = out.find(key);
      REQUIRE(pos != std::string::npos);
      return std::atof(out.c_str() + pos + std::string(key).size());
    };
    CHECK(grab("\"lambda_V\": ") <= grab("\"lambda_W\": ") * (1.0 + 1e-9));
    std::remove(full.c_str());

    std::string path2 = temp_fcidump(2025, 3, 4);
    std::string scan = "cli_scan.csv";
    run_command(std::string(cli) + " factorize --input " + path2 + " --scan " + scan, &ec);
    CHECK(ec == 0);
    std::ifstream in(scan);
    std::string line;
    std::getline(in, line);
    CHECK(line == "rank,lambda_W,reconstruction_error");
    double prev = -1.0;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string rank_s, lw_s;
      std::getline(ls, rank_s, ',');
      std::getline(ls, lw_s, ',');
      double lw = std::atof(lw_s.c_str());
      CHECK(lw >= prev - 1e-12);  // lambda_W column monotone nondecreasing
      prev = lw;
    }
    std::remove(path.c_str());
    std::remove(path2.c_str());
    std::remove(scan.c_str());
  }
  SUBCASE("identical configuration gives byte-identical reports") {
    std::string path = temp_fcidump(7777, 3, 3);
    std::string a = run_command(std::string(cli) + " estimate --input " + path + " --variant sparse", &ec);
    CHECK(ec == 0);
    std::string b = run_command(std::string(cli) + " estimate --input " + path + " --variant sparse", &ec);
    CHECK(ec == 0);
    CHECK(a == b);
    CHECK(!a.empty());
    std::remove(path.c_str());
  }
  SUBCASE("missing input is an i/o error") {
    run_command(std::string(cli) + " factorize --input ./does_not_exist.fcidump", &ec);
    CHECK(ec == 3);
  }
}
