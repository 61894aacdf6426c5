// End-to-end checks of the command-line tool: documented invocations are
// byte-compared against frozen golden transcripts, outputs are reproducible
// run-to-run, and error paths exit with the documented codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CLI_BINARY_PATH
#error "CLI_BINARY_PATH must be defined"
#endif
#ifndef GOLDEN_DIR
#error "GOLDEN_DIR must be defined"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args +
                          " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) {
  return read_file(std::string(GOLDEN_DIR) + "/" + name);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("documented invocations match their golden transcripts") {
  const struct {
    const char* args;
    const char* file;
  } cases[] = {
      {"kappa --space lp:n=10,p=inf", "kappa_lp10_inf.table.txt"},
      {"bound --variant regular_ii --kappa 1 --sigma const:1x4 --gamma 3",
       "bound_regular_ii.table.txt"},
      {"simulate --scheme rademacher-basis:n=100 --N 100 --trials 10 "
       "--gammas 0",
       "simulate_basis.table.txt"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args);
    const RunResult first = run_cli(c.args);
    CHECK(first.exit_code == 0);
    CHECK(first.out == golden(c.file));
    // Identical invocation, identical bytes.
    CHECK(run_cli(c.args).out == first.out);
  }
}

TEST_CASE("structured output is valid JSON with the documented keys") {
  const struct {
    const char* args;
    const char* file;
  } cases[] = {
      {"kappa --space lp:n=10,p=inf --format structured",
       "kappa_lp10_inf.structured.json"},
      {"bound --variant regular_ii --kappa 1 --sigma const:1x4 --gamma 3 "
       "--format structured",
       "bound_regular_ii.structured.json"},
      {"simulate --scheme rademacher-basis:n=100 --N 100 --trials 10 "
       "--gammas 0 --format structured",
       "simulate_basis.structured.json"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args);
    const RunResult r = run_cli(c.args);
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden(c.file));
    CHECK_NOTHROW(nlohmann::json::parse(r.out));
  }

  const auto b = nlohmann::json::parse(
      run_cli("bound --variant regular_ii --kappa 1 --sigma const:1x4 "
              "--gamma 3 --format structured")
          .out);
  const std::array<const char*, 9> keys = {
      "N",     "alpha",      "bound",  "gamma", "gamma_star",
      "kappa", "regime",     "threshold", "variant"};
  CHECK(b.size() == keys.size());
  for (const char* k : keys) CHECK(b.contains(k));
  CHECK(b["gamma_star"] == "inf");
  CHECK(b["regime"] == "not_applicable");
  CHECK(b["N"] == 4);
}

TEST_CASE("csv output carries the documented simulate header") {
  const RunResult r = run_cli(
      "simulate --scheme rademacher-basis:n=100 --N 100 --trials 10 "
      "--gammas 0 --format csv");
  CHECK(r.exit_code == 0);
  const std::string header = r.out.substr(0, r.out.find('\n'));
  CHECK(header ==
        "gamma,threshold,hits,trials,freq,freq_upper_conf,bound,regime");
  CHECK(r.out == golden("simulate_basis.csv"));
}

TEST_CASE("seeded outputs repeat and --seed is echoed") {
  const std::string args =
      "simulate --scheme gaussian-iso:n=3 --N 8 --trials 64 --gammas 1,2 "
      "--seed 5";
  const RunResult a = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == run_cli(args).out);
  CHECK(a.out.find("seed=5") != std::string::npos);
  CHECK(run_cli("verify-smooth --space euclidean:n=3 --trials 100 --seed 9")
            .out.find("seed=9") != std::string::npos);
  // Non-random reports carry no seed key.
  CHECK(run_cli("kappa --space euclidean:n=3").out.find("seed") ==
        std::string::npos);
}

TEST_CASE("gamma-star prints exact round values exactly") {
  const RunResult r = run_cli("gamma-star --alpha 1.5 --sigma const:1x4");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("gamma_star=192\n") != std::string::npos);
}

TEST_CASE("--out redirects the artifact and stdout stays empty") {
  const std::string path = "/tmp/normtail_cli_out_test.txt";
  std::remove(path.c_str());
  const RunResult direct = run_cli("kappa --space euclidean:n=4");
  const RunResult redirected =
      run_cli("kappa --space euclidean:n=4 --out " + path);
  CHECK(redirected.exit_code == 0);
  CHECK(redirected.out.empty());
  CHECK(read_file(path) == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("usage and validation failures exit 2") {
  CHECK(run_cli("kappa --space lp:n=10,p=inf --no-such-flag").exit_code == 2);
  CHECK(run_cli("kappa --space banana:n=1").exit_code == 2);
  CHECK(run_cli("kappa").exit_code == 2);          // missing required flag
  CHECK(run_cli("frobnicate").exit_code == 2);     // unknown subcommand
  CHECK(run_cli("").exit_code == 2);               // subcommand required
  CHECK(run_cli("bound --variant regular_ii --kappa 1 "
                "--sigma file:/nonexistent/sigma.txt --gamma 3")
            .exit_code == 2);
  CHECK(run_cli("bound --variant regular_ii --kappa 1 --sigma const:1x4 "
                "--gamma -1")
            .exit_code == 2);
  CHECK(run_cli("huber-check --space euclidean:n=2 --beta 0").exit_code == 2);
  CHECK(run_cli("simulate --scheme rademacher-basis:n=4 --N 9 --trials 2 "
                "--gammas 0")
            .exit_code == 2);  // horizon exceeds basis dimension
  CHECK(run_cli("trace-check --f cos --lo 0 --hi 1").exit_code == 2);
}

TEST_CASE("help is exit 0") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("kappa --help").exit_code == 0);
}

}  // TEST_SUITE
