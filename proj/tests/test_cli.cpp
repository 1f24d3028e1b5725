#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + KELLY_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int status = pclose(pipe);
  int code = -1;
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
  return {code, out};
}

struct TempFile {
  fs::path path;
  TempFile(const std::string& name, const std::string& content) {
    path = fs::temp_directory_path() / ("kelly_cli_test_" + name);
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::error_code ec; fs::remove(path, ec); }
  std::string str() const { return path.string(); }
};

const std::string kGamble = "outcome,a,b\nup,2,0\ndown,0,2\n";

}  // namespace

TEST_CASE("solve prints the gambling optimum") {
  TempFile m("solve.csv", kGamble);
  RunResult r = run_cli("solve --market " + m.str() + " --dist 0.75,0.25 --format json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["weights"][0].get<double>() == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(j["weights"][1].get<double>() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(j["growth_nats"].get<double>() == doctest::Approx(0.1308120359411).epsilon(1e-9));
  CHECK(j["doubling_rate_bits"].get<double>() ==
        doctest::Approx(j["growth_nats"].get<double>() / std::log(2.0)));
  CHECK(j["unique"].get<std::string>() == "yes");
}

TEST_CASE("solve accepts uniform, sequence and embedded probabilities") {
  TempFile m("solve2.csv", kGamble);
  RunResult uni = run_cli("solve --market " + m.str() + " --uniform --format json");
  REQUIRE(uni.exit_code == 0);
  CHECK(nlohmann::json::parse(uni.out)["weights"][0].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-10));

  TempFile seq("solve2.seq", "up\nup\ndown\n");
  RunResult emp = run_cli("solve --market " + m.str() + " --sequence " + seq.str() +
                          " --format json");
  REQUIRE(emp.exit_code == 0);
  CHECK(nlohmann::json::parse(emp.out)["weights"][0].get<double>() ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  TempFile mp("solve3.csv", "outcome,a,b,prob\nup,2,0,0.6\ndown,0,2,0.4\n");
  RunResult prob = run_cli("solve --market " + mp.str() + " --format json");
  REQUIRE(prob.exit_code == 0);
  CHECK(nlohmann::json::parse(prob.out)["weights"][0].get<double>() ==
        doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("regret reports the divergence split") {
  TempFile m("regret.csv", kGamble);
  RunResult r = run_cli("regret --market " + m.str() +
                        " --dist 0.75,0.25 --q 0.5,0.5 --format json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["regret_nats"].get<double>() == doctest::Approx(0.1308120359411).epsilon(1e-9));
  CHECK(j["divergence_nats"].get<double>() ==
        doctest::Approx(j["regret_nats"].get<double>()).epsilon(1e-10));
  CHECK(j["cover_gap_nats"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("infinite divergence prints as a string") {
  TempFile m("inf.csv", "outcome,safe,risky\nup,1,1\ndown,1,0\n");
  RunResult r =
      run_cli("regret --market " + m.str() + " --dist 0.5,0.5 --q 1,0 --format json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["divergence_nats"].get<std::string>() == "inf");
  CHECK(j["regret_nats"].get<double>() <= 1e-9);
  CHECK(j["cover_gap_nats"].get<std::string>() == "inf");
}

TEST_CASE("exit codes distinguish parse and domain failures") {
  TempFile bad("bad.csv", "outcome,a,b\nup,2,-1\ndown,0,2\n");
  CHECK(run_cli("solve --market " + bad.str() + " --uniform").exit_code == 2);

  TempFile noemb("noemb.csv", "outcome,a,b\nup,1,2\ndown,1,2\n");
  CHECK(run_cli("embed --market " + noemb.str()).exit_code == 1);

  TempFile m("codes.csv", kGamble);
  CHECK(run_cli("solve --market " + m.str() + " --uniform --dist 0.5,0.5").exit_code == 2);
  CHECK(run_cli("solve --market " + m.str()).exit_code == 2);
  CHECK(run_cli("solve --market /does/not/exist.csv --uniform").exit_code == 2);
  // infeasible constraints are a domain error
  TempFile c("codes_cons.csv", "le,1,1,0.2\n");
  CHECK(run_cli("solve --market " + m.str() + " --uniform --constraints " + c.str())
            .exit_code == 1);
}

TEST_CASE("json output is byte-stable across runs") {
  TempFile m("stable.csv", kGamble);
  std::string args = "sufficiency --market " + m.str() + " --samples 40 --seed 5 --format json";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["is_kelly_market"].get<bool>());
  CHECK(j["agree"].get<bool>());
  CHECK(j["verdict"].get<std::string>() == "proportional");
}

TEST_CASE("simulate emits the wealth table") {
  TempFile m("sim.csv", kGamble);
  TempFile seq("sim.seq", "up\nup\ndown\n");
  RunResult r = run_cli("simulate --market " + m.str() + " --sequence " + seq.str() +
                        " --portfolio kelly=0.75,0.25 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out ==
        "step,portfolio,wealth\n"
        "1,kelly,1.5\n"
        "2,kelly,2.25\n"
        "3,kelly,1.125\n");
  // bad weights are a usage error
  CHECK(run_cli("simulate --market " + m.str() + " --sequence " + seq.str() +
                " --portfolio kelly=0.75")
            .exit_code == 2);
}

TEST_CASE("prune emits a loadable market") {
  TempFile m("prune.csv", "outcome,a,b,c\nup,2,0,0.9\ndown,0,2,0.9\n");
  RunResult r = run_cli("prune --market " + m.str() + " --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == "outcome,a,b\nup,2,0\ndown,0,2\n");
}

TEST_CASE("minimax command reaches the closed form") {
  TempFile m("mm.csv", kGamble);
  TempFile fam("mm_family.csv", "1,0\n0,1\n");
  RunResult r = run_cli("minimax --market " + m.str() + " --family " + fam.str() +
                        " --format json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["value_nats"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(j["robust_portfolio"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("dominance matrix marks strict and weak pairs") {
  TempFile m("dom.csv", "outcome,a,b,d\nup,2,0,1.9\ndown,0,2,0\n");
  RunResult r = run_cli("dominance --market " + m.str() + " --format json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["matrix"][0].get<std::string>() == "=.W");
  CHECK(j["strictly_dominated"][0].get<std::string>() == "d");
}
