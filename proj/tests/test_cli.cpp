// End-to-end checks of the installed command-line interface, run as a
// subprocess. NOPOSIM_CLI_PATH is injected by the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string command =
      std::string(NOPOSIM_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buffer.data(), buffer.size(), pipe)) {
    result.output += buffer.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("help and version") {
  CHECK(run_cli("--help").exit_code == 0);
  const auto version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.output.find("1.0.0") != std::string::npos);
}

TEST_CASE("invalid spec exits with code 1 and names the field") {
  const auto result = run_cli("run --set model=kuramoto --set ring.n=8");
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("rates.gamma_inj") != std::string::npos);

  CHECK(run_cli("validate nosuchsuite").exit_code == 1);
}

TEST_CASE("byte-identical outputs across seeds and thread counts") {
  const auto dir = fs::temp_directory_path() / "noposim_cli_determinism";
  fs::remove_all(dir);
  const std::string common =
      "run --quiet --set model=kuramoto --set ring.n=16 "
      "--set \"rates.gamma_inj=2 Hz\" --set \"rates.d_theta=1 Hz\" "
      "--set \"times.t_a=0.2 s, 0.4 s\" --set run.n_trajectories=6 ";

  CHECK(run_cli(common + "--seed 11 --threads 1 --out-dir " +
                (dir / "t1").string()).exit_code == 0);
  CHECK(run_cli(common + "--seed 11 --threads 2 --out-dir " +
                (dir / "t2").string()).exit_code == 0);
  CHECK(run_cli(common + "--seed 11 --threads 2 --out-dir " +
                (dir / "t2again").string()).exit_code == 0);

  const auto csv1 = slurp(dir / "t1" / "samples.csv");
  CHECK(csv1 == slurp(dir / "t2" / "samples.csv"));
  CHECK(csv1 == slurp(dir / "t2again" / "samples.csv"));
  CHECK(slurp(dir / "t1" / "summary.json") ==
        slurp(dir / "t2" / "summary.json"));

  // Different seed, different samples.
  CHECK(run_cli(common + "--seed 12 --out-dir " + (dir / "s2").string())
            .exit_code == 0);
  CHECK(csv1 != slurp(dir / "s2" / "samples.csv"));

  // CSV schema: header row, LF endings, unix newlines only.
  CHECK(csv1.rfind("trajectory_id,t_a_seconds,k,theta_k,theta_rel_k\n", 0) == 0);
  CHECK(csv1.find('\r') == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("validate subcommand emits a machine-readable report") {
  const auto dir = fs::temp_directory_path() / "noposim_cli_validate";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto json_path = dir / "report.json";
  const auto result =
      run_cli("validate analytics --quick --json " + json_path.string());
  CHECK(result.exit_code == 0);
  const auto report = slurp(json_path);
  CHECK(report.find("\"schema\": \"noposim-validate-v1\"") != std::string::npos);
  CHECK(report.find("\"passed\": true") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("validate-opo subcommand") {
  CHECK(run_cli("validate-opo --quick").exit_code == 0);
}

TEST_CASE("analytics subcommand prints the table") {
  const auto result = run_cli("analytics --beta 0,1 --n 3,5000");
  CHECK(result.exit_code == 0);
  CHECK(result.output.rfind("N,beta,log_Z,", 0) == 0);
  CHECK(result.output.find("5000,1,") != std::string::npos);
}

TEST_CASE("mcmc subcommand writes samples and summary") {
  const auto dir = fs::temp_directory_path() / "noposim_cli_mcmc";
  fs::remove_all(dir);
  const auto result = run_cli(
      "mcmc --beta 2 --n 32 --sweeps 500 --thin 5 --seed 4 --out-dir " +
      dir.string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"beta_eff\"") != std::string::npos);
  CHECK(fs::exists(dir / "samples.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  const auto csv = slurp(dir / "samples.csv");
  CHECK(csv.rfind("trajectory_id,", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("config file with flag overrides, flags win") {
  const auto dir = fs::temp_directory_path() / "noposim_cli_config";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto config_path = dir / "exp.conf";
  {
    std::ofstream out(config_path);
    out << "model = kuramoto\n"
        << "ring.n = 8\n"
        << "rates.gamma_inj = 4 Hz\n"
        << "rates.d_theta = 2 Hz\n"
        << "times.t_a = 0.1 s\n"
        << "run.n_trajectories = 2\n"
        << "output.dir = " << (dir / "from_config").string() << "\n";
  }
  const auto result = run_cli("run --quiet --config " + config_path.string() +
                              " --out-dir " + (dir / "from_flag").string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(dir / "from_flag" / "summary.json"));
  CHECK(!fs::exists(dir / "from_config"));
  fs::remove_all(dir);
}
