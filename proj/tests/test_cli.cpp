#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

CmdResult run_cmd(const std::string& args) {
  const std::string cmd = std::string("\"") + GG_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  char buf[4096];
  while (fgets(buf, sizeof buf, pipe) != nullptr) result.output += buf;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto space = line.find(' ');
    if (space == std::string::npos) continue;
    kv[line.substr(0, space)] = line.substr(space + 1);
  }
  return kv;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: solve reproduces the diffuse-prior threshold") {
  const CmdResult r = run_cmd("solve --n 10 --lambda 1 --sigma-x-sq 1e8 --sigma-z-sq 1");
  REQUIRE(r.exit_code == 0);
  const auto kv = parse_key_values(r.output);
  REQUIRE(kv.count("ne_tau") == 1);
  CHECK(std::abs(std::stod(kv.at("ne_tau")) - 0.45) < 1e-3);
  CHECK(kv.at("method") == "direct_root");
  CHECK(kv.at("methods_agree") == "true");
}

TEST_CASE("cli: solve prints the closed-form benchmark thresholds") {
  const CmdResult r = run_cmd("solve --n 2 --lambda 4 --sigma-x-sq 1 --sigma-z-sq 1");
  REQUIRE(r.exit_code == 0);
  const auto kv = parse_key_values(r.output);
  CHECK(kv.at("oracle_tau") == "1");
  CHECK(std::stod(kv.at("ce_tau")) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cli: solve handles the mean-field regime") {
  const CmdResult r = run_cmd("solve --n inf --lambda 1 --sigma-x-sq 1 --sigma-z-sq 0.25");
  REQUIRE(r.exit_code == 0);
  const auto kv = parse_key_values(r.output);
  // mpmath bisection of Phi(0.2 tau / sqrt(0.45)) = 0.8 tau
  CHECK(std::abs(std::stod(kv.at("ne_tau")) - 0.7331391645527257) < 1e-6);
}

TEST_CASE("cli: invalid parameters exit with code 2") {
  CHECK(run_cmd("solve --n 10 --lambda -1 --sigma-x-sq 1 --sigma-z-sq 1").exit_code == 2);
  CHECK(run_cmd("solve --n 1 --lambda 1 --sigma-x-sq 1 --sigma-z-sq 1").exit_code == 2);
  CHECK(run_cmd("solve --n ten").exit_code == 2);
  CHECK(run_cmd("bogus-subcommand").exit_code == 2);
}

TEST_CASE("cli: unwritable sweep output exits with code 3") {
  const CmdResult r = run_cmd(
      "sweep --n inf --var sigma_z_sq --grid 0.5,1 --outputs oracle_tau "
      "--out /nonexistent-dir/out.csv");
  CHECK(r.exit_code == 3);
}

TEST_CASE("cli: sweep writes the documented header and is byte-deterministic") {
  const auto out1 = temp_file("gg_cli_sweep_a.csv");
  const auto out2 = temp_file("gg_cli_sweep_b.csv");
  const std::string args =
      "sweep --n inf --lambda 1 --sigma-x-sq 1 --var sigma_z_sq --grid 0.5,1,2 "
      "--outputs ne_tau,ce_tau,rho_ne,rho_ce --out ";
  REQUIRE(run_cmd(args + out1.string()).exit_code == 0);
  REQUIRE(run_cmd(args + out2.string()).exit_code == 0);
  const std::string csv1 = slurp(out1);
  CHECK(csv1 == slurp(out2));
  CHECK(csv1.find("sweep_value,ne_tau,ce_tau,rho_ne,rho_ce\n") == 0);
  std::filesystem::remove(out1);
  std::filesystem::remove(out2);
}

TEST_CASE("cli: sweep CSV reproduces the policy orderings") {
  const auto out = temp_file("gg_cli_sweep_order.csv");
  const CmdResult r = run_cmd(
      "sweep --n inf --lambda 1 --sigma-x-sq 1 --var sigma_z_sq --grid 0.25,1,2,4 "
      "--outputs utility_ne,utility_ce,rho_ne,rho_ce,fano_bound --out " +
      out.string());
  REQUIRE(r.exit_code == 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "sweep_value,utility_ne,utility_ce,rho_ne,rho_ce,fano_bound");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string tok;
    std::vector<double> v;
    while (std::getline(fields, tok, ',')) v.push_back(std::stod(tok));
    REQUIRE(v.size() == 6);
    const double utility_ne = v[1], utility_ce = v[2], rho_ne = v[3], rho_ce = v[4],
                 fano = v[5];
    CHECK(utility_ne >= utility_ce - 1e-6);
    CHECK(rho_ce >= rho_ne);  // moderate noise: sigma_z^2 >= 0.25 throughout
    CHECK(fano >= std::max(rho_ne, rho_ce) - 1e-3);
    ++rows;
  }
  CHECK(rows == 4);
  std::filesystem::remove(out);
}

TEST_CASE("cli: br-curve emits rows and the fixed-point footer") {
  const auto out = temp_file("gg_cli_br.csv");
  const CmdResult r = run_cmd(
      "br-curve --n 10 --lambda 1 --sigma-x-sq 1 --sigma-z-sq 1 --tau-linspace 0,2,21 --out " +
      out.string());
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.find("tau,br_tau\n") == 0);
  CHECK(csv.find("# ne_tau = 1.25154760339\n") != std::string::npos);

  // scan the emitted rows: br(tau) - tau changes sign exactly once
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int sign_changes = 0;
  bool have_prev = false;
  double prev = 0.0;
  while (std::getline(lines, line) && line[0] != '#') {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const double tau = std::stod(line.substr(0, comma));
    const double br = std::stod(line.substr(comma + 1));
    const double diff = br - tau;
    if (have_prev && (diff > 0.0) != (prev > 0.0)) ++sign_changes;
    prev = diff;
    have_prev = true;
  }
  CHECK(sign_changes == 1);
  std::filesystem::remove(out);
}

TEST_CASE("cli: simulate output is byte-deterministic") {
  const std::string args =
      "simulate --n 10 --lambda 1 --sigma-x-sq 1 --sigma-z-sq 1 --tau 0.9 --samples 20000 "
      "--seed 7";
  const CmdResult a = run_cmd(args);
  const CmdResult b = run_cmd(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  const auto kv = parse_key_values(a.output);
  CHECK(kv.count("empirical_rho") == 1);
  CHECK(kv.count("rng") == 1);
  CHECK(kv.at("seed") == "7");
}

TEST_CASE("cli: simulate with a never-engaging policy reports zero utility") {
  const CmdResult r = run_cmd(
      "simulate --n 5 --lambda 1 --sigma-x-sq 1 --sigma-z-sq 1 --tau -1e6 --samples 2000 "
      "--seed 1");
  REQUIRE(r.exit_code == 0);
  const auto kv = parse_key_values(r.output);
  CHECK(kv.at("empirical_utility") == "0");
  CHECK(kv.at("utility_std_error") == "0");
}

TEST_CASE("cli: config file provides defaults and flags override it") {
  const auto cfg = temp_file("gg_cli_config.json");
  {
    std::ofstream out(cfg);
    out << R"({"n_agents": 10, "lambda": 2.0, "sigma_x_sq": 1.0, "sigma_z_sq": 1.0})";
  }
  const CmdResult from_config = run_cmd("solve --config " + cfg.string());
  REQUIRE(from_config.exit_code == 0);
  CHECK(parse_key_values(from_config.output).at("oracle_tau") == "0.9");

  const CmdResult overridden = run_cmd("solve --config " + cfg.string() + " --lambda 1");
  REQUIRE(overridden.exit_code == 0);
  CHECK(parse_key_values(overridden.output).at("oracle_tau") == "0.45");
  std::filesystem::remove(cfg);
}

TEST_CASE("cli: help exits cleanly") {
  CHECK(run_cmd("--help").exit_code == 0);
  CHECK(run_cmd("sweep --help").exit_code == 0);
}
