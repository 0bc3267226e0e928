#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gg/equilibrium.hpp"
#include "gg/sweep.hpp"

using namespace gg;

namespace {
GameParams mean_field(double lambda = 1.0, double sx2 = 1.0, double sz2 = 1.0) {
  return GameParams(AgentCount::infinite(), lambda, sx2, sz2);
}

std::vector<SweepOutput> all_outputs() {
  std::vector<SweepOutput> out;
  for (int i = 0; i <= static_cast<int>(SweepOutput::fano_bound); ++i) {
    out.push_back(static_cast<SweepOutput>(i));
  }
  return out;
}
}  // namespace

TEST_CASE("format_float prints 12 significant digits without locale surprises") {
  CHECK(format_float(0.1) == "0.1");
  CHECK(format_float(1.0) == "1");
  CHECK(format_float(1.0 / 3.0) == "0.333333333333");
  CHECK(format_float(12345.6789) == "12345.6789");
  CHECK(format_float(1e-8) == "1e-08");
}

TEST_CASE("sweep_csv_header matches the documented column set") {
  CHECK(sweep_csv_header(all_outputs()) ==
        "sweep_value,ne_tau,ce_tau,oracle_tau,utility_ne,utility_ce,rho_ne,rho_ce,fano_bound");
  CHECK(sweep_csv_header({SweepOutput::ce_tau, SweepOutput::rho_ne}) ==
        "sweep_value,ce_tau,rho_ne");
}

TEST_CASE("SweepSpec normalizes and validates") {
  const GameParams base = mean_field();
  // outputs are deduplicated and put into canonical order
  const SweepSpec spec(base, SweepVariable::sigma_z_sq, {0.5, 1.0},
                       {SweepOutput::rho_ne, SweepOutput::ce_tau, SweepOutput::rho_ne});
  REQUIRE(spec.outputs.size() == 2);
  CHECK(spec.outputs[0] == SweepOutput::ce_tau);
  CHECK(spec.outputs[1] == SweepOutput::rho_ne);

  CHECK_THROWS_AS(SweepSpec(base, SweepVariable::sigma_z_sq, {1.0, 0.5}, all_outputs()),
                  std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec(base, SweepVariable::sigma_z_sq, {-1.0, 0.5}, all_outputs()),
                  std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec(base, SweepVariable::sigma_z_sq, {}, all_outputs()),
                  std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec(base, SweepVariable::sigma_z_sq, {0.5, 1.0}, {}),
                  std::invalid_argument);
}

TEST_CASE("run_sweep columns agree with direct evaluation") {
  const GameParams base = mean_field();
  const SweepSpec spec(base, SweepVariable::sigma_z_sq, {0.25, 1.0},
                       {SweepOutput::ne_tau, SweepOutput::ce_tau, SweepOutput::oracle_tau});
  const SweepResult r = run_sweep(spec);
  REQUIRE(r.rows.size() == 2);
  REQUIRE(r.rows[0].size() == 3);

  const GameParams p1 = mean_field(1.0, 1.0, 0.25);
  CHECK(r.rows[0][0] == doctest::Approx(ne_threshold(p1).tau_star).epsilon(1e-12));
  CHECK(r.rows[0][1] == doctest::Approx(ce_threshold(p1)).epsilon(1e-12));
  CHECK(r.rows[0][2] == doctest::Approx(oracle_threshold(p1)).epsilon(1e-12));
  // regression from an mpmath bisection of the fixed-point equation
  CHECK(r.rows[0][0] == doctest::Approx(0.7331391645527257).epsilon(1e-9));
}

TEST_CASE("n_agents sweeps cast grid values to integer counts") {
  const GameParams base(AgentCount(10), 1.0, 1.0, 1.0);
  const SweepSpec spec(base, SweepVariable::n_agents, {2.0, 10.0}, {SweepOutput::oracle_tau});
  const SweepResult r = run_sweep(spec);
  CHECK(r.rows[0][0] == doctest::Approx(0.25).epsilon(1e-15));  // lambda/2 (1 - 1/2)
  CHECK(r.rows[1][0] == doctest::Approx(0.45).epsilon(1e-15));
}

TEST_CASE("sweep CSV output is byte-deterministic") {
  const GameParams base = mean_field();
  const SweepSpec spec(base, SweepVariable::sigma_z_sq, {0.5, 1.0, 2.0},
                       {SweepOutput::ne_tau, SweepOutput::rho_ne, SweepOutput::fano_bound});
  std::ostringstream first, second;
  write_sweep_csv(run_sweep(spec), first);
  write_sweep_csv(run_sweep(spec), second);
  CHECK(first.str() == second.str());
  CHECK(first.str().find("sweep_value,ne_tau,rho_ne,fano_bound\n") == 0);

  // every row has the full column count
  std::istringstream lines(first.str());
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("parse helpers round-trip the column names") {
  for (SweepOutput o : all_outputs()) {
    CHECK(parse_sweep_output(to_string(o)) == o);
  }
  CHECK_THROWS_AS(parse_sweep_output("nope"), std::invalid_argument);
  CHECK(parse_sweep_variable("sigma_z_sq") == SweepVariable::sigma_z_sq);
  CHECK(parse_sweep_variable("n_agents") == SweepVariable::n_agents);
  CHECK_THROWS_AS(parse_sweep_variable("sigma"), std::invalid_argument);
}

TEST_CASE("br curve: single-point grid and fixed-point footer") {
  const GameParams p(AgentCount(10), 1.0, 1.0, 1.0);
  const BrCurve curve = compute_br_curve(p, {0.0});
  CHECK(curve.taus.size() == 1);
  CHECK(curve.br_taus.size() == 1);

  std::ostringstream os;
  write_br_curve_csv(curve, os);
  const std::string text = os.str();
  CHECK(text.find("tau,br_tau\n") == 0);
  CHECK(text.find("# ne_tau = ") != std::string::npos);
  // exactly one data row between header and footer
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("br curve crosses the identity exactly once") {
  for (double sz2 : {0.1, 0.5, 1.0}) {
    const GameParams p(AgentCount(10), 1.0, 1.0, sz2);
    std::vector<double> grid;
    const double upper = 1.5 * p.br_coeff() / p.alpha();
    for (int i = 0; i <= 200; ++i) grid.push_back(upper * i / 200);
    const BrCurve curve = compute_br_curve(p, grid);
    int sign_changes = 0;
    double prev = curve.br_taus[0] - curve.taus[0];
    for (std::size_t i = 1; i < curve.taus.size(); ++i) {
      const double v = curve.br_taus[i] - curve.taus[i];
      if ((v > 0.0) != (prev > 0.0)) ++sign_changes;
      prev = v;
    }
    CHECK(sign_changes == 1);
  }
}

TEST_CASE("br curve fixed points increase with the noise variance") {
  double prev = 0.0;
  for (double sz2 : {0.1, 0.5, 1.0}) {
    const GameParams p(AgentCount(10), 1.0, 1.0, sz2);
    const BrCurve curve = compute_br_curve(p, {0.5});
    CHECK(curve.ne_tau > prev);
    prev = curve.ne_tau;
  }
}
