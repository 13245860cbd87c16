#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "qndsq/oracle.hpp"

using namespace qndsq;
using doctest::Approx;

namespace {

McConfig make(std::int64_t atoms, std::int64_t trials, NoiseBudget nb,
              std::uint64_t seed = 11) {
  McConfig c;
  c.n_atoms = atoms;
  c.n_trials = trials;
  c.noise = nb;
  c.seed = seed;
  c.threads = 1;
  return c;
}

NoiseBudget loss(double b) { return {b, b, 0.0, 0.0}; }
NoiseBudget decoh(double g) { return {g, 0.0, g, 0.0}; }

} // namespace

TEST_CASE("loss: reference cases") {
  const auto none = mc_loss_variance(make(10000, 10000, loss(0.0)), 1.0);
  CHECK(none.analytic_value == Approx(2500.0));
  CHECK(std::abs(none.z_score) <= 3.0);

  const auto coh = mc_loss_variance(make(10000, 10000, loss(0.3)), 1.0);
  CHECK(coh.analytic_value == Approx(0.7 * 10000 / 4.0));
  CHECK(coh.standard_error > 0.0);
  CHECK(std::abs(coh.z_score) <= 3.0);

  const auto sq = mc_loss_variance(make(10000, 10000, loss(0.2), 12), 0.1);
  CHECK(sq.analytic_value == Approx(var_after_loss(250.0, 0.2, 10000, 0.5)));
  CHECK(std::abs(sq.z_score) <= 3.0);
}

TEST_CASE("decoherence: reference cases") {
  const auto none = mc_decoherence_variance(make(10000, 10000, decoh(0.0)), 1.0, 0.25);
  CHECK(std::abs(none.z_score) <= 3.0);

  const auto d = mc_decoherence_variance(make(10000, 10000, decoh(0.1), 5), 1.0, 0.25);
  CHECK(d.analytic_value == Approx(0.81 * 2500 + 0.09 * 2500 + 0.025 * 10000));
  CHECK(std::abs(d.z_score) <= 3.0);

  // var_gamma = 0 has the loss law's form at the same fraction.
  const auto z = mc_decoherence_variance(make(10000, 10000, decoh(0.2), 6), 0.3, 0.0);
  CHECK(z.analytic_value == Approx(var_after_loss(750.0, 0.2, 10000, 0.5)));
  CHECK(std::abs(z.z_score) <= 3.0);
}

TEST_CASE("end to end: reference cases") {
  const auto zero = mc_end_to_end(make(10000, 10000, split_eta(0.0), 3), 100.0);
  CHECK(zero.analytic_value == 1.0);
  CHECK(std::abs(zero.z_score) <= 3.0);

  const auto fort = mc_end_to_end(make(10000, 10000, split_eta(0.06), 4), 100.0);
  CHECK(fort.analytic_value == Approx(0.2435).epsilon(2e-4));
  CHECK(std::abs(fort.z_score) <= 3.0);

  const auto mot = mc_end_to_end(make(10000, 10000, split_eta(0.10), 8), 25.0);
  CHECK(mot.analytic_value == Approx(0.456).epsilon(1e-3));
  CHECK(std::abs(mot.z_score) <= 3.0);

  CHECK_THROWS_AS(mc_end_to_end(make(1000, 100, split_eta(0.1)), 0.0),
                  std::invalid_argument);
}

TEST_CASE("identical seeds give identical results") {
  const auto cfg = make(2000, 500, split_eta(0.1), 99);
  const auto a = mc_end_to_end(cfg, 25.0);
  const auto b = mc_end_to_end(cfg, 25.0);
  CHECK(a.empirical_variance == b.empirical_variance);
  CHECK(a.standard_error == b.standard_error);
  CHECK(a.z_score == b.z_score);

  auto other = cfg;
  other.seed = 100;
  CHECK(mc_end_to_end(other, 25.0).empirical_variance != a.empirical_variance);
}

TEST_CASE("thread count does not change the result") {
  auto cfg = make(1000, 400, decoh(0.2), 5);
  const auto one = mc_decoherence_variance(cfg, 0.5, 0.25);
  cfg.threads = 3;
  const auto three = mc_decoherence_variance(cfg, 0.5, 0.25);
  CHECK(one.empirical_variance == three.empirical_variance);
  CHECK(one.standard_error == three.standard_error);
}

TEST_CASE("standard error falls as 1/sqrt(trials)") {
  const auto small = mc_loss_variance(make(2000, 1000, loss(0.3), 21), 1.0);
  const auto large = mc_loss_variance(make(2000, 10000, loss(0.3), 22), 1.0);
  const double ratio = small.standard_error / large.standard_error;
  CHECK(ratio > std::sqrt(10.0) / 1.5);
  CHECK(ratio < std::sqrt(10.0) * 1.5);
}

TEST_CASE("battery: at most one 3-sigma exceedance") {
  const auto cases = default_battery(2000, 2000, 20060501);
  CHECK(cases.size() == 20);
  const auto report = run_battery(cases);
  CHECK(report.cases.size() == 20);
  CHECK(report.beyond_3sigma <= 1);
  CHECK(report.max_abs_z <= 4.0);
  std::set<std::uint64_t> seeds;
  for (const auto &c : cases)
    seeds.insert(c.cfg.seed);
  CHECK(seeds.size() == cases.size());
}

TEST_CASE("zero-scattering battery matches exactly") {
  const auto report = run_battery(zero_scattering_battery(1000, 500, 3));
  for (const auto &c : report.cases) {
    CHECK(c.spec.cfg.noise.eta == 0.0);
    CHECK(std::abs(c.result.z_score) <= 3.0);
  }
}

TEST_CASE("battery JSON report") {
  const auto report = run_battery(zero_scattering_battery(100, 100, 1));
  const auto j = nlohmann::json::parse(battery_report_json(report));
  REQUIRE(j["cases"].size() == 20);
  const auto &c = j["cases"][0];
  for (const char *key : {"config", "empirical", "standard_error", "analytic", "z_score", "rng"})
    CHECK(c.contains(key));
  CHECK(c["rng"]["algorithm"] == kRngAlgorithm);
  CHECK(c["rng"]["seed"].get<std::uint64_t>() == report.cases[0].spec.cfg.seed);
  CHECK(j["summary"]["n_cases"] == 20);
  CHECK(battery_report_json(report) == battery_report_json(report));
}

TEST_CASE("attainable input variance") {
  CHECK(attainable_variance_floor(1000) == 0.0);
  CHECK(attainable_variance_floor(1001) == 0.25);
  // Odd N cannot reach a collective variance below 1/4.
  CHECK_THROWS_AS(mc_loss_variance(make(11, 100, loss(0.1)), 0.01), std::invalid_argument);
  CHECK_NOTHROW(mc_loss_variance(make(10, 100, loss(0.1)), 0.0));
  // Nor above the fully correlated N^2/4.
  CHECK_THROWS_AS(mc_loss_variance(make(10, 100, loss(0.1)), 20.0), std::invalid_argument);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(make(5, 1000, loss(0.1)).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make(100, 50, loss(0.1)).validate(), std::invalid_argument);
  NoiseBudget bad{0.1, 0.05, 0.01, 0.0};
  CHECK_THROWS_AS(make(100, 100, bad).validate(), std::invalid_argument);
  CHECK_THROWS_AS(mc_decoherence_variance(make(100, 100, decoh(0.1)), 1.0, -1.0),
                  std::invalid_argument);
  CHECK_NOTHROW(make(10, 100, split_eta(0.3)).validate());
}
