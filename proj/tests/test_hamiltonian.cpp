#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qndsq/hamiltonian.hpp"

using namespace qndsq;
using doctest::Approx;

namespace {

const HyperfineLine &line() {
  static const HyperfineLine l = rb87_d2_line();
  return l;
}

double hfs() { return line().excited_hfs_spread(); }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i)
    x[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return x;
}

} // namespace

TEST_CASE("decompose sums detuning-weighted rank coefficients") {
  const double delta = 37.0 * hfs();
  const auto h = decompose(line(), delta);
  double c0 = 0, c1 = 0, c2 = 0;
  for (int Fp = 0; Fp <= 2; ++Fp) {
    const double d = transition_detuning(line(), Fp, delta);
    c0 += rank_coefficient(0, 1, Fp, line()) / d;
    c1 += rank_coefficient(1, 1, Fp, line()) / d;
    c2 += rank_coefficient(2, 1, Fp, line()) / d;
  }
  CHECK(h.c0 == Approx(c0));
  CHECK(h.c1 == Approx(c1));
  CHECK(h.c2_raman == Approx(c2));
  CHECK(h.c2_scalar == h.c2_raman);
  CHECK(h.detuning == delta);
  CHECK(h.c0 != 0.0);
  CHECK_FALSE(DecomposedHamiltonian::scalar_terms_polarimeter_visible);
  CHECK(transition_detuning(line(), 0, delta) == delta);
}

TEST_CASE("equal detunings cancel the Raman term") {
  for (double x : {-500.0, -3.0, 0.7, 12.0, 1e4}) {
    const auto h = decompose(line(), x * hfs(), {true});
    CHECK(std::abs(h.c2_raman) <= 1e-12 * std::abs(h.c0));
  }
}

TEST_CASE("large-detuning limit") {
  const double delta = 1e3 * hfs();
  const auto h = decompose(line(), delta);
  const double eff = effective_coupling(line(), delta);
  CHECK(std::abs(h.c1 - eff) / std::abs(eff) < 1e-3);
  CHECK(raman_suppression_ratio(line(), delta) < 1e-2);
  CHECK(raman_suppression_ratio(line(), 1e6 * hfs()) <
        raman_suppression_ratio(line(), 1e4 * hfs()));
  CHECK(raman_suppression_ratio(line(), 1e8 * hfs()) < 1e-7);
}

TEST_CASE("effective coupling scales as 1/Delta and is odd") {
  const double d = 200.0 * hfs();
  CHECK(effective_coupling(line(), 2 * d) == Approx(effective_coupling(line(), d) / 2));
  CHECK(effective_coupling(line(), d) > 0.0);
  CHECK(effective_coupling(line(), -d) < 0.0);
  CHECK(effective_coupling(line(), d) ==
        Approx(rank_coefficient(1, 1, 0, line()) / d));
}

TEST_CASE("resonance and near-resonance handling") {
  CHECK_THROWS_AS(decompose(line(), 0.0), std::domain_error);
  const double to_f2 = line().level(2).offset - line().level(0).offset;
  CHECK_THROWS_AS(decompose(line(), to_f2), std::domain_error);
  CHECK_NOTHROW(decompose(line(), to_f2 + 1e-3 * line().gamma));
  CHECK_THROWS_AS(effective_coupling(line(), 0.0), std::domain_error);
  CHECK(decompose(line(), 5 * hfs()).near_resonance_warning);
  CHECK_FALSE(decompose(line(), 25 * hfs()).near_resonance_warning);
  CHECK_FALSE(decompose(line(), -25 * hfs()).near_resonance_warning);
}

TEST_CASE("tail exponents of c1 and c2_raman") {
  const auto x = log_grid(1e2, 1e4, 41);
  std::vector<double> d, c1, c2;
  for (double xi : x) {
    const auto h = decompose(line(), xi * hfs());
    d.push_back(xi * hfs());
    c1.push_back(h.c1);
    c2.push_back(h.c2_raman);
  }
  CHECK(fit_power_law_exponent(d, c2) == Approx(-2.0).epsilon(0.05));
  CHECK(fit_power_law_exponent(d, c1) == Approx(-1.0).epsilon(0.1));
  // c2 Delta^2 settles to a constant.
  const double a = c2.front() * d.front() * d.front();
  const double b = c2.back() * d.back() * d.back();
  CHECK(std::abs(a - b) / std::abs(b) < 0.05);
}

TEST_CASE("decompose is odd under detuning and offset reflection") {
  auto mirrored = line();
  for (auto &l : mirrored.excited)
    l.offset = -l.offset;
  for (double x : {-300.0, -30.0, 2.5, 40.0, 900.0}) {
    const auto h = decompose(line(), x * hfs());
    const auto m = decompose(mirrored, -x * hfs());
    CHECK(m.c0 == Approx(-h.c0).epsilon(1e-13));
    CHECK(m.c1 == Approx(-h.c1).epsilon(1e-13));
    CHECK(m.c2_raman == Approx(-h.c2_raman).epsilon(1e-13));
  }
}

TEST_CASE("suppression ratio symmetric under mirrored offset perturbations") {
  // Perturb the F'=1,2 offsets by +-eps and mirror the whole problem; the
  // ratio must come out the same on both sides for every eps in the scan.
  for (double eps : {-0.05, -0.01, 0.0, 0.01, 0.05}) {
    auto up = line(), down = line();
    up.excited[1].offset += eps * hfs();
    up.excited[2].offset -= eps * hfs();
    for (auto &l : down.excited)
      l.offset = -l.offset;
    down.excited[1].offset -= eps * hfs();
    down.excited[2].offset += eps * hfs();
    for (double x : {30.0, 100.0, 1000.0}) {
      CHECK(raman_suppression_ratio(up, x * hfs()) ==
            Approx(raman_suppression_ratio(down, -x * hfs())).epsilon(1e-12));
    }
  }
  // Even in eps to first order: r(eps) + r(-eps) - 2 r(0) is O(eps^2).
  auto ratio_at = [](double eps) {
    auto l = line();
    l.excited[1].offset += eps * hfs();
    l.excited[2].offset -= eps * hfs();
    return raman_suppression_ratio(l, 100 * hfs());
  };
  const double r0 = ratio_at(0.0);
  const double second_1 = ratio_at(1e-3) + ratio_at(-1e-3) - 2 * r0;
  const double second_2 = ratio_at(2e-3) + ratio_at(-2e-3) - 2 * r0;
  CHECK(std::abs(second_2 / second_1) == Approx(4.0).epsilon(0.05));
}

TEST_CASE("detuning scan and CSV") {
  std::vector<double> x;
  for (int i = -1000; i <= 1000; i += 5)
    x.push_back(i);
  const auto rows = detuning_scan(line(), x);
  REQUIRE(rows.size() == x.size());
  int resonant = 0;
  for (const auto &r : rows)
    resonant += r.h ? 0 : 1;
  CHECK(resonant == 1); // the grid passes through the F'=0 resonance

  // Ratio decreases with |Delta| beyond 10 x hfs on both sides.
  double prev_pos = INFINITY, prev_neg = INFINITY;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 10.0) {
      REQUIRE(rows[i].ratio);
      CHECK(*rows[i].ratio < prev_pos);
      prev_pos = *rows[i].ratio;
    }
  for (std::size_t i = x.size(); i-- > 0;)
    if (x[i] < -10.0) {
      REQUIRE(rows[i].ratio);
      CHECK(*rows[i].ratio < prev_neg);
      prev_neg = *rows[i].ratio;
    }

  std::ostringstream os;
  write_scan_csv(os, rows);
  const std::string csv = os.str();
  CHECK(csv.rfind("detuning_over_hfs,c0,c1,c2_raman,ratio\n", 0) == 0);
  CHECK(csv.find("0,nan,nan,nan,nan\n") != std::string::npos);
}

TEST_CASE("c1 changes sign across the F'=0 resonance") {
  CHECK(decompose(line(), -0.01 * hfs()).c1 < 0.0);
  CHECK(decompose(line(), 0.01 * hfs()).c1 > 0.0);
}

TEST_CASE("power-law fit errors") {
  CHECK_THROWS_AS(fit_power_law_exponent({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law_exponent({1.0, 2.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law_exponent({-1.0, 2.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK(fit_power_law_exponent({1, 2, 4}, {3, 0.75, 0.1875}) == Approx(-2.0));
}
