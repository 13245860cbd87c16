#include "qndsq/angular.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace qndsq {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr double kMHz = 2.0 * std::numbers::pi * 1.0e6;

// Angular momenta are carried as twice their value so that half-integers
// stay exact.
int twice(double x) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (!std::isfinite(t) || std::abs(t - r) > 1.0e-9)
    throw std::invalid_argument("angular momentum argument is not a "
                                "half-integer: " +
                                std::to_string(x));
  return static_cast<int>(r);
}

int twice_j(double j) {
  const int tj = twice(j);
  if (tj < 0)
    throw std::invalid_argument("negative angular momentum: " +
                                std::to_string(j));
  return tj;
}

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i)
    f *= i;
  return f;
}

// Triangle condition on doubled values, including integer perimeter.
bool triad(int a, int b, int c) {
  if (c < std::abs(a - b) || c > a + b)
    return false;
  return (a + b + c) % 2 == 0;
}

// Delta(abc)^2 as an exact rational; arguments doubled.
cpp_rational triangle_coeff(int a, int b, int c) {
  return cpp_rational(factorial((a + b - c) / 2) * factorial((a - b + c) / 2) *
                          factorial((-a + b + c) / 2),
                      factorial((a + b + c) / 2 + 1));
}

double signed_sqrt(const cpp_rational &radicand, const cpp_rational &sum) {
  if (sum == 0)
    return 0.0;
  const double mag = std::sqrt(
      static_cast<double>(radicand * sum * sum));
  return sum < 0 ? -mag : mag;
}

} // namespace

double wigner3j(double j1, double j2, double j3, double m1, double m2,
                double m3) {
  const int a = twice_j(j1), b = twice_j(j2), c = twice_j(j3);
  const int ma = twice(m1), mb = twice(m2), mc = twice(m3);

  if (ma + mb + mc != 0)
    return 0.0;
  if (std::abs(ma) > a || std::abs(mb) > b || std::abs(mc) > c)
    return 0.0;
  if ((a + ma) % 2 || (b + mb) % 2 || (c + mc) % 2)
    return 0.0;
  if (!triad(a, b, c))
    return 0.0;

  // Racah's formula, all quantities below are integers.
  const int t1 = (c - b + ma) / 2;
  const int t2 = (c - a - mb) / 2;
  const int t3 = (a + b - c) / 2;
  const int t4 = (a - ma) / 2;
  const int t5 = (b + mb) / 2;
  const int kmin = std::max({0, -t1, -t2});
  const int kmax = std::min({t3, t4, t5});

  cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    cpp_rational term(1, factorial(k) * factorial(t1 + k) * factorial(t2 + k) *
                             factorial(t3 - k) * factorial(t4 - k) *
                             factorial(t5 - k));
    if (k % 2)
      sum -= term;
    else
      sum += term;
  }

  const cpp_rational radicand =
      triangle_coeff(a, b, c) *
      cpp_rational(factorial((a + ma) / 2) * factorial((a - ma) / 2) *
                   factorial((b + mb) / 2) * factorial((b - mb) / 2) *
                   factorial((c + mc) / 2) * factorial((c - mc) / 2));

  const int phase = (a - b - mc) / 2;
  const double value = signed_sqrt(radicand, sum);
  return (phase % 2 == 0) ? value : -value;
}

double wigner6j(double j1, double j2, double j3, double j4, double j5,
                double j6) {
  const int a = twice_j(j1), b = twice_j(j2), c = twice_j(j3);
  const int d = twice_j(j4), e = twice_j(j5), f = twice_j(j6);

  if (!triad(a, b, c) || !triad(a, e, f) || !triad(d, b, f) ||
      !triad(d, e, c))
    return 0.0;

  const int a1 = (a + b + c) / 2;
  const int a2 = (a + e + f) / 2;
  const int a3 = (d + b + f) / 2;
  const int a4 = (d + e + c) / 2;
  const int b1 = (a + b + d + e) / 2;
  const int b2 = (b + c + e + f) / 2;
  const int b3 = (c + a + f + d) / 2;

  const int tmin = std::max({a1, a2, a3, a4});
  const int tmax = std::min({b1, b2, b3});

  cpp_rational sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    cpp_rational term(factorial(t + 1),
                      factorial(t - a1) * factorial(t - a2) *
                          factorial(t - a3) * factorial(t - a4) *
                          factorial(b1 - t) * factorial(b2 - t) *
                          factorial(b3 - t));
    if (t % 2)
      sum -= term;
    else
      sum += term;
  }

  const cpp_rational radicand = triangle_coeff(a, b, c) *
                                triangle_coeff(a, e, f) *
                                triangle_coeff(d, b, f) *
                                triangle_coeff(d, e, c);
  return signed_sqrt(radicand, sum);
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J,
                      double M) {
  const double w = wigner3j(j1, j2, J, m1, m2, -M);
  if (w == 0.0)
    return 0.0;
  const int phase = (twice(j1) - twice(j2) + twice(M)) / 2;
  const double c = std::sqrt(2.0 * J + 1.0) * w;
  return (phase % 2 == 0) ? c : -c;
}

// ---------------------------------------------------------------------------

double HyperfineLine::omega0() const {
  return 2.0 * std::numbers::pi * 299792458.0 / lambda0;
}

double HyperfineLine::excited_hfs_spread() const {
  if (excited.empty())
    return 0.0;
  const auto [lo, hi] = std::minmax_element(
      excited.begin(), excited.end(),
      [](const auto &x, const auto &y) { return x.offset < y.offset; });
  return hi->offset - lo->offset;
}

bool HyperfineLine::has_level(int Fprime) const {
  return std::any_of(excited.begin(), excited.end(),
                     [&](const auto &l) { return l.Fprime == Fprime; });
}

const ExcitedLevel &HyperfineLine::level(int Fprime) const {
  for (const auto &l : excited)
    if (l.Fprime == Fprime)
      return l;
  throw std::invalid_argument("no excited level F'=" + std::to_string(Fprime));
}

void HyperfineLine::validate() const {
  if (!(gamma > 0.0) || !(lambda0 > 0.0))
    throw std::invalid_argument("line: gamma and lambda0 must be positive");
  if (excited.empty())
    throw std::invalid_argument("line: no excited levels");
  if (ground_F < 0)
    throw std::invalid_argument("line: negative ground F");
  twice_j(nuclear_I);
  twice_j(J_ground);
  twice_j(J_excited);
  if (!triad(2 * ground_F, twice(J_ground), twice(nuclear_I)))
    throw std::invalid_argument("line: ground F incompatible with J and I");
  std::vector<int> seen;
  for (const auto &l : excited) {
    const int fp = 2 * l.Fprime;
    if (l.Fprime < 0 || !triad(2 * ground_F, 2, fp) ||
        !triad(twice(J_excited), twice(nuclear_I), fp))
      throw std::invalid_argument("line: F'=" + std::to_string(l.Fprime) +
                                  " violates the triangle rule");
    if (std::find(seen.begin(), seen.end(), l.Fprime) != seen.end())
      throw std::invalid_argument("line: duplicate F'=" +
                                  std::to_string(l.Fprime));
    if (!std::isfinite(l.offset))
      throw std::invalid_argument("line: non-finite offset");
    seen.push_back(l.Fprime);
  }
}

HyperfineLine rb87_d2_line() {
  HyperfineLine line;
  line.ground_F = 1;
  line.nuclear_I = 1.5;
  line.J_ground = 0.5;
  line.J_excited = 1.5;
  line.excited = {
      {0, -495.815 * kMHz}, {1, -423.597 * kMHz}, {2, -266.650 * kMHz}};
  line.gamma = 6.0666 * kMHz;
  line.lambda0 = 780.241e-9;
  return line;
}

HyperfineLine line_from_json_text(const std::string &text) {
  HyperfineLine line;
  try {
    const auto j = nlohmann::json::parse(text);
    line.ground_F = j.at("ground_F").get<int>();
    line.nuclear_I = j.at("nuclear_I").get<double>();
    line.J_ground = j.at("J_ground").get<double>();
    line.J_excited = j.at("J_excited").get<double>();
    for (const auto &e : j.at("excited"))
      line.excited.push_back(
          {e.at("Fprime").get<int>(), e.at("offset_MHz").get<double>() * kMHz});
    line.gamma = j.at("gamma_MHz").get<double>() * kMHz;
    line.lambda0 = j.at("lambda0_nm").get<double>() * 1.0e-9;
  } catch (const nlohmann::json::exception &ex) {
    throw std::invalid_argument(std::string("line JSON: ") + ex.what());
  }
  line.validate();
  return line;
}

HyperfineLine load_line_json(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open line data file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return line_from_json_text(ss.str());
}

std::string line_to_json_text(const HyperfineLine &line) {
  nlohmann::json j;
  j["ground_F"] = line.ground_F;
  j["nuclear_I"] = line.nuclear_I;
  j["J_ground"] = line.J_ground;
  j["J_excited"] = line.J_excited;
  j["excited"] = nlohmann::json::array();
  for (const auto &e : line.excited)
    j["excited"].push_back({{"Fprime", e.Fprime}, {"offset_MHz", e.offset / kMHz}});
  j["gamma_MHz"] = line.gamma / kMHz;
  j["lambda0_nm"] = line.lambda0 * 1.0e9;
  return j.dump(2);
}

// ---------------------------------------------------------------------------

namespace {

double raw_rank_coefficient(int K, int F, int Fprime,
                            const HyperfineLine &line) {
  const double sixj_rank = wigner6j(1, 1, K, F, F, Fprime);
  const double sixj_hfs = wigner6j(line.J_excited, Fprime, line.nuclear_I, F,
                                   line.J_ground, 1);
  const double sign = ((K + F + Fprime + 1) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt(2.0 * K + 1.0) * (2.0 * Fprime + 1.0) *
         (2.0 * line.J_excited + 1.0) * sixj_rank * sixj_hfs * sixj_hfs;
}

} // namespace

double rank_coefficient(int K, int F, int Fprime, const HyperfineLine &line) {
  if (K < 0 || K > 2)
    throw std::invalid_argument("rank must be 0, 1 or 2");
  if (F != line.ground_F || !line.has_level(Fprime))
    throw std::invalid_argument("invalid transition F=" + std::to_string(F) +
                                " -> F'=" + std::to_string(Fprime));

  double scalar_total = 0.0;
  for (const auto &l : line.excited)
    scalar_total += raw_rank_coefficient(0, F, l.Fprime, line);
  if (!(scalar_total > 0.0))
    throw std::invalid_argument("line has no scalar polarizability");
  return raw_rank_coefficient(K, F, Fprime, line) / scalar_total;
}

const RankCoefficients::Entry &RankCoefficients::at(int Fprime) const {
  for (const auto &e : entries)
    if (e.Fprime == Fprime)
      return e;
  throw std::invalid_argument("no coefficients for F'=" +
                              std::to_string(Fprime));
}

RankCoefficients rank_coefficients(const HyperfineLine &line) {
  RankCoefficients rc;
  for (const auto &l : line.excited)
    rc.entries.push_back({l.Fprime,
                          rank_coefficient(0, line.ground_F, l.Fprime, line),
                          rank_coefficient(1, line.ground_F, l.Fprime, line),
                          rank_coefficient(2, line.ground_F, l.Fprime, line)});
  return rc;
}

BranchingSplit branching_split(const HyperfineLine &line,
                               std::optional<double> r_override) {
  line.validate();
  double r = kRb87DecoherenceToLossRatio;
  if (r_override) {
    if (!(*r_override > 0.0) || !std::isfinite(*r_override))
      throw std::invalid_argument("branching ratio override must be > 0");
    r = *r_override;
  }
  const double beta = 1.0 / (1.0 + r);
  return {beta, 1.0 - beta};
}

// ---------------------------------------------------------------------------

namespace {

// <F' m'| d_q |F m> with the reduced fine-structure element set to one.
double hyperfine_dipole(const HyperfineLine &line, int F, int m, int Fprime,
                        int mprime, int q) {
  const double cg = clebsch_gordan(F, m, 1, q, Fprime, mprime);
  if (cg == 0.0)
    return 0.0;
  const double J = line.J_ground, Jp = line.J_excited, I = line.nuclear_I;
  const int phase2 = 2 * Fprime + twice(J) + 2 + twice(I);
  const double sign = (phase2 / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * cg * std::sqrt((2.0 * F + 1.0) * (2.0 * Jp + 1.0)) *
         wigner6j(J, Jp, 1, Fprime, F, I);
}

} // namespace

BranchingDerivation derive_branching(const HyperfineLine &line) {
  line.validate();
  const int F = line.ground_F;
  if (F < 1)
    throw std::invalid_argument("pseudo-spin requires ground F >= 1");
  const int m0 = 1;

  // x polarization: equal-weight sigma+ and sigma- components.
  const double eps = 1.0 / std::sqrt(2.0);

  const int twoFmin = std::abs(twice(line.nuclear_I) - twice(line.J_ground));
  const int twoFmax = twice(line.nuclear_I) + twice(line.J_ground);

  BranchingDerivation out{0.0, 0.0, 0.0};
  for (const auto &level : line.excited) {
    const int Fp = level.Fprime;
    for (int mp = -Fp; mp <= Fp; ++mp) {
      double amp = 0.0;
      for (int q : {-1, 1})
        if (m0 + q == mp)
          amp += eps * hyperfine_dipole(line, F, m0, Fp, mp, q);
      const double pop = amp * amp;
      if (pop == 0.0)
        continue;
      for (int two_fg = twoFmin; two_fg <= twoFmax; two_fg += 2) {
        const int Fg = two_fg / 2;
        for (int mg = -Fg; mg <= Fg; ++mg) {
          const int q = mp - mg;
          if (std::abs(q) > 1)
            continue;
          const double d = hyperfine_dipole(line, Fg, mg, Fp, mp, q);
          const double rate = pop * d * d;
          if (Fg != F)
            out.to_other_F += rate;
          else if (mg == 0)
            out.to_m0 += rate;
          else if (std::abs(mg) == 1)
            out.to_pseudo_spin += rate;
          else
            out.to_other_F += rate; // |m| > 1 of F lies outside the pseudo-spin
        }
      }
    }
  }
  const double total = out.to_pseudo_spin + out.to_m0 + out.to_other_F;
  if (!(total > 0.0))
    throw std::invalid_argument("line has no allowed scattering path");
  out.to_pseudo_spin /= total;
  out.to_m0 /= total;
  out.to_other_F /= total;
  return out;
}

} // namespace qndsq
