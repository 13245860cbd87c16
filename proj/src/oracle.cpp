#include "qndsq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qndsq/gaussian.hpp"

namespace qndsq {

namespace {

// Every trial owns a generator seeded from (seed, trial index), so a trial's
// draws are the same whichever thread runs it.
std::mt19937_64 trial_rng(std::uint64_t seed, std::int64_t trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t),
                    static_cast<std::uint32_t>(t >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

std::int64_t binomial(std::mt19937_64 &rng, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0)
    return 0;
  if (p >= 1.0)
    return n;
  return std::binomial_distribution<std::int64_t>(n, p)(rng);
}

// Exchangeable +-1/2 ensemble with collective variance `target`: the
// collective J_z is sign * h with a fair sign and h in {base, base + k}.
// base is 1/2 for odd N (J_z is then half-integer) and 0 for even N.
struct ExchangeableInput {
  std::int64_t n_atoms;
  double base;
  std::int64_t k;
  double p_wide;

  ExchangeableInput(std::int64_t n, double target) : n_atoms(n) {
    base = (n % 2) ? 0.5 : 0.0;
    const double max_var = 0.25 * static_cast<double>(n) * static_cast<double>(n);
    if (!(target >= base * base) || target > max_var)
      throw std::invalid_argument(
          "requested input variance is outside the attainable range for N=" +
          std::to_string(n));
    k = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(std::sqrt(target) - base)));
    const double wide = (base + k) * (base + k);
    p_wide = (target - base * base) / (wide - base * base);
  }

  // Number of atoms with J_z = +1/2.
  std::int64_t sample_up(std::mt19937_64 &rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = u(rng) < p_wide ? base + static_cast<double>(k) : base;
    const double sum = u(rng) < 0.5 ? -h : h;
    return static_cast<std::int64_t>(
        std::llround(sum + 0.5 * static_cast<double>(n_atoms)));
  }
};

struct Moments {
  double variance;
  double standard_error;
};

Moments sample_moments(const std::vector<double> &x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x)
    mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  const double var = m2 / (n - 1.0);
  m4 /= n;
  const double sigma4 = var * var;
  // Kurtosis is at least 1, so var(s^2) >= 2 sigma^4 / (n (n-1)). The plug-in
  // fourth moment is biased low and can fall under that for two-point inputs.
  const double floor = 2.0 * sigma4 / (n * (n - 1.0));
  const double var_of_var =
      std::max({(m4 - sigma4 * (n - 3.0) / (n - 1.0)) / n, floor, 1.0e-300});
  return {var, std::sqrt(var_of_var)};
}

// Runs trial(rng) for every trial index and returns the values in index
// order.
template <class Trial>
std::vector<double> run_trials(const McConfig &cfg, Trial trial) {
  std::vector<double> out(static_cast<std::size_t>(cfg.n_trials));
  unsigned threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, 64u);
  auto work = [&](unsigned w) {
    for (std::int64_t t = w; t < cfg.n_trials; t += threads) {
      auto rng = trial_rng(cfg.seed, t);
      out[static_cast<std::size_t>(t)] = trial(rng);
    }
  };
  if (threads == 1) {
    work(0);
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back(work, w);
  return out;
}

McResult finish(const Moments &m, double scale, double analytic) {
  McResult r;
  r.empirical_variance = scale * m.variance;
  r.standard_error = scale * m.standard_error;
  r.analytic_value = analytic;
  r.z_score = (r.empirical_variance - analytic) / r.standard_error;
  return r;
}

// Sum of J_z over `count` decohered atoms, each +-amplitude.
double decohered_sum(std::mt19937_64 &rng, std::int64_t count,
                     double amplitude) {
  if (count == 0 || amplitude == 0.0)
    return 0.0;
  const std::int64_t ups = binomial(rng, count, 0.5);
  return amplitude * static_cast<double>(2 * ups - count);
}

} // namespace

void McConfig::validate() const {
  if (n_atoms < 10)
    throw std::invalid_argument("Monte Carlo needs n_atoms >= 10");
  if (n_trials < 100)
    throw std::invalid_argument("Monte Carlo needs n_trials >= 100");
  if (!(noise.beta >= 0.0) || !(noise.gamma >= 0.0) || !(noise.eta < 1.0) ||
      std::abs(noise.beta + noise.gamma - noise.eta) > 1.0e-12)
    throw std::invalid_argument("Monte Carlo noise budget is inconsistent");
}

double attainable_variance_floor(std::int64_t n_atoms) {
  return (n_atoms % 2) ? 0.25 : 0.0;
}

McResult mc_loss_variance(const McConfig &cfg, double input_var_scale) {
  cfg.validate();
  const double N = static_cast<double>(cfg.n_atoms);
  const double target = input_var_scale * N / 4.0;
  const ExchangeableInput input(cfg.n_atoms, target);
  const double keep = 1.0 - cfg.noise.beta;

  const auto values = run_trials(cfg, [&](std::mt19937_64 &rng) {
    const std::int64_t up = input.sample_up(rng);
    const std::int64_t down = cfg.n_atoms - up;
    const std::int64_t up_left = binomial(rng, up, keep);
    const std::int64_t down_left = binomial(rng, down, keep);
    return 0.5 * static_cast<double>(up_left - down_left);
  });
  return finish(sample_moments(values), 1.0,
                var_after_loss(target, cfg.noise.beta, N, 0.5));
}

McResult mc_decoherence_variance(const McConfig &cfg, double input_var_scale,
                                 double var_gamma) {
  cfg.validate();
  if (!(var_gamma >= 0.0))
    throw std::invalid_argument("var_gamma must be >= 0");
  const double N = static_cast<double>(cfg.n_atoms);
  const double target = input_var_scale * N / 4.0;
  const ExchangeableInput input(cfg.n_atoms, target);
  const double keep = 1.0 - cfg.noise.gamma;
  const double amplitude = std::sqrt(var_gamma);

  const auto values = run_trials(cfg, [&](std::mt19937_64 &rng) {
    const std::int64_t up = input.sample_up(rng);
    const std::int64_t down = cfg.n_atoms - up;
    const std::int64_t up_left = binomial(rng, up, keep);
    const std::int64_t down_left = binomial(rng, down, keep);
    const std::int64_t hit = cfg.n_atoms - up_left - down_left;
    return 0.5 * static_cast<double>(up_left - down_left) +
           decohered_sum(rng, hit, amplitude);
  });
  return finish(sample_moments(values), 1.0,
                var_after_decoherence(target, cfg.noise.gamma, N, 0.5,
                                      var_gamma));
}

McResult mc_end_to_end(const McConfig &cfg, double rho0) {
  cfg.validate();
  if (!(rho0 > 0.0))
    throw std::invalid_argument("rho0 must be positive");
  const auto &nb = cfg.noise;
  const double N = static_cast<double>(cfg.n_atoms);

  const auto measured = condition_on_Sy(
      propagate(GaussianState::coherent(N, N), rho0 * nb.eta));
  const ExchangeableInput input(cfg.n_atoms, measured.cov(kJz, kJz));

  const double untouched = 1.0 - nb.eta;
  const double lost_given_hit = nb.eta > 0.0 ? nb.beta / nb.eta : 0.0;

  const auto values = run_trials(cfg, [&](std::mt19937_64 &rng) {
    const std::int64_t up = input.sample_up(rng);
    const std::int64_t down = cfg.n_atoms - up;
    const std::int64_t up_kept = binomial(rng, up, untouched);
    const std::int64_t down_kept = binomial(rng, down, untouched);
    const std::int64_t hit = cfg.n_atoms - up_kept - down_kept;
    const std::int64_t lost = binomial(rng, hit, lost_given_hit);
    return 0.5 * static_cast<double>(up_kept - down_kept) +
           decohered_sum(rng, hit - lost, 0.5);
  });

  // Wineland ratio for the survivors: 2 N' F / <J_x>^2 with F = 1/2.
  const double n_left = (1.0 - nb.beta) * N;
  const double mean_jx = untouched * N / 2.0;
  const double scale = n_left / (mean_jx * mean_jx);
  return finish(sample_moments(values), scale,
                xi2_rb87(rho0, nb.eta, nb.r).xi2_prime);
}

std::string_view to_string(McKind kind) {
  switch (kind) {
  case McKind::Loss:
    return "loss";
  case McKind::Decoherence:
    return "decoherence";
  case McKind::EndToEnd:
    return "end_to_end";
  }
  return "unknown";
}

McResult run_case(const McCase &c) {
  switch (c.kind) {
  case McKind::Loss:
    return mc_loss_variance(c.cfg, c.input_var_scale);
  case McKind::Decoherence:
    return mc_decoherence_variance(c.cfg, c.input_var_scale, c.var_gamma);
  case McKind::EndToEnd:
    return mc_end_to_end(c.cfg, c.rho0);
  }
  throw std::invalid_argument("unknown Monte Carlo case kind");
}

namespace {

NoiseBudget loss_only(double beta) {
  return {beta, beta, 0.0, 0.0};
}

NoiseBudget decoherence_only(double gamma) {
  return {gamma, 0.0, gamma, 0.0};
}

std::uint64_t case_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 step keeps neighbouring cases decorrelated.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

std::vector<McCase> default_battery(std::int64_t n_atoms, std::int64_t n_trials,
                                    std::uint64_t seed) {
  std::vector<McCase> cases;
  auto add = [&](std::string name, McKind kind, NoiseBudget nb, double scale,
                 double var_gamma, double rho0) {
    McCase c;
    c.name = std::move(name);
    c.kind = kind;
    c.cfg.n_atoms = n_atoms;
    c.cfg.n_trials = n_trials;
    c.cfg.noise = nb;
    c.input_var_scale = scale;
    c.var_gamma = var_gamma;
    c.rho0 = rho0;
    cases.push_back(std::move(c));
  };

  add("loss coherent beta=0.3", McKind::Loss, loss_only(0.3), 1.0, 0.0, 0.0);
  add("loss squeezed0.1 beta=0.2", McKind::Loss, loss_only(0.2), 0.1, 0.0, 0.0);
  add("loss squeezed0.5 beta=0.05", McKind::Loss, loss_only(0.05), 0.5, 0.0, 0.0);
  add("loss squeezed0.02 beta=0.5", McKind::Loss, loss_only(0.5), 0.02, 0.0, 0.0);
  add("loss coherent beta=0.9", McKind::Loss, loss_only(0.9), 1.0, 0.0, 0.0);
  add("loss squeezed0.25 beta=0.1", McKind::Loss, loss_only(0.1), 0.25, 0.0, 0.0);

  add("decoherence coherent gamma=0.1", McKind::Decoherence,
      decoherence_only(0.1), 1.0, 0.25, 0.0);
  add("decoherence squeezed0.1 gamma=0.2", McKind::Decoherence,
      decoherence_only(0.2), 0.1, 0.25, 0.0);
  add("decoherence squeezed0.5 gamma=0.05", McKind::Decoherence,
      decoherence_only(0.05), 0.5, 0.25, 0.0);
  add("decoherence squeezed0.02 gamma=0.3", McKind::Decoherence,
      decoherence_only(0.3), 0.02, 0.25, 0.0);
  add("decoherence squeezed0.1 gamma=0.1 var=0", McKind::Decoherence,
      decoherence_only(0.1), 0.1, 0.0, 0.0);
  add("decoherence coherent gamma=0.5 var=0.1", McKind::Decoherence,
      decoherence_only(0.5), 1.0, 0.1, 0.0);

  const std::pair<double, double> e2e[] = {{100.0, 0.06}, {25.0, 0.10},
                                           {25.0, 0.20},  {100.0, 0.02},
                                           {50.0, 0.08},  {5.0, 0.30},
                                           {100.0, 0.15}, {200.0, 0.04}};
  for (const auto &[rho0, eta] : e2e)
    add("end_to_end rho0=" + std::to_string(static_cast<int>(rho0)) +
            " eta=" + std::to_string(eta).substr(0, 4),
        McKind::EndToEnd, split_eta(eta), 1.0, 0.25, rho0);

  for (std::size_t i = 0; i < cases.size(); ++i)
    cases[i].cfg.seed = case_seed(seed, i);
  return cases;
}

std::vector<McCase> zero_scattering_battery(std::int64_t n_atoms,
                                            std::int64_t n_trials,
                                            std::uint64_t seed) {
  auto cases = default_battery(n_atoms, n_trials, seed);
  for (auto &c : cases) {
    c.cfg.noise = split_eta(0.0, c.cfg.noise.r > 0.0 ? c.cfg.noise.r
                                                     : kRb87DecoherenceToLossRatio);
    c.name += " [eta=0]";
  }
  return cases;
}

BatteryReport run_battery(const std::vector<McCase> &cases) {
  BatteryReport report;
  for (const auto &c : cases) {
    const McResult r = run_case(c);
    report.cases.push_back({c, r});
    const double az = std::abs(r.z_score);
    if (az > 3.0)
      ++report.beyond_3sigma;
    report.max_abs_z = std::max(report.max_abs_z, az);
  }
  return report;
}

std::string battery_report_json(const BatteryReport &report) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto &[spec, r] : report.cases) {
    nlohmann::json config = {
        {"name", spec.name},
        {"kind", std::string(to_string(spec.kind))},
        {"n_atoms", spec.cfg.n_atoms},
        {"n_trials", spec.cfg.n_trials},
        {"eta", spec.cfg.noise.eta},
        {"beta", spec.cfg.noise.beta},
        {"gamma", spec.cfg.noise.gamma},
        {"input_var_scale", spec.input_var_scale},
        {"var_gamma", spec.var_gamma},
    };
    if (spec.kind == McKind::EndToEnd)
      config["rho0"] = spec.rho0;
    cases.push_back({{"config", config},
                     {"empirical", r.empirical_variance},
                     {"standard_error", r.standard_error},
                     {"analytic", r.analytic_value},
                     {"z_score", r.z_score},
                     {"rng", {{"algorithm", kRngAlgorithm},
                              {"seed", spec.cfg.seed}}}});
  }
  nlohmann::json j = {
      {"cases", cases},
      {"summary",
       {{"n_cases", report.cases.size()},
        {"beyond_3sigma", report.beyond_3sigma},
        {"max_abs_z", report.max_abs_z},
        {"note", "3-sigma bands per case; with 20 cases about 0.05 "
                 "exceedances are expected by chance (Bonferroni "
                 "family-wise bound 20 x 0.27% = 5.4%)"}}}};
  return j.dump(2);
}

} // namespace qndsq
