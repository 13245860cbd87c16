#include "qndsq/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qndsq/csv.hpp"

namespace qndsq {

std::vector<double> EtaGrid::points() const {
  std::vector<double> pts(static_cast<std::size_t>(steps));
  const double step = (max - min) / (steps - 1);
  for (int i = 0; i < steps; ++i)
    pts[static_cast<std::size_t>(i)] = min + step * i;
  pts.back() = max;
  return pts;
}

void ScenarioConfig::validate() const {
  if (!(rho0 > 0.0) || !std::isfinite(rho0))
    throw std::invalid_argument("rho0 must be > 0");
  if (!(eta_grid.min >= 0.0) || !(eta_grid.max < 1.0) ||
      !(eta_grid.min < eta_grid.max))
    throw std::invalid_argument("eta grid must satisfy 0 <= min < max < 1");
  if (eta_grid.steps < 2)
    throw std::invalid_argument("eta grid needs at least 2 steps");
  if (!(r_ratio > 0.0) || !std::isfinite(r_ratio))
    throw std::invalid_argument("ratio must be > 0");
  if (!(optimizer.tolerance > 0.0))
    throw std::invalid_argument("optimizer tolerance must be > 0");
  if (optimizer.max_iters < 1 || optimizer.coarse_points < 3)
    throw std::invalid_argument("optimizer needs max_iters >= 1 and "
                                "coarse_points >= 3");
  if (scan.steps < 2 || !(scan.min < scan.max))
    throw std::invalid_argument("scan grid must satisfy min < max, steps >= 2");
  if (mc) {
    if (mc->n_atoms < 10 || mc->n_trials < 100)
      throw std::invalid_argument("Monte Carlo needs n_atoms >= 10 and "
                                  "n_trials >= 100");
  }
}

ScenarioConfig config_from_json_text(const std::string &text,
                                     const std::string &base_dir) {
  ScenarioConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.contains("system"))
      c.system = system_tag_from_string(j["system"].get<std::string>());
    c.rho0 = j.value("rho0", c.rho0);
    c.r_ratio = j.value("r_ratio", c.r_ratio);
    if (j.contains("eta_grid")) {
      const auto &g = j["eta_grid"];
      c.eta_grid.min = g.value("min", c.eta_grid.min);
      c.eta_grid.max = g.value("max", c.eta_grid.max);
      c.eta_grid.steps = g.value("steps", c.eta_grid.steps);
    }
    if (j.contains("optimizer")) {
      const auto &o = j["optimizer"];
      c.optimizer.tolerance = o.value("tolerance", c.optimizer.tolerance);
      c.optimizer.max_iters = o.value("max_iters", c.optimizer.max_iters);
      c.optimizer.coarse_points =
          o.value("coarse_points", c.optimizer.coarse_points);
    }
    if (j.contains("scan")) {
      const auto &s = j["scan"];
      c.scan.min = s.value("min", c.scan.min);
      c.scan.max = s.value("max", c.scan.max);
      c.scan.steps = s.value("steps", c.scan.steps);
      c.scan.equal_detunings = s.value("equal_detunings", false);
    }
    if (j.contains("mc")) {
      const auto &m = j["mc"];
      McSettings ms;
      ms.n_atoms = m.value("n_atoms", ms.n_atoms);
      ms.n_trials = m.value("n_trials", ms.n_trials);
      ms.seed = m.value("seed", ms.seed);
      ms.threads = m.value("threads", ms.threads);
      ms.zero_scattering = m.value("zero_scattering", false);
      c.mc = ms;
    }
    if (j.contains("line_data")) {
      std::filesystem::path p = j["line_data"].get<std::string>();
      if (p.is_relative())
        p = std::filesystem::path(base_dir) / p;
      c.line_data = p.string();
    }
  } catch (const nlohmann::json::exception &ex) {
    throw std::invalid_argument(std::string("config JSON: ") + ex.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return config_from_json_text(ss.str(), dir.empty() ? "." : dir.string());
}

// ---------------------------------------------------------------------------

CurvePoint evaluate_point(SystemTag system, double rho0, double eta, double r) {
  CurvePoint p{eta, 0.0, 0.0, 1.0, 1.0};
  switch (system) {
  case SystemTag::Rb87: {
    const NoiseBudget nb = split_eta(eta, r);
    p.beta = nb.beta;
    p.gamma = nb.gamma;
    break;
  }
  case SystemTag::IdealSpinHalf:
    p.gamma = eta;
    break;
  case SystemTag::Coherent:
    p.beta = eta;
    break;
  }
  const SqueezingOutcome out = xi2_for_system(system, rho0, eta, r);
  p.xi2 = out.xi2;
  p.xi2_prime = out.xi2_prime;
  return p;
}

std::vector<CurvePoint> run_curve(const ScenarioConfig &config) {
  config.validate();
  std::vector<CurvePoint> pts;
  for (double eta : config.eta_grid.points())
    pts.push_back(evaluate_point(config.system, config.rho0, eta, config.r_ratio));
  return pts;
}

void write_curve_csv(std::ostream &os, const std::vector<CurvePoint> &points,
                     SystemTag system, double rho0) {
  os << "eta,beta,gamma,xi2,xi2_prime,system,rho0\n";
  for (const auto &p : points)
    os << format_sig(p.eta) << ',' << format_sig(p.beta) << ','
       << format_sig(p.gamma) << ',' << format_sig(p.xi2) << ','
       << format_sig(p.xi2_prime) << ',' << to_string(system) << ','
       << format_sig(rho0) << '\n';
}

void write_curve_json(std::ostream &os, const std::vector<CurvePoint> &points,
                      SystemTag system, double rho0) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &p : points)
    rows.push_back({{"eta", p.eta},
                    {"beta", p.beta},
                    {"gamma", p.gamma},
                    {"xi2", p.xi2},
                    {"xi2_prime", p.xi2_prime},
                    {"squeezing_percent", 100.0 * (1.0 - p.xi2_prime)}});
  nlohmann::json j = {{"system", std::string(to_string(system))},
                      {"rho0", rho0},
                      {"points", rows}};
  os << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

namespace {

std::string describe(const std::vector<double> &c) {
  std::ostringstream os;
  os << "xi'^2(eta) has " << c.size() << " local minima on the coarse grid:";
  for (double x : c)
    os << ' ' << format_sig(x);
  return os.str();
}

} // namespace

NonUnimodalError::NonUnimodalError(std::vector<double> candidates)
    : std::runtime_error(describe(candidates)),
      candidates_(std::move(candidates)) {}

OptimizeResult minimize_unimodal(const std::function<double(double)> &f,
                                 double x_max, const OptimizerSettings &opt) {
  const double eta_max = x_max;
  const int n = opt.coarse_points;
  std::vector<double> grid(static_cast<std::size_t>(n));
  std::vector<double> val(grid.size());
  for (int i = 0; i < n; ++i) {
    grid[i] = eta_max * (i + 1) / n;
    val[i] = f(grid[i]);
  }

  std::vector<std::size_t> minima;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (val[i] < val[i - 1] && val[i] < val[i + 1])
      minima.push_back(i);
  if (minima.size() > 1) {
    std::vector<double> cand;
    for (auto i : minima)
      cand.push_back(grid[i]);
    throw NonUnimodalError(std::move(cand));
  }

  std::size_t best = 0;
  if (minima.size() == 1) {
    best = minima.front();
  } else {
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (val[i] < val[best])
        best = i;
  }
  double a = best == 0 ? 0.0 : grid[best - 1];
  double b = best + 1 < grid.size() ? grid[best + 1] : grid[best];

  // Golden-section search; eta = 0 itself is allowed as a bracket edge.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (b - a > opt.tolerance && it < opt.max_iters) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  double eta_star = 0.5 * (a + b);
  double fmin = f(eta_star);
  if (val[best] < fmin) {
    eta_star = grid[best];
    fmin = val[best];
  }
  return {eta_star, fmin, 100.0 * (1.0 - fmin), it};
}

OptimizeResult run_optimize(const ScenarioConfig &config) {
  config.validate();
  return minimize_unimodal(
      [&](double eta) {
        return xi2_for_system(config.system, config.rho0, eta, config.r_ratio)
            .xi2_prime;
      },
      config.eta_grid.max, config.optimizer);
}

void write_optimize(std::ostream &os, const OptimizeResult &r,
                    const ScenarioConfig &config, bool json) {
  if (json) {
    nlohmann::json j = {{"system", std::string(to_string(config.system))},
                        {"rho0", config.rho0},
                        {"r_ratio", config.r_ratio},
                        {"eta_star", r.eta_star},
                        {"xi2_prime_min", r.xi2_prime_min},
                        {"squeezing_percent", r.squeezing_percent},
                        {"iterations", r.iterations}};
    os << j.dump(2) << '\n';
    return;
  }
  os << "system,rho0,eta_star,xi2_prime_min,squeezing_percent\n"
     << to_string(config.system) << ',' << format_sig(config.rho0) << ','
     << format_sig(r.eta_star) << ',' << format_sig(r.xi2_prime_min) << ','
     << format_sig(r.squeezing_percent) << '\n';
}

// ---------------------------------------------------------------------------

HyperfineLine resolve_line(const ScenarioConfig &config) {
  return config.line_data ? load_line_json(*config.line_data) : rb87_d2_line();
}

std::vector<ScanRow> run_detuning_scan(const ScenarioConfig &config) {
  config.validate();
  const HyperfineLine line = resolve_line(config);
  std::vector<double> x(static_cast<std::size_t>(config.scan.steps));
  const double step = (config.scan.max - config.scan.min) / (config.scan.steps - 1);
  for (int i = 0; i < config.scan.steps; ++i)
    x[static_cast<std::size_t>(i)] = config.scan.min + step * i;
  return detuning_scan(line, x, {config.scan.equal_detunings});
}

BatteryReport run_validate(const ScenarioConfig &config) {
  config.validate();
  if (!config.mc)
    throw std::invalid_argument("validate needs a Monte Carlo configuration");
  const McSettings &m = *config.mc;
  auto cases = m.zero_scattering
                   ? zero_scattering_battery(m.n_atoms, m.n_trials, m.seed)
                   : default_battery(m.n_atoms, m.n_trials, m.seed);
  for (auto &c : cases)
    c.cfg.threads = m.threads;
  return run_battery(cases);
}

} // namespace qndsq
