#include "qndsq/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qndsq/csv.hpp"

namespace qndsq {

namespace {

double reference_offset(const HyperfineLine &line) {
  if (line.has_level(0))
    return line.level(0).offset;
  double lo = std::numeric_limits<double>::infinity();
  for (const auto &l : line.excited)
    lo = std::min(lo, l.offset);
  return lo;
}

} // namespace

double transition_detuning(const HyperfineLine &line, int Fprime,
                           double probe_detuning) {
  return probe_detuning - (line.level(Fprime).offset - reference_offset(line));
}

DecomposedHamiltonian decompose(const HyperfineLine &line,
                                double probe_detuning,
                                DecomposeOptions opts) {
  if (!std::isfinite(probe_detuning))
    throw std::domain_error("probe detuning must be finite");

  DecomposedHamiltonian h;
  h.detuning = probe_detuning;
  const double guard = 1.0e-6 * line.gamma;
  for (const auto &level : line.excited) {
    const double delta =
        opts.equal_detunings
            ? probe_detuning
            : transition_detuning(line, level.Fprime, probe_detuning);
    if (std::abs(delta) <= guard)
      throw std::domain_error("probe resonant with F=" +
                              std::to_string(line.ground_F) + " -> F'=" +
                              std::to_string(level.Fprime));
    const int F = line.ground_F;
    h.c0 += rank_coefficient(0, F, level.Fprime, line) / delta;
    h.c1 += rank_coefficient(1, F, level.Fprime, line) / delta;
    h.c2_raman += rank_coefficient(2, F, level.Fprime, line) / delta;
  }
  h.c2_scalar = h.c2_raman;
  h.near_resonance_warning =
      std::abs(probe_detuning) < kLargeDetuningFactor * line.excited_hfs_spread();
  return h;
}

double effective_coupling(const HyperfineLine &line, double probe_detuning) {
  const int Fp = line.has_level(0) ? 0 : line.excited.front().Fprime;
  const double delta = transition_detuning(line, Fp, probe_detuning);
  if (std::abs(delta) <= 1.0e-6 * line.gamma)
    throw std::domain_error("probe resonant with the effective transition");
  return rank_coefficient(1, line.ground_F, Fp, line) / delta;
}

double raman_suppression_ratio(const HyperfineLine &line,
                               double probe_detuning,
                               DecomposeOptions opts) {
  const auto h = decompose(line, probe_detuning, opts);
  if (h.c1 == 0.0)
    throw std::domain_error("vector coupling vanishes at this detuning");
  return std::abs(h.c2_raman / h.c1);
}

std::vector<ScanRow> detuning_scan(const HyperfineLine &line,
                                   const std::vector<double> &detunings_over_hfs,
                                   DecomposeOptions opts) {
  const double hfs = line.excited_hfs_spread();
  if (!(hfs > 0.0))
    throw std::invalid_argument("scan needs a nonzero excited hyperfine spread");
  std::vector<ScanRow> rows;
  rows.reserve(detunings_over_hfs.size());
  for (double x : detunings_over_hfs) {
    ScanRow row{x, std::nullopt, std::nullopt};
    try {
      row.h = decompose(line, x * hfs, opts);
      if (row.h->c1 != 0.0)
        row.ratio = std::abs(row.h->c2_raman / row.h->c1);
    } catch (const std::domain_error &) {
      // resonant: row stays flagged
    }
    rows.push_back(row);
  }
  return rows;
}

void write_scan_csv(std::ostream &os, const std::vector<ScanRow> &rows) {
  os << "detuning_over_hfs,c0,c1,c2_raman,ratio\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto &r : rows) {
    os << format_sig(r.detuning_over_hfs) << ','
       << format_sig(r.h ? r.h->c0 : nan) << ','
       << format_sig(r.h ? r.h->c1 : nan) << ','
       << format_sig(r.h ? r.h->c2_raman : nan) << ','
       << format_sig(r.ratio.value_or(nan)) << '\n';
  }
}

double fit_power_law_exponent(const std::vector<double> &x,
                              const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("power-law fit needs matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0)
      throw std::invalid_argument("power-law fit needs x > 0 and y != 0");
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace qndsq
