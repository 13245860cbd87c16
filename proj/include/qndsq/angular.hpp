#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qndsq {

//! Wigner 3j symbol (j1 j2 j3; m1 m2 m3).
/*! Arguments must be integers or half-integers. Evaluated by the Racah sum in
    exact rational arithmetic; only the final square root is taken in double.
    Returns exactly 0 when a triangle, projection or m-sum condition fails.
    Throws std::invalid_argument for arguments that are not half-integers. */
double wigner3j(double j1, double j2, double j3, double m1, double m2,
                double m3);

//! Wigner 6j symbol {j1 j2 j3; j4 j5 j6}, zero on any violated triad.
double wigner6j(double j1, double j2, double j3, double j4, double j5,
                double j6);

//! Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> (Condon-Shortley phase).
double clebsch_gordan(double j1, double m1, double j2, double m2, double J,
                      double M);

struct ExcitedLevel {
  int Fprime;
  double offset; // rad/s, relative to an arbitrary reference
};

//! Hyperfine structure of one ground F manifold and the excited levels it
//! couples to on a single fine-structure line.
struct HyperfineLine {
  int ground_F = 1;
  double nuclear_I = 1.5;
  double J_ground = 0.5;
  double J_excited = 1.5;
  std::vector<ExcitedLevel> excited;
  double gamma = 0.0;   // natural linewidth, rad/s
  double lambda0 = 0.0; // m

  double omega0() const;
  //! Largest pairwise spread of the excited offsets (rad/s).
  double excited_hfs_spread() const;
  const ExcitedLevel &level(int Fprime) const;
  bool has_level(int Fprime) const;
  //! Throws std::invalid_argument if the record breaks the selection rules.
  void validate() const;
};

//! 87Rb D2 line seen from the F=1 ground level. Excited offsets are the
//! F'=0,1,2 positions relative to F'=3 (MHz, converted to rad/s).
HyperfineLine rb87_d2_line();

HyperfineLine line_from_json_text(const std::string &text);
HyperfineLine load_line_json(const std::string &path);
std::string line_to_json_text(const HyperfineLine &line);

//! Rank-K (K = 0, 1, 2) dimensionless polarizability coefficient of the
//! F -> F' transition.
/*!
  alpha^(K)_{F,F'} = c (-1)^{K+F+F'+1} sqrt(2K+1) (2F'+1)(2J'+1)
                     {1 1 K; F F F'} {J' F' I; F J 1}^2

  c normalizes the scalar part so that sum_{F'} alpha^(0)_{F,F'} = 1. The
  closure of the 6j symbols gives sum_{F'} alpha^(2) = 0 for J = 1/2, and on
  the 87Rb D2 line from F=1 the F'=1 and F'=2 vector terms cancel.
*/
double rank_coefficient(int K, int F, int Fprime, const HyperfineLine &line);

struct RankCoefficients {
  struct Entry {
    int Fprime;
    double alpha0, alpha1, alpha2;
  };
  std::vector<Entry> entries;

  const Entry &at(int Fprime) const;
};

RankCoefficients rank_coefficients(const HyperfineLine &line);

struct BranchingSplit {
  double beta_fraction;  // scattering events that remove the atom
  double gamma_fraction; // scattering events that return it to |+>,|->
};

//! Default ratio gamma/beta for the F=1 pseudo-spin on the 87Rb D2 line.
inline constexpr double kRb87DecoherenceToLossRatio = 5.0 / 3.0;

//! Split of scattering events into loss and decoherence. Without an
//! override the ratio gamma/beta = 5/3 is used.
BranchingSplit branching_split(const HyperfineLine &line,
                               std::optional<double> r_override = {});

//! Loss/decoherence bookkeeping for one x-polarized probe photon scattered
//! from |+> (or |->) at large detuning.
struct BranchingDerivation {
  double to_pseudo_spin; // decay back into m = +1 or m = -1 of F
  double to_m0;          // decay into |F, m=0>
  double to_other_F;     // decay into the other ground hyperfine level
  double ratio() const { return to_pseudo_spin / (to_m0 + to_other_F); }
};

//! Sums the scattering probability over every excitation path
//! |F,+1> -> |F',m'> -> |F'',m''> with the F' paths added incoherently and all
//! detunings equal. Ground F'' ranges over |I-J|..I+J.
BranchingDerivation derive_branching(const HyperfineLine &line);

} // namespace qndsq
