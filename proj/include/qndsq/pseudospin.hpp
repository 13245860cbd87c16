#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace qndsq {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;

// Basis order for every 3x3 operator: (|m=-1>, |m=0>, |m=+1>).
inline constexpr int kMinus = 0;
inline constexpr int kZero = 1;
inline constexpr int kPlus = 2;

//! Single-atom alignment-tensor operators on the F=1 manifold and the
//! pseudo-spin-1/2 components built from them.
struct OperatorSet {
  Matrix3c Tx; // F_x^2 - F_y^2 = |-><+| + |+><-|
  Matrix3c Ty; // F_x F_y + F_y F_x = i(|-><+| - |+><-|)
  Matrix3c Fz; // |+><+| - |-><-|
  Matrix3c Jx, Jy, Jz;

  //! 2x2 block of an operator on {|->, |+>}.
  static Eigen::Matrix2cd restrict_to_pseudo_spin(const Matrix3c &op);
};

OperatorSet build_alignment_operators();

//! F_x, F_y, F_z for spin 1 in the same basis.
Matrix3c spin1_operator(char axis);

//! AB - BA. Throws std::invalid_argument on a dimension mismatch.
Eigen::MatrixXcd commutator(const Eigen::MatrixXcd &A,
                            const Eigen::MatrixXcd &B);

bool is_hermitian(const Eigen::MatrixXcd &A, double tol = 1.0e-15);

struct CollectiveMoments {
  std::int64_t N_atoms;
  double mean_Jx, mean_Jy, mean_Jz;
  double var_Jy, var_Jz;
};

//! Product state of N atoms, each in (|+> + |->)/sqrt(2), the +1/2
//! eigenstate of the single-atom Jx.
CollectiveMoments coherent_state_moments(std::int64_t N);

//! JSON object {"Tx": [[[re,im],...],...], ...} with rows in basis order.
std::string operators_to_json(const OperatorSet &ops);

} // namespace qndsq
