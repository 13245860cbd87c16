#include "qndsq/pseudospin.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace qndsq {

OperatorSet build_alignment_operators() {
  const Complex i(0.0, 1.0);
  OperatorSet ops;
  ops.Tx.setZero();
  ops.Ty.setZero();
  ops.Fz.setZero();

  ops.Tx(kMinus, kPlus) = 1.0;
  ops.Tx(kPlus, kMinus) = 1.0;

  ops.Ty(kMinus, kPlus) = i;
  ops.Ty(kPlus, kMinus) = -i;

  ops.Fz(kPlus, kPlus) = 1.0;
  ops.Fz(kMinus, kMinus) = -1.0;

  ops.Jx = 0.5 * ops.Tx;
  ops.Jy = 0.5 * ops.Ty;
  ops.Jz = 0.5 * ops.Fz;
  return ops;
}

Eigen::Matrix2cd OperatorSet::restrict_to_pseudo_spin(const Matrix3c &op) {
  Eigen::Matrix2cd r;
  r << op(kMinus, kMinus), op(kMinus, kPlus), op(kPlus, kMinus),
      op(kPlus, kPlus);
  return r;
}

Matrix3c spin1_operator(char axis) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Matrix3c F = Matrix3c::Zero();
  switch (axis) {
  case 'x':
    F(kMinus, kZero) = F(kZero, kMinus) = s;
    F(kZero, kPlus) = F(kPlus, kZero) = s;
    break;
  case 'y':
    // F_y = (F+ - F-)/2i with F+|m> = sqrt(2)|m+1>.
    F(kZero, kMinus) = -i * s;
    F(kMinus, kZero) = i * s;
    F(kPlus, kZero) = -i * s;
    F(kZero, kPlus) = i * s;
    break;
  case 'z':
    F(kPlus, kPlus) = 1.0;
    F(kMinus, kMinus) = -1.0;
    break;
  default:
    throw std::invalid_argument("axis must be x, y or z");
  }
  return F;
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd &A,
                            const Eigen::MatrixXcd &B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("commutator: dimension mismatch");
  return A * B - B * A;
}

bool is_hermitian(const Eigen::MatrixXcd &A, double tol) {
  if (A.rows() != A.cols())
    return false;
  return (A - A.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CollectiveMoments coherent_state_moments(std::int64_t N) {
  if (N < 1)
    throw std::invalid_argument("coherent state needs N >= 1 atoms");
  const double n = static_cast<double>(N);
  return {N, 0.5 * n, 0.0, 0.0, 0.25 * n, 0.25 * n};
}

std::string operators_to_json(const OperatorSet &ops) {
  auto encode = [](const Matrix3c &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 3; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < 3; ++c)
        row.push_back({m(r, c).real(), m(r, c).imag()});
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json j;
  j["basis"] = {"m=-1", "m=0", "m=+1"};
  j["Tx"] = encode(ops.Tx);
  j["Ty"] = encode(ops.Ty);
  j["Fz"] = encode(ops.Fz);
  j["Jx"] = encode(ops.Jx);
  j["Jy"] = encode(ops.Jy);
  j["Jz"] = encode(ops.Jz);
  return j.dump();
}

} // namespace qndsq
