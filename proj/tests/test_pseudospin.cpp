#include <doctest.h>

#include <json.hpp>

#include "qndsq/pseudospin.hpp"

using namespace qndsq;
using doctest::Approx;

namespace {

double max_abs(const Eigen::MatrixXcd &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("alignment operators act as written") {
  const auto ops = build_alignment_operators();
  const Eigen::Vector3cd plus(0, 0, 1), zero(0, 1, 0), minus(1, 0, 0);

  CHECK(max_abs(ops.Tx * plus - minus) == 0.0);
  CHECK(max_abs(ops.Tx * minus - plus) == 0.0);
  CHECK(max_abs(ops.Fz * zero) == 0.0);
  CHECK(max_abs(ops.Fz * plus - plus) == 0.0);
  CHECK(max_abs(ops.Ty * plus - Complex(0, 1) * minus) == 0.0);

  for (const auto *m : {&ops.Tx, &ops.Ty, &ops.Fz, &ops.Jx, &ops.Jy, &ops.Jz})
    CHECK(is_hermitian(*m, 1e-15));
  // T operators never touch |m=0>.
  for (const auto *m : {&ops.Tx, &ops.Ty}) {
    CHECK(max_abs(m->row(kZero)) == 0.0);
    CHECK(max_abs(m->col(kZero)) == 0.0);
  }
}

TEST_CASE("alignment operators equal the spin-1 tensor components") {
  const auto ops = build_alignment_operators();
  const Matrix3c Fx = spin1_operator('x'), Fy = spin1_operator('y'),
                 Fz = spin1_operator('z');
  CHECK(max_abs(Fx * Fx - Fy * Fy - ops.Tx) < 1e-15);
  CHECK(max_abs(Fx * Fy + Fy * Fx - ops.Ty) < 1e-15);
  CHECK(max_abs(Fz - ops.Fz) == 0.0);
  // Spin-1 sanity: [Fx, Fy] = i Fz.
  CHECK(max_abs(commutator(Fx, Fy) - Complex(0, 1) * Fz) < 1e-15);
  CHECK_THROWS_AS(spin1_operator('w'), std::invalid_argument);
}

TEST_CASE("pseudo-spin commutation relations") {
  const auto ops = build_alignment_operators();
  const Complex i(0, 1);
  CHECK(max_abs(commutator(ops.Jx, ops.Jy) - i * ops.Jz) <= 1e-15);
  CHECK(max_abs(commutator(ops.Jy, ops.Jz) - i * ops.Jx) <= 1e-15);
  CHECK(max_abs(commutator(ops.Jz, ops.Jx) - i * ops.Jy) <= 1e-15);
  CHECK(max_abs(commutator(ops.Jx, ops.Jx)) == 0.0);
  CHECK(max_abs(commutator(ops.Jy, ops.Jx) + i * ops.Jz) <= 1e-15);
}

TEST_CASE("commutator rejects mismatched shapes") {
  CHECK_THROWS_AS(commutator(Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(3, 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(commutator(Eigen::MatrixXcd::Zero(2, 3), Eigen::MatrixXcd::Zero(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("restricted pseudo-spin is spin-1/2") {
  const auto ops = build_alignment_operators();
  for (const auto *J : {&ops.Jx, &ops.Jy, &ops.Jz}) {
    const Eigen::Matrix2cd block = OperatorSet::restrict_to_pseudo_spin(*J);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
    CHECK(es.eigenvalues()(0) == Approx(-0.5).epsilon(1e-15));
    CHECK(es.eigenvalues()(1) == Approx(0.5).epsilon(1e-15));
    // Annihilates |m=0>.
    CHECK(max_abs(*J * Eigen::Vector3cd(0, 1, 0)) == 0.0);
  }
  // Casimir on the block: Jx^2 + Jy^2 + Jz^2 = 3/4.
  Eigen::Matrix2cd c = Eigen::Matrix2cd::Zero();
  for (const auto *J : {&ops.Jx, &ops.Jy, &ops.Jz}) {
    const auto b = OperatorSet::restrict_to_pseudo_spin(*J);
    c += b * b;
  }
  CHECK(max_abs(c - 0.75 * Eigen::Matrix2cd::Identity()) < 1e-15);
}

TEST_CASE("coherent state moments") {
  // Single atom in (|+> + |->)/sqrt(2): direct expectation values.
  const auto ops = build_alignment_operators();
  const Eigen::Vector3cd psi = Eigen::Vector3cd(1, 0, 1) / std::sqrt(2.0);
  auto expect = [&](const Matrix3c &A) { return (psi.adjoint() * A * psi)(0).real(); };
  const double jx = expect(ops.Jx), jz = expect(ops.Jz);
  const double var_jz = expect(ops.Jz * ops.Jz) - jz * jz;
  const double var_jy = expect(ops.Jy * ops.Jy) - expect(ops.Jy) * expect(ops.Jy);

  const auto m1 = coherent_state_moments(1);
  CHECK(m1.mean_Jx == Approx(jx));
  CHECK(m1.mean_Jx == 0.5);
  CHECK(m1.var_Jz == Approx(var_jz));
  CHECK(m1.var_Jy == Approx(var_jy));
  CHECK(m1.var_Jz == 0.25);

  const auto m100 = coherent_state_moments(100);
  CHECK(m100.mean_Jx == 50.0);
  CHECK(m100.var_Jz == 25.0);
  CHECK(m100.mean_Jy == 0.0);
  CHECK(m100.mean_Jz == 0.0);
  CHECK(coherent_state_moments(4'000'000).var_Jz == 1.0e6);
  CHECK_THROWS_AS(coherent_state_moments(0), std::invalid_argument);
}

TEST_CASE("coherent state saturates the Heisenberg bound") {
  for (std::int64_t N : {1, 7, 1000, 123456}) {
    const auto m = coherent_state_moments(N);
    CHECK(m.var_Jy * m.var_Jz == Approx(m.mean_Jx * m.mean_Jx / 4.0));
  }
}

TEST_CASE("operator JSON export") {
  const auto ops = build_alignment_operators();
  const auto j = nlohmann::json::parse(operators_to_json(ops));
  CHECK(j["basis"][0] == "m=-1");
  // Ty(|->,|+>) = i
  CHECK(j["Ty"][0][2][0].get<double>() == 0.0);
  CHECK(j["Ty"][0][2][1].get<double>() == 1.0);
  CHECK(j["Jz"][2][2][0].get<double>() == 0.5);
  CHECK(j["Tx"][1][1][0].get<double>() == 0.0);
}
