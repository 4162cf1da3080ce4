#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

namespace hqmm {
namespace {

using testing::random_complex;
using testing::random_density;
using testing::random_unitary;

ComplexMatrix pauli_z() {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  return z;
}

TEST(Matmul, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  ComplexMatrix a = random_complex(rng, 2, 3);
  EXPECT_LT(max_abs(matmul(ComplexMatrix::Identity(2, 2), a) - a), 1e-15);
}

TEST(Matmul, ZIsAnInvolution) {
  EXPECT_LT(max_abs(matmul(pauli_z(), pauli_z()) - ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(Matmul, VonNeumannProductP0U) {
  const double h = 1 / std::sqrt(2.0);
  ComplexMatrix p0 = ComplexMatrix::Zero(3, 3);
  p0(0, 0) = 1;
  ComplexMatrix u(3, 3);
  u << h, 0, -h, h, 0, h, 0, -1, 0;
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected.row(0) << h, 0, -h;
  EXPECT_LT(max_abs(matmul(p0, u) - expected), 1e-15);
}

TEST(Matmul, DimensionMismatchThrows) {
  EXPECT_THROW(matmul(ComplexMatrix::Zero(2, 3), ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST(ApplyKraus, IdentityChannel) {
  std::mt19937_64 rng(2);
  auto rho = random_density(rng, 3);
  std::vector<ComplexMatrix> id{ComplexMatrix::Identity(3, 3)};
  EXPECT_LT(max_abs(apply_kraus(id, rho) - rho.matrix()), 1e-15);
}

TEST(ApplyKraus, FullDephasingOfPlus) {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  std::vector<ComplexMatrix> kraus{p0, p1};
  auto plus = DensityMatrix::pure(cluster::plus_state());
  EXPECT_LT(max_abs(apply_kraus(kraus, plus) - ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(ApplyKraus, ClusterChannelFixesMaximallyMixed) {
  auto m = cluster::cluster_kraus({std::numbers::pi / 4, 0.0});
  std::vector<ComplexMatrix> all{m.operations[0][0], m.operations[1][0]};
  auto mixed = DensityMatrix::maximally_mixed(2);
  EXPECT_LT(max_abs(apply_kraus(all, mixed) - mixed.matrix()), 1e-15);
}

TEST(ApplyKraus, DimensionMismatchThrows) {
  std::vector<ComplexMatrix> kraus{ComplexMatrix::Identity(3, 3)};
  EXPECT_THROW(apply_kraus(kraus, ComplexMatrix::Identity(2, 2)), DimensionError);
}

TEST(ApplyKraus, TracePreservingOnRandomStatesProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = testing::random_hqmm(rng, 1 + trial % 4, 1 + trial % 3, 1 + trial % 2);
    std::vector<ComplexMatrix> all;
    for (const auto& ops : m.operations) all.insert(all.end(), ops.begin(), ops.end());
    auto rho = random_density(rng, m.dim);
    const ComplexMatrix out = apply_kraus(all, rho);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
    EXPECT_LT(max_abs(out - out.adjoint()), 1e-12);
  }
}

TEST(TransferMatrix, IdentityKraus) {
  std::vector<ComplexMatrix> id{ComplexMatrix::Identity(3, 3)};
  EXPECT_LT(max_abs(transfer_matrix(id) - ComplexMatrix::Identity(9, 9)), 1e-15);
}

TEST(TransferMatrix, UnitaryConjugationUsesColumnStacking) {
  std::mt19937_64 rng(4);
  const ComplexMatrix u = random_unitary(rng, 3);
  std::vector<ComplexMatrix> kraus{u};
  const ComplexMatrix l = transfer_matrix(kraus);
  EXPECT_LT(max_abs(l - kron(u.conjugate(), u)), 1e-14);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix rho = random_density(rng, 3).matrix();
    const ComplexMatrix direct = u * rho * u.adjoint();
    EXPECT_LT(max_abs(l * vec(rho) - vec(direct)), 1e-13);
  }
}

TEST(TransferMatrix, MatchesApplyKrausProperty) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = testing::random_hqmm(rng, 1 + trial % 5, 1 + trial % 4, 1 + trial % 3);
    const ComplexMatrix l = transfer_matrix(m);
    std::vector<ComplexMatrix> all;
    for (const auto& ops : m.operations) all.insert(all.end(), ops.begin(), ops.end());
    const ComplexMatrix rho = random_density(rng, m.dim).matrix();
    EXPECT_LT(max_abs(unvec(l * vec(rho), m.dim) - apply_kraus(all, rho)), 1e-12);
  }
}

TEST(TransferMatrix, MixedDimensionsThrow) {
  std::vector<std::vector<ComplexMatrix>> ops{{ComplexMatrix::Identity(2, 2)}, {ComplexMatrix::Identity(3, 3)}};
  EXPECT_THROW(transfer_matrix(std::span<const std::vector<ComplexMatrix>>(ops)), DimensionError);
}

TEST(TransferMatrix, ClusterChannelFixesVecIdentity) {
  for (const auto& b : testing::cluster_grid()) {
    const ComplexMatrix l = transfer_matrix(cluster::cluster_kraus(b));
    const ComplexVector v = vec(ComplexMatrix::Identity(2, 2) / 2.0);
    EXPECT_LT(max_abs(l * v - v), 1e-14);
  }
}

TEST(FixedPoint, IdentityChannelIsDegenerate) {
  std::vector<ComplexMatrix> id{ComplexMatrix::Identity(2, 2)};
  const auto fp = fixed_point(transfer_matrix(id));
  EXPECT_FALSE(fp.unique);
  EXPECT_LT(max_abs(fp.state.matrix() - ComplexMatrix::Identity(2, 2) / 2.0), 1e-12);
}

TEST(FixedPoint, ClusterChannelIsMaximallyMixedOnGrid) {
  using std::numbers::pi;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const cluster::MeasurementBasis b{0.1 + i * pi / 5, j * 2 * pi / 5};
      const auto fp = steady_state(cluster::cluster_kraus(b));
      EXPECT_TRUE(fp.unique);
      EXPECT_LT(max_abs(fp.state.matrix() - ComplexMatrix::Identity(2, 2) / 2.0), 1e-10);
    }
  }
}

TEST(FixedPoint, EmbeddedEvenProcess) {
  // pi = (T0 + T1) pi gives pi_0 = pi_0/2 + pi_1, so pi = (2/3, 1/3).
  const auto fp = steady_state(embed_classical(testing::even_process()));
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 2.0 / 3.0;
  expected(1, 1) = 1.0 / 3.0;
  EXPECT_TRUE(fp.unique);
  EXPECT_LT(max_abs(fp.state.matrix() - expected), 1e-12);
}

TEST(FixedPoint, NotTracePreservingThrows) {
  std::vector<ComplexMatrix> half{ComplexMatrix::Identity(2, 2) * 0.5};
  EXPECT_THROW(fixed_point(transfer_matrix(half)), NumericalError);
}

TEST(FixedPoint, ResidualAndDensityInvariantsProperty) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = testing::random_hqmm(rng, 1 + trial % 5, 1 + trial % 3, 1 + trial % 2);
    const auto fp = steady_state(m);
    std::vector<ComplexMatrix> all;
    for (const auto& ops : m.operations) all.insert(all.end(), ops.begin(), ops.end());
    EXPECT_LT(max_abs(apply_kraus(all, fp.state) - fp.state.matrix()), 1e-10);
    EXPECT_TRUE(DensityMatrix::check(fp.state.matrix()).ok());
  }
}

TEST(NumericalRank, ZeroMatrix) { EXPECT_EQ(numerical_rank(RealMatrix::Zero(5, 5)), 0u); }

TEST(NumericalRank, EmptyMatrix) { EXPECT_EQ(numerical_rank(RealMatrix(0, 0)), 0u); }

TEST(NumericalRank, OuterProduct) {
  std::mt19937_64 rng(7);
  const ComplexMatrix a = random_complex(rng, 6, 1), b = random_complex(rng, 1, 4);
  EXPECT_EQ(numerical_rank(ComplexMatrix(a * b)), 1u);
}

TEST(NumericalRank, PaperHankelBlockHasRankThree) {
  RealMatrix h(5, 5);
  h << 1, 0.25, 0.25, 0.25, 0.25,     //
      0.25, 0.125, 0, 0.0625, 0.0625,  //
      0.25, 0, 0.125, 0.0625, 0.0625,  //
      0.25, 0.0625, 0.0625, 0.125, 0,  //
      0.25, 0.0625, 0.0625, 0, 0.125;
  EXPECT_EQ(numerical_rank(h), 3u);
}

TEST(NumericalRank, InvariantUnderPermutationAndUnitariesProperty) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index r = 2 + trial % 5;
    const Eigen::Index k = 1 + trial % 3;
    const ComplexMatrix m = random_complex(rng, 6, k) * random_complex(rng, k, r);
    const auto rank = numerical_rank(m);
    EXPECT_EQ(rank, static_cast<std::size_t>(std::min<Eigen::Index>(k, r)));
    Eigen::PermutationMatrix<Eigen::Dynamic> prow(6), pcol(r);
    prow.setIdentity();
    pcol.setIdentity();
    std::shuffle(prow.indices().data(), prow.indices().data() + 6, rng);
    std::shuffle(pcol.indices().data(), pcol.indices().data() + r, rng);
    EXPECT_EQ(numerical_rank(ComplexMatrix(prow * m * pcol)), rank);
    EXPECT_EQ(numerical_rank(ComplexMatrix(random_unitary(rng, 6) * m * random_unitary(rng, r))), rank);
  }
}

TEST(DensityMatrixType, RejectsInvalid) {
  ComplexMatrix not_unit = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{not_unit}, ValidationError);
  ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{negative}, ValidationError);
  ComplexMatrix skew = ComplexMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{skew}, ValidationError);
}

TEST(ProbVectorType, RejectsInvalid) {
  RealVector v(2);
  v << 0.7, 0.7;
  EXPECT_THROW(ProbVector{v}, ValidationError);
  v << 1.5, -0.5;
  EXPECT_THROW(ProbVector{v}, ValidationError);
}

}  // namespace
}  // namespace hqmm
