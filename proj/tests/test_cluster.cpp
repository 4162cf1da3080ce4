#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

namespace hqmm::cluster {
namespace {

using std::numbers::pi;

TEST(ClusterKraus, HadamardAtPiOverFour) {
  const auto m = cluster_kraus({pi / 4, 0.0});
  ComplexMatrix expected(2, 2);
  expected << 0.5, 0.5, 0.5, -0.5;
  EXPECT_LT(max_abs(m.kraus(0)[0] - expected), 1e-15);
}

TEST(ClusterKraus, CompletenessAnywhere) {
  for (double phi : {0.0, 0.2, 1.0, 2.5}) {
    for (double xi : {0.0, 0.7, 3.0, 5.9}) {
      const auto m = cluster_kraus({phi, xi});
      const ComplexMatrix sum = m.effect(0) + m.effect(1);
      EXPECT_LT(max_abs(sum - ComplexMatrix::Identity(2, 2)), 1e-15);
      EXPECT_EQ(m.kraus(0).size(), 1u);
      EXPECT_EQ(m.kraus(1).size(), 1u);
    }
  }
}

TEST(ClusterKraus, RejectsNonFiniteAngles) {
  EXPECT_THROW(cluster_kraus({std::nan(""), 0.0}), std::invalid_argument);
}

TEST(MeasurementBasisType, CanonicalRange) {
  const auto c = MeasurementBasis{-pi / 4, 7.0}.canonical();
  EXPECT_NEAR(c.phi, 3 * pi / 4, 1e-15);
  EXPECT_NEAR(c.xi, 7.0 - 2 * pi, 1e-15);
}

TEST(BuildCluster, TwoQubits) {
  const auto o = build_cluster(2);
  ComplexVector expected(4);
  expected << 0.5, 0.5, 0.5, -0.5;
  EXPECT_LT(max_abs(o.amplitudes() - expected), 1e-15);
}

TEST(BuildCluster, ThreeQubitSignsFromPhaseGates) {
  // Brute-force contraction: amplitude of |q3 q2 q1> is 2^{-3/2} (-1)^{q1 q2 + q2 q3}.
  const auto o = build_cluster(3);
  for (int idx = 0; idx < 8; ++idx) {
    const int q1 = idx & 1, q2 = (idx >> 1) & 1, q3 = (idx >> 2) & 1;
    const double sign = ((q1 * q2 + q2 * q3) % 2) ? -1.0 : 1.0;
    EXPECT_NEAR(std::abs(o.amplitudes()[idx] - complex(sign * std::pow(2.0, -1.5))), 0.0, 1e-15);
  }
}

TEST(BuildCluster, NormAndMagnitudes) {
  for (int n = 2; n <= max_oracle_qubits; ++n) {
    const auto o = build_cluster(n);
    EXPECT_NEAR(o.amplitudes().norm(), 1.0, 1e-12);
    EXPECT_NEAR(o.amplitudes().cwiseAbs().maxCoeff(), std::pow(2.0, -0.5 * n), 1e-15);
    EXPECT_NEAR(o.amplitudes().cwiseAbs().minCoeff(), std::pow(2.0, -0.5 * n), 1e-15);
  }
}

TEST(BuildCluster, RangeChecked) {
  EXPECT_THROW(build_cluster(1), std::out_of_range);
  EXPECT_THROW(build_cluster(max_oracle_qubits + 1), std::out_of_range);
}

TEST(Oracle, SingleSymbolIsHalf) {
  const auto o = build_cluster(5);
  for (const auto& b : testing::cluster_grid()) {
    EXPECT_NEAR(oracle_word_probability(o, b, {0}), 0.5, 1e-14);
    EXPECT_NEAR(oracle_word_probability(o, b, {1}), 0.5, 1e-14);
  }
}

TEST(Oracle, EmptyWordAndLengthLimit) {
  const auto o = build_cluster(4);
  EXPECT_NEAR(oracle_word_probability(o, {0.3, 0.2}, {}), 1.0, 1e-14);
  EXPECT_THROW(oracle_word_probability(o, {0.3, 0.2}, Word(5, 0)), std::invalid_argument);
}

TEST(Oracle, ZBasisAllZeros) {
  // phi = 0 measures in the computational basis; every Z-basis pattern of a
  // cluster state has weight 2^-n on the measured qubits.
  const auto o = build_cluster(6);
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_NEAR(oracle_word_probability(o, {0.0, 0.0}, Word(n, 0)), std::pow(0.5, double(n)), 1e-14);
}

TEST(Oracle, MatchesHqmmFromPlusState) {
  const auto o = build_cluster(8);
  const auto plus = DensityMatrix::pure(plus_state());
  for (const auto& b : testing::cluster_grid()) {
    const auto m = cluster_kraus(b);
    for (std::size_t n = 1; n <= 5; ++n) {
      for (const auto& w : testing::all_words(2, n)) {
        EXPECT_NEAR(oracle_word_probability(o, b, w), word_probability(m, w, plus), 1e-12);
      }
    }
  }
}

TEST(Length3ClosedForm, UniformAtPiOverFour) {
  for (double p : length3_closed_form({pi / 4, 0.0})) EXPECT_NEAR(p, 0.125, 1e-16);
}

TEST(Length3ClosedForm, PiOverEight) {
  const auto p = length3_closed_form({pi / 8, 0.0});
  EXPECT_NEAR(p[0], 0.125 + std::sqrt(2.0) / 32, 1e-15);
  EXPECT_NEAR(p[7], 0.125 - std::sqrt(2.0) / 32, 1e-15);
}

TEST(Length3ClosedForm, SumsToOne) {
  for (const auto& b : testing::cluster_grid()) {
    double total = 0.0;
    for (double p : length3_closed_form(b)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-15);
  }
}

TEST(Length3ClosedForm, MatchesStationaryEnumeration) {
  for (const auto& b : testing::cluster_grid()) {
    const auto m = cluster_kraus(b);
    const auto closed = length3_closed_form(b);
    for (unsigned idx = 0; idx < 8; ++idx) {
      const Word w{(idx >> 2) & 1u, (idx >> 1) & 1u, idx & 1u};
      EXPECT_NEAR(word_probability(m, w), closed[idx], 1e-12);
    }
  }
}

TEST(H3ClosedForm, MaximumValues) {
  EXPECT_NEAR(h3_closed_form({pi / 4, 0.0}), 3.0, 1e-15);
  for (double phi : {0.1, 0.5, 1.3}) EXPECT_NEAR(h3_closed_form({phi, pi / 2}), 3.0, 1e-15);
}

TEST(H3ClosedForm, AgreesWithDirectEntropy) {
  for (const auto& b : testing::cluster_grid()) {
    double h = 0.0;
    for (double p : length3_closed_form(b)) h -= p * std::log2(p);
    EXPECT_NEAR(h3_closed_form(b), h, 1e-9);
  }
  EXPECT_LT(h3_closed_form({pi / 8, 0.0}), 3.0);
}

TEST(Stationary, MaximallyMixedAndUncorrelatedPairs) {
  for (const auto& b : testing::cluster_grid()) {
    const auto m = cluster_kraus(b);
    const auto fp = steady_state(m);
    EXPECT_LT(max_abs(fp.state.matrix() - ComplexMatrix::Identity(2, 2) / 2.0), 1e-12);
    for (std::size_t s = 0; s < 2; ++s) EXPECT_NEAR(word_probability(m, {s}), 0.5, 1e-12);
    for (const auto& w : testing::all_words(2, 2)) EXPECT_NEAR(word_probability(m, w), 0.25, 1e-12);
  }
}

}  // namespace
}  // namespace hqmm::cluster
