#pragma once

// Non-adaptive sequential read-out of a 1D cluster state. Each qubit is
// measured in the basis
//   |e0> = cos(phi)|0> + exp(i xi) sin(phi)|1>
//   |e1> = sin(phi)|0> - exp(i xi) cos(phi)|1>
// and the hidden qubit evolves as |v> -> K_s |v> with
//   K_s = (|0><e_s| + |1><e_s| Z) / sqrt(2).

#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hqmm/quantum.hpp"

namespace hqmm::cluster {

struct MeasurementBasis {
  double phi = 0.0;
  double xi = 0.0;

  /// Outcome vector |e_s>, s in {0, 1}.
  ComplexVector outcome(std::size_t s) const {
    const complex phase = std::polar(1.0, xi);
    ComplexVector e(2);
    if (s == 0) {
      e << std::cos(phi), phase * std::sin(phi);
    } else {
      e << std::sin(phi), -phase * std::cos(phi);
    }
    return e;
  }

  ComplexMatrix projector(std::size_t s) const {
    const ComplexVector e = outcome(s);
    return e * e.adjoint();
  }

  /// Angles reduced to phi in [0, pi), xi in [0, 2 pi).
  MeasurementBasis canonical() const {
    using std::numbers::pi;
    auto wrap = [](double x, double period) {
      double r = std::fmod(x, period);
      return r < 0.0 ? r + period : r;
    };
    return {wrap(phi, pi), wrap(xi, 2.0 * pi)};
  }
};

inline ComplexVector plus_state() {
  ComplexVector v(2);
  v << 1.0, 1.0;
  return v / std::sqrt(2.0);
}

inline HqmmModel cluster_kraus(const MeasurementBasis& basis) {
  if (!std::isfinite(basis.phi) || !std::isfinite(basis.xi)) {
    throw std::invalid_argument("cluster_kraus: non-finite basis angle");
  }
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  HqmmModel m{Alphabet({"0", "1"}), 2, {}, std::nullopt};
  for (std::size_t s = 0; s < 2; ++s) {
    const Eigen::RowVector2cd bra = basis.outcome(s).adjoint();
    ComplexMatrix k(2, 2);
    k.row(0) = bra;
    k.row(1) = bra * z;
    m.operations.push_back({k / std::sqrt(2.0)});
  }
  return m;
}

inline constexpr int max_oracle_qubits = 14;

/// Amplitude vector of U_{N,N-1} ... U_{21} |+>^N. Qubit k (1-based, in
/// measurement order) is bit k-1 of the basis-state index.
class ClusterOracle {
 public:
  explicit ClusterOracle(int n) : n_(n) {
    if (n < 2 || n > max_oracle_qubits) {
      throw std::out_of_range("cluster oracle supports 2.." + std::to_string(max_oracle_qubits) + " qubits, got " +
                              std::to_string(n));
    }
    const std::size_t size = std::size_t{1} << n;
    amplitudes_ = ComplexVector::Constant(static_cast<Eigen::Index>(size), std::pow(2.0, -0.5 * n));
    for (int q = 0; q + 1 < n; ++q) {
      const std::size_t both = (std::size_t{1} << q) | (std::size_t{1} << (q + 1));
      for (std::size_t idx = 0; idx < size; ++idx) {
        if ((idx & both) == both) amplitudes_[static_cast<Eigen::Index>(idx)] *= -1.0;
      }
    }
  }

  int qubits() const noexcept { return n_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }

  /// || P_{s_n} ... P_{s_1} |cluster_N> ||^2 with P_{s_k} acting on qubit k.
  double word_probability(const MeasurementBasis& basis, const Word& word) const {
    if (word.size() > static_cast<std::size_t>(n_)) {
      throw std::invalid_argument("cluster oracle: word of length " + std::to_string(word.size()) +
                                  " exceeds chain of " + std::to_string(n_) + " qubits");
    }
    const std::array<ComplexVector, 2> e{basis.outcome(0), basis.outcome(1)};
    ComplexVector psi = amplitudes_;
    const std::size_t size = static_cast<std::size_t>(psi.size());
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (word[k] > 1) throw UnknownSymbol("cluster oracle: symbols are 0 and 1");
      const ComplexVector& v = e[word[k]];
      const std::size_t bit = std::size_t{1} << k;
      for (std::size_t idx = 0; idx < size; ++idx) {
        if (idx & bit) continue;
        const auto i0 = static_cast<Eigen::Index>(idx);
        const auto i1 = static_cast<Eigen::Index>(idx | bit);
        const complex overlap = std::conj(v[0]) * psi[i0] + std::conj(v[1]) * psi[i1];
        psi[i0] = v[0] * overlap;
        psi[i1] = v[1] * overlap;
      }
    }
    return psi.squaredNorm();
  }

 private:
  int n_;
  ComplexVector amplitudes_;
};

inline ClusterOracle build_cluster(int n) { return ClusterOracle(n); }

inline double oracle_word_probability(const ClusterOracle& oracle, const MeasurementBasis& basis,
                                      const Word& word) {
  return oracle.word_probability(basis, word);
}

/// cos(xi) (sin 2phi + sin 6phi), the parity bias of length-3 words.
inline double length3_bias(const MeasurementBasis& b) {
  return std::cos(b.xi) * (std::sin(2.0 * b.phi) + std::sin(6.0 * b.phi));
}

/// Stationary length-3 word probabilities, indexed by the word read as a
/// binary number (first symbol most significant). Words with an even number
/// of ones get 1/8 + bias/32, odd ones 1/8 - bias/32.
inline std::array<double, 8> length3_closed_form(const MeasurementBasis& basis) {
  const double a = length3_bias(basis);
  std::array<double, 8> p{};
  for (unsigned w = 0; w < 8; ++w) {
    const bool even = (std::popcount(w) % 2) == 0;
    p[w] = even ? 0.125 + a / 32.0 : 0.125 - a / 32.0;
  }
  return p;
}

/// H_3 = 5 - (1/2) log2(16 - a^2) + (1/2) cos(xi) cos^2(2 phi) sin(2 phi) log2(8 / (4 + a) - 1),
/// a = cos(xi)(sin 2phi + sin 6phi).
inline double h3_closed_form(const MeasurementBasis& basis) {
  const double a = length3_bias(basis);
  const double c2 = std::cos(2.0 * basis.phi);
  const double coeff = 0.5 * std::cos(basis.xi) * c2 * c2 * std::sin(2.0 * basis.phi);
  // a = 2 cos(xi) sin(4 phi) cos(2 phi), so |a| <= 2 and both log arguments are positive.
  return 5.0 - 0.5 * std::log2(16.0 - a * a) + coeff * std::log2(8.0 / (4.0 + a) - 1.0);
}

}  // namespace hqmm::cluster
