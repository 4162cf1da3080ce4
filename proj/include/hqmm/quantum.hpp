#pragma once

// Hidden quantum Markov models: a d-level system evolved by one quantum
// operation per emitted symbol. Each operation is kept as its explicit list of
// Kraus operators; superoperator matrices are built on demand.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hqmm/algebra.hpp"
#include "hqmm/classical.hpp"

namespace hqmm {

struct HqmmModel {
  Alphabet alphabet;
  Eigen::Index dim = 0;
  std::vector<std::vector<ComplexMatrix>> operations;  // Kraus lists, indexed like `alphabet`
  std::optional<DensityMatrix> initial;

  const std::vector<ComplexMatrix>& kraus(std::size_t symbol) const { return operations.at(symbol); }

  /// sum_i K_i(s)^dagger K_i(s)
  ComplexMatrix effect(std::size_t symbol) const {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    for (const auto& k : operations.at(symbol)) e.noalias() += k.adjoint() * k;
    return e;
  }
};

inline ValidationReport validate_hqmm(const HqmmModel& m, const Tolerances& tol = default_tolerances) {
  ValidationReport r;
  if (m.alphabet.size() == 0) r.add("alphabet", "empty");
  if (m.dim <= 0) {
    r.add("dimension", "must be positive");
    return r;
  }
  if (m.operations.size() != m.alphabet.size()) {
    r.add("operations", "expected one Kraus list per symbol (" + std::to_string(m.alphabet.size()) + "), got " +
                            std::to_string(m.operations.size()));
    return r;
  }
  bool shapes_ok = true;
  for (std::size_t s = 0; s < m.operations.size(); ++s) {
    const std::string where = "K[" + m.alphabet[s] + "]";
    if (m.operations[s].empty()) r.add(where, "no Kraus operators");
    for (std::size_t i = 0; i < m.operations[s].size(); ++i) {
      const auto& k = m.operations[s][i];
      if (k.rows() != m.dim || k.cols() != m.dim) {
        r.add(where + "[" + std::to_string(i) + "]", "must be " + std::to_string(m.dim) + "x" + std::to_string(m.dim));
        shapes_ok = false;
      } else if (!all_finite(k)) {
        r.add(where + "[" + std::to_string(i) + "]", "non-finite entry");
        shapes_ok = false;
      }
    }
  }
  if (!shapes_ok) return r;

  ComplexMatrix total = ComplexMatrix::Zero(m.dim, m.dim);
  for (std::size_t s = 0; s < m.operations.size(); ++s) {
    const ComplexMatrix e = m.effect(s);
    total += e;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(e), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1.0 + tol.completeness) {
      r.add("K[" + m.alphabet[s] + "]", "trace increasing: largest eigenvalue of sum K^dagger K is " +
                                            std::to_string(es.eigenvalues().maxCoeff()));
    }
  }
  const double dev = max_abs(total - ComplexMatrix::Identity(m.dim, m.dim));
  if (dev > tol.completeness) {
    r.add("completeness", "sum over symbols of K^dagger K deviates from identity by " + std::to_string(dev));
  }
  if (m.initial && m.initial->dim() != m.dim) r.add("initial", "dimension differs from model");
  return r;
}

inline void require_valid(const HqmmModel& m, const Tolerances& tol = default_tolerances) {
  auto r = validate_hqmm(m, tol);
  if (!r.ok()) throw ValidationError(std::move(r));
}

inline ComplexMatrix transfer_matrix(const HqmmModel& m) {
  return transfer_matrix(std::span<const std::vector<ComplexMatrix>>(m.operations));
}

inline FixedPoint steady_state(const HqmmModel& m, const Tolerances& tol = default_tolerances) {
  return fixed_point(transfer_matrix(m), tol);
}

inline ComplexMatrix default_initial(const HqmmModel& m) {
  if (m.initial) return m.initial->matrix();
  return steady_state(m).state.matrix();
}

inline double trace_probability(const ComplexMatrix& unnormalized, const Tolerances& tol = default_tolerances) {
  return clamp_probability(unnormalized.trace().real(), tol);
}

/// tr[K_s rho]
inline double symbol_probability(const HqmmModel& m, std::size_t s, const DensityMatrix& rho,
                                 const Tolerances& tol = default_tolerances) {
  if (s >= m.alphabet.size()) throw UnknownSymbol("symbol index " + std::to_string(s) + " outside alphabet");
  return trace_probability(apply_kraus(m.kraus(s), rho), tol);
}

/// Post-measurement state K_s rho / tr[K_s rho].
inline DensityMatrix conditional_update(const HqmmModel& m, std::size_t s, const DensityMatrix& rho,
                                        const Tolerances& tol = default_tolerances) {
  if (s >= m.alphabet.size()) throw UnknownSymbol("symbol index " + std::to_string(s) + " outside alphabet");
  ComplexMatrix next = apply_kraus(m.kraus(s), rho);
  const double p = next.trace().real();
  if (p <= tol.impossible_outcome) {
    throw ImpossibleOutcome("conditional_update: outcome '" + m.alphabet[s] + "' has probability " +
                            std::to_string(p));
  }
  return DensityMatrix(next / p, tol);
}

/// tr[K_{s_n} ... K_{s_1} rho]. Defaults to the model's initial state, or the
/// stationary state when the model has none.
inline double word_probability(const HqmmModel& m, const Word& word,
                               const std::optional<DensityMatrix>& initial = std::nullopt,
                               const Tolerances& tol = default_tolerances) {
  check_word(word, m.alphabet);
  ComplexMatrix rho = initial ? initial->matrix() : default_initial(m);
  if (rho.rows() != m.dim) throw DimensionError("word_probability: initial state has wrong dimension");
  for (auto s : word) rho = apply_kraus(m.kraus(s), rho);
  return trace_probability(rho, tol);
}

namespace detail {

inline bool is_projector(const ComplexMatrix& p, double tol) {
  return p.rows() == p.cols() && max_abs(p - p.adjoint()) <= tol && max_abs(p * p - p) <= tol;
}

}  // namespace detail

/// Quantum generator alternating a unitary U with the projective measurement
/// {P_s}: one Kraus operator P_s U per symbol.
inline HqmmModel vn_generator(const std::vector<ComplexMatrix>& projectors, const ComplexMatrix& unitary,
                              Alphabet alphabet, const Tolerances& tol = default_tolerances) {
  if (projectors.size() != alphabet.size()) {
    throw std::invalid_argument("vn_generator: need one projector per symbol");
  }
  const Eigen::Index d = unitary.rows();
  if (unitary.cols() != d || d == 0) throw DimensionError("vn_generator: unitary must be square");
  if (max_abs(unitary.adjoint() * unitary - ComplexMatrix::Identity(d, d)) > tol.projector) {
    throw std::invalid_argument("vn_generator: U is not unitary");
  }
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t s = 0; s < projectors.size(); ++s) {
    const auto& p = projectors[s];
    if (p.rows() != d || p.cols() != d) throw DimensionError("vn_generator: projector dimension mismatch");
    if (!detail::is_projector(p, tol.projector)) {
      throw std::invalid_argument("vn_generator: P[" + alphabet[s] + "] is not a Hermitian idempotent");
    }
    for (std::size_t t = 0; t < s; ++t) {
      if (max_abs(p * projectors[t]) > tol.projector) {
        throw std::invalid_argument("vn_generator: P[" + alphabet[s] + "] and P[" + alphabet[t] +
                                    "] are not orthogonal");
      }
    }
    sum += p;
  }
  if (max_abs(sum - ComplexMatrix::Identity(d, d)) > tol.projector) {
    throw std::invalid_argument("vn_generator: projectors do not sum to the identity");
  }
  HqmmModel m{std::move(alphabet), d, {}, std::nullopt};
  for (const auto& p : projectors) m.operations.push_back({p * unitary});
  require_valid(m, tol);
  return m;
}

/// Classical generator embedded as an incoherent HQMM: one Kraus operator
/// sqrt([T_s]_ij) |i><j| per nonzero transition.
inline HqmmModel embed_classical(const HmmModel& hmm, const Tolerances& tol = default_tolerances) {
  require_valid(hmm, tol);
  const Eigen::Index d = hmm.states();
  HqmmModel m{hmm.alphabet, d, {}, std::nullopt};
  for (const auto& t : hmm.transitions) {
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        if (t(i, j) <= 0.0) continue;
        ComplexMatrix k = ComplexMatrix::Zero(d, d);
        k(i, j) = std::sqrt(t(i, j));
        ops.push_back(std::move(k));
      }
    }
    // A symbol that is never emitted still needs an operation.
    if (ops.empty()) ops.push_back(ComplexMatrix::Zero(d, d));
    m.operations.push_back(std::move(ops));
  }
  if (hmm.prior) m.initial = DensityMatrix(hmm.prior->vector().cast<complex>().asDiagonal().toDenseMatrix());
  return m;
}

/// Reversible classical generator as a pure HQMM:
/// K_s = sum_j sqrt(P(s|j)) |I_j(s)><j|.
inline HqmmModel pure_from_reversible(const HmmModel& hmm, const Tolerances& tol = default_tolerances) {
  require_valid(hmm, tol);
  if (!is_deterministic(hmm, tol) || !is_reversible(hmm, tol)) {
    throw std::invalid_argument("pure_from_reversible: model is not reversible");
  }
  const Eigen::Index d = hmm.states();
  HqmmModel m{hmm.alphabet, d, {}, std::nullopt};
  for (const auto& t : hmm.transitions) {
    ComplexMatrix k = ComplexMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        if (std::abs(t(i, j)) > tol.zero_entry) k(i, j) = std::sqrt(t(i, j));
      }
    }
    m.operations.push_back({std::move(k)});
  }
  require_valid(m, tol);
  if (hmm.prior) m.initial = DensityMatrix(hmm.prior->vector().cast<complex>().asDiagonal().toDenseMatrix());
  return m;
}

inline double max_off_diagonal(const ComplexMatrix& rho) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(rho(i, j)));
    }
  }
  return worst;
}

/// Largest off-diagonal magnitude over the normalized conditional states
/// reached along `words` (every nonempty prefix). Impossible prefixes end a walk.
inline double coherence_check(const HqmmModel& m, const std::vector<Word>& words,
                              const std::optional<DensityMatrix>& initial = std::nullopt,
                              const Tolerances& tol = default_tolerances) {
  const ComplexMatrix start = initial ? initial->matrix() : default_initial(m);
  double worst = 0.0;
  for (const auto& word : words) {
    check_word(word, m.alphabet);
    ComplexMatrix rho = start;
    for (auto s : word) {
      rho = apply_kraus(m.kraus(s), rho);
      const double p = rho.trace().real();
      if (p <= tol.impossible_outcome) break;
      rho /= p;
      worst = std::max(worst, max_off_diagonal(rho));
    }
  }
  return worst;
}

}  // namespace hqmm
