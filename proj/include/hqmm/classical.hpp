#pragma once

// Stochastic finite-state generators in Mealy form. Column-vector convention:
// [T_s](i, j) = P(s; i | j), so a state distribution evolves as pi -> T_s pi
// and the word s_1 ... s_n has probability <1| T_{s_n} ... T_{s_1} |pi>.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "hqmm/algebra.hpp"

namespace hqmm {

struct HmmModel {
  Alphabet alphabet;
  std::vector<RealMatrix> transitions;  // one per symbol, indexed like `alphabet`
  std::optional<ProbVector> prior;

  Eigen::Index states() const noexcept { return transitions.empty() ? 0 : transitions.front().rows(); }

  RealMatrix total() const {
    RealMatrix t = RealMatrix::Zero(states(), states());
    for (const auto& m : transitions) t += m;
    return t;
  }
};

inline ValidationReport validate_hmm(const HmmModel& m, const Tolerances& tol = default_tolerances) {
  ValidationReport r;
  if (m.alphabet.size() == 0) r.add("alphabet", "empty");
  if (m.transitions.size() != m.alphabet.size()) {
    r.add("transitions", "expected one matrix per symbol (" + std::to_string(m.alphabet.size()) + "), got " +
                             std::to_string(m.transitions.size()));
    return r;
  }
  const Eigen::Index d = m.states();
  if (d == 0) {
    r.add("transitions", "zero states");
    return r;
  }
  bool shapes_ok = true;
  for (std::size_t s = 0; s < m.transitions.size(); ++s) {
    const auto& t = m.transitions[s];
    const std::string where = "T[" + m.alphabet[s] + "]";
    if (t.rows() != d || t.cols() != d) {
      r.add(where, "must be " + std::to_string(d) + "x" + std::to_string(d));
      shapes_ok = false;
      continue;
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        const double x = t(i, j);
        if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
          r.add(where + " entry (" + std::to_string(i) + "," + std::to_string(j) + ")",
                "value " + std::to_string(x) + " outside [0,1]");
        }
      }
      const double col = t.col(j).sum();
      if (col > 1.0 + tol.stochastic) {
        r.add(where + " column " + std::to_string(j), "sums to " + std::to_string(col) + " > 1 (not substochastic)");
      }
    }
  }
  if (shapes_ok) {
    const RealMatrix total = m.total();
    for (Eigen::Index j = 0; j < d; ++j) {
      const double col = total.col(j).sum();
      if (std::abs(col - 1.0) > tol.stochastic) {
        r.add("sum_s T_s column " + std::to_string(j), "sums to " + std::to_string(col) + ", expected 1");
      }
    }
  }
  if (m.prior) {
    if (m.prior->dim() != d) r.add("prior", "dimension differs from state count");
  }
  return r;
}

inline void require_valid(const HmmModel& m, const Tolerances& tol = default_tolerances) {
  auto r = validate_hmm(m, tol);
  if (!r.ok()) throw ValidationError(std::move(r));
}

struct StationaryDistribution {
  ProbVector distribution;
  bool unique;
};

/// Eigenvector of sum_s T_s with eigenvalue 1. A degenerate eigenspace is
/// resolved by projecting the uniform vector onto it (flagged non-unique).
inline StationaryDistribution steady_state(const HmmModel& m, const Tolerances& tol = default_tolerances) {
  const Eigen::Index d = m.states();
  RealMatrix shifted = m.total() - RealMatrix::Identity(d, d);
  RealMatrix kernel = null_space(shifted, tol.fixed_point);
  if (kernel.cols() == 0) throw NumericalError("steady_state: sum_s T_s has no eigenvalue 1");
  RealVector v;
  if (kernel.cols() == 1) {
    v = kernel.col(0);
  } else {
    RealVector uniform = RealVector::Constant(d, 1.0 / static_cast<double>(d));
    v = kernel * (kernel.transpose() * uniform);
  }
  v /= v.sum();
  v = v.cwiseMax(0.0);
  v /= v.sum();
  return {ProbVector(std::move(v), tol), kernel.cols() == 1};
}

inline double clamp_probability(double p, const Tolerances& tol = default_tolerances) {
  if (p < -tol.negative_probability) {
    throw NumericalError("negative probability " + std::to_string(p) + " (invalid model)");
  }
  return std::clamp(p, 0.0, 1.0);
}

/// Initial distribution used when none is given: the prior if the model has
/// one, otherwise the stationary distribution.
inline RealVector default_initial(const HmmModel& m) {
  if (m.prior) return m.prior->vector();
  return steady_state(m).distribution.vector();
}

inline double word_probability(const HmmModel& m, const Word& word,
                               const std::optional<ProbVector>& initial = std::nullopt) {
  check_word(word, m.alphabet);
  RealVector state = initial ? initial->vector() : default_initial(m);
  if (state.size() != m.states()) throw DimensionError("word_probability: initial distribution has wrong size");
  for (auto s : word) state = m.transitions[s] * state;
  return clamp_probability(state.sum());
}

/// Location of the first matrix column (or row) violating a structural property.
struct Witness {
  std::size_t symbol;
  Eigen::Index index;
};

struct StructureCheck {
  bool holds;
  std::optional<Witness> witness;
  explicit operator bool() const noexcept { return holds; }
};

/// Deterministic: every column of every T_s has at most one nonzero entry.
inline StructureCheck is_deterministic(const HmmModel& m, const Tolerances& tol = default_tolerances) {
  for (std::size_t s = 0; s < m.transitions.size(); ++s) {
    const auto& t = m.transitions[s];
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if ((t.col(j).array().abs() > tol.zero_entry).count() > 1) return {false, Witness{s, j}};
    }
  }
  return {true, std::nullopt};
}

/// Reversible: deterministic, and every row of every T_s has at most one
/// nonzero entry. Witness index is the offending row.
inline StructureCheck is_reversible(const HmmModel& m, const Tolerances& tol = default_tolerances) {
  if (auto det = is_deterministic(m, tol); !det) {
    throw std::invalid_argument("is_reversible: model is not deterministic (symbol " +
                                m.alphabet[det.witness->symbol] + ", column " +
                                std::to_string(det.witness->index) + ")");
  }
  for (std::size_t s = 0; s < m.transitions.size(); ++s) {
    const auto& t = m.transitions[s];
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if ((t.row(i).array().abs() > tol.zero_entry).count() > 1) return {false, Witness{s, i}};
    }
  }
  return {true, std::nullopt};
}

}  // namespace hqmm
