#pragma once

// Translationally invariant MPS read out site by site. The isometry
//   V = sum_{i, a, b} V^i_{ab} |a, i><b|
// maps the bond space A to A (x) B; measuring the physical site B with the
// projectors {P_s} leaves the bond space in K_s rho, where
//   K_s^i = <i| P_s V |0> = sum_j <i|P_s|j> V^j.
// The final boundary vector never enters long-run statistics and is not stored.

#include <string>
#include <vector>

#include "hqmm/quantum.hpp"

namespace hqmm {

struct MpsModel {
  Alphabet alphabet;                      // measurement outcomes
  Eigen::Index bond_dim = 0;              // D
  Eigen::Index phys_dim = 0;              // d
  std::vector<ComplexMatrix> tensors;     // V^i, i = 0..d-1, each D x D
  std::vector<ComplexMatrix> projectors;  // P_s on the physical site, indexed like `alphabet`
  DensityMatrix initial = DensityMatrix::maximally_mixed(1);

  /// Stacked dD x D isometry, row index a * d + i.
  ComplexMatrix isometry() const {
    ComplexMatrix v(bond_dim * phys_dim, bond_dim);
    for (Eigen::Index a = 0; a < bond_dim; ++a) {
      for (Eigen::Index i = 0; i < phys_dim; ++i) v.row(a * phys_dim + i) = tensors[i].row(a);
    }
    return v;
  }
};

inline ValidationReport validate_mps(const MpsModel& m, const Tolerances& tol = default_tolerances) {
  ValidationReport r;
  if (m.bond_dim <= 0) r.add("bond_dimension", "must be positive");
  if (m.phys_dim <= 0) r.add("physical_dimension", "must be positive");
  if (!r.ok()) return r;
  const Eigen::Index big_d = m.bond_dim;
  const Eigen::Index d = m.phys_dim;
  if (static_cast<Eigen::Index>(m.tensors.size()) != d) {
    r.add("tensors", "expected " + std::to_string(d) + " matrices, got " + std::to_string(m.tensors.size()));
    return r;
  }
  bool shapes_ok = true;
  for (std::size_t i = 0; i < m.tensors.size(); ++i) {
    if (m.tensors[i].rows() != big_d || m.tensors[i].cols() != big_d) {
      r.add("tensors[" + std::to_string(i) + "]", "must be " + std::to_string(big_d) + "x" + std::to_string(big_d));
      shapes_ok = false;
    }
  }
  if (shapes_ok) {
    ComplexMatrix gram = ComplexMatrix::Zero(big_d, big_d);
    for (const auto& v : m.tensors) gram += v.adjoint() * v;
    const double dev = max_abs(gram - ComplexMatrix::Identity(big_d, big_d));
    if (dev > tol.projector) {
      r.add("isometry", "sum_i V^i^dagger V^i deviates from identity by " + std::to_string(dev));
    }
  }
  if (m.projectors.size() != m.alphabet.size() || m.projectors.empty()) {
    r.add("projectors", "expected one projector per symbol");
    return r;
  }
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  bool proj_shapes = true;
  for (std::size_t s = 0; s < m.projectors.size(); ++s) {
    const auto& p = m.projectors[s];
    const std::string where = "P[" + m.alphabet[s] + "]";
    if (p.rows() != d || p.cols() != d) {
      r.add(where, "must be " + std::to_string(d) + "x" + std::to_string(d));
      proj_shapes = false;
      continue;
    }
    if (!detail::is_projector(p, tol.projector)) r.add(where, "not a Hermitian idempotent");
    for (std::size_t t = 0; t < s; ++t) {
      if (m.projectors[t].rows() == d && max_abs(p * m.projectors[t]) > tol.projector) {
        r.add(where, "not orthogonal to P[" + m.alphabet[t] + "]");
      }
    }
    sum += p;
  }
  if (proj_shapes && max_abs(sum - ComplexMatrix::Identity(d, d)) > tol.projector) {
    r.add("projectors", "do not sum to the identity");
  }
  if (m.initial.dim() != big_d) r.add("initial", "dimension differs from bond dimension");
  return r;
}

/// HQMM on the bond space with d Kraus operators per symbol.
inline HqmmModel mps_to_hqmm(const MpsModel& m, const Tolerances& tol = default_tolerances) {
  if (auto r = validate_mps(m, tol); !r.ok()) throw ValidationError(std::move(r));
  HqmmModel h{m.alphabet, m.bond_dim, {}, m.initial};
  for (const auto& p : m.projectors) {
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index i = 0; i < m.phys_dim; ++i) {
      ComplexMatrix k = ComplexMatrix::Zero(m.bond_dim, m.bond_dim);
      for (Eigen::Index j = 0; j < m.phys_dim; ++j) {
        if (p(i, j) != complex(0.0)) k += p(i, j) * m.tensors[j];
      }
      ops.push_back(std::move(k));
    }
    h.operations.push_back(std::move(ops));
  }
  require_valid(h, tol);
  return h;
}

namespace cluster {

/// D = 2 cluster-state MPS: V^0 = |+><0|, V^1 = |-><1|, measured in `basis`,
/// bond space starting in |+><+|. Its read-out statistics are those of
/// cluster_kraus(basis) started from |+><+|.
inline MpsModel cluster_mps(const MeasurementBasis& basis) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexMatrix v0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix v1 = ComplexMatrix::Zero(2, 2);
  v0(0, 0) = h;
  v0(1, 0) = h;
  v1(0, 1) = h;
  v1(1, 1) = -h;
  return MpsModel{Alphabet({"0", "1"}), 2, 2, {v0, v1}, {basis.projector(0), basis.projector(1)},
                  DensityMatrix::pure(plus_state())};
}

}  // namespace cluster

}  // namespace hqmm
