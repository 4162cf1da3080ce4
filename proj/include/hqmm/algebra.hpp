#pragma once

// Dense complex linear algebra shared by every model type: density operators,
// operator-sum application, superoperator matrices, fixed points and rank.
//
// Vectorization is column stacking throughout: vec(A X B) = (B^T (x) A) vec(X),
// so the map rho -> K rho K^dagger has matrix conj(K) (x) K.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hqmm/core.hpp"

namespace hqmm {

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return a * b;
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

inline bool all_finite(const ComplexMatrix& m) {
  return m.unaryExpr([](const complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); })
      .all();
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw DimensionError("unvec: vector length is not dim^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

/// Unit-trace, Hermitian, positive semidefinite d x d matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = default_tolerances)
      : m_(std::move(m)) {
    auto report = check(m_, tol);
    if (!report.ok()) throw ValidationError(std::move(report));
  }

  static ValidationReport check(const ComplexMatrix& m, const Tolerances& tol = default_tolerances) {
    ValidationReport r;
    if (m.rows() != m.cols() || m.rows() == 0) {
      r.add("density matrix", "must be square and non-empty");
      return r;
    }
    if (!all_finite(m)) {
      r.add("density matrix", "non-finite entry");
      return r;
    }
    if (max_abs(m - m.adjoint()) > tol.hermitian) r.add("density matrix", "not Hermitian");
    if (std::abs(m.trace() - complex(1.0)) > tol.trace) {
      r.add("density matrix", "trace " + std::to_string(m.trace().real()) + " != 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol.psd) r.add("density matrix", "negative eigenvalue");
    return r;
  }

  static DensityMatrix maximally_mixed(Eigen::Index d) {
    return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
  }
  static DensityMatrix pure(const ComplexVector& psi) {
    ComplexVector n = psi / psi.norm();
    return DensityMatrix(n * n.adjoint());
  }
  static DensityMatrix basis(Eigen::Index d, Eigen::Index k) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(k, k) = 1.0;
    return DensityMatrix(std::move(m));
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Nonnegative real vector summing to one.
class ProbVector {
 public:
  explicit ProbVector(RealVector v, const Tolerances& tol = default_tolerances) : v_(std::move(v)) {
    auto report = check(v_, tol);
    if (!report.ok()) throw ValidationError(std::move(report));
  }

  static ValidationReport check(const RealVector& v, const Tolerances& tol = default_tolerances) {
    ValidationReport r;
    if (v.size() == 0) {
      r.add("probability vector", "empty");
      return r;
    }
    if (!v.allFinite()) r.add("probability vector", "non-finite entry");
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v[i] < 0.0) r.add("probability vector[" + std::to_string(i) + "]", "negative entry");
    }
    if (std::abs(v.sum() - 1.0) > tol.probability_sum) {
      r.add("probability vector", "entries sum to " + std::to_string(v.sum()));
    }
    return r;
  }

  static ProbVector uniform(Eigen::Index d) {
    return ProbVector(RealVector::Constant(d, 1.0 / static_cast<double>(d)));
  }

  const RealVector& vector() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return v_.size(); }

 private:
  RealVector v_;
};

namespace detail {

inline void check_kraus_dims(std::span<const ComplexMatrix> kraus, Eigen::Index d, const char* who) {
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw DimensionError(std::string(who) + ": Kraus operator is " + std::to_string(k.rows()) + "x" +
                           std::to_string(k.cols()) + ", expected " + std::to_string(d) + "x" +
                           std::to_string(d));
    }
  }
}

}  // namespace detail

/// sum_i K_i rho K_i^dagger, returned Hermitian-symmetrized. rho may be
/// unnormalized.
inline ComplexMatrix apply_kraus(std::span<const ComplexMatrix> kraus, const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("apply_kraus: rho is not square");
  detail::check_kraus_dims(kraus, rho.rows(), "apply_kraus");
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out.noalias() += k * rho * k.adjoint();
  return hermitian_part(out);
}

inline ComplexMatrix apply_kraus(std::span<const ComplexMatrix> kraus, const DensityMatrix& rho) {
  return apply_kraus(kraus, rho.matrix());
}

/// d^2 x d^2 matrix of the map rho -> sum over all symbols and Kraus indices.
inline ComplexMatrix transfer_matrix(std::span<const std::vector<ComplexMatrix>> kraus_by_symbol) {
  Eigen::Index d = -1;
  for (const auto& ops : kraus_by_symbol) {
    for (const auto& k : ops) {
      if (d < 0) d = k.rows();
      if (k.rows() != d || k.cols() != d) throw DimensionError("transfer_matrix: mixed Kraus dimensions");
    }
  }
  if (d < 0) throw DimensionError("transfer_matrix: no Kraus operators");
  ComplexMatrix l = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& ops : kraus_by_symbol) {
    for (const auto& k : ops) l += kron(k.conjugate(), k);
  }
  return l;
}

inline ComplexMatrix transfer_matrix(std::span<const ComplexMatrix> kraus) {
  std::vector<std::vector<ComplexMatrix>> one{std::vector<ComplexMatrix>(kraus.begin(), kraus.end())};
  return transfer_matrix(std::span<const std::vector<ComplexMatrix>>(one));
}

/// Orthonormal basis (as columns) of the vectors x with ||a x|| <= tol.
template <class Matrix>
Matrix null_space(const Matrix& a, double tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index n = a.cols();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

struct FixedPoint {
  DensityMatrix state;
  bool unique;
};

/// Stationary state of a trace-preserving map given by its transfer matrix.
/// A degenerate eigenvalue-1 space is resolved by projecting the maximally
/// mixed state onto it; `unique` is false in that case.
inline FixedPoint fixed_point(const ComplexMatrix& transfer, const Tolerances& tol = default_tolerances) {
  const Eigen::Index n = transfer.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (transfer.cols() != n || d * d != n || n == 0) {
    throw DimensionError("fixed_point: transfer matrix must be d^2 x d^2");
  }
  ComplexMatrix shifted = transfer - ComplexMatrix::Identity(n, n);
  ComplexMatrix kernel = null_space(shifted, tol.fixed_point);
  if (kernel.cols() == 0) {
    throw NumericalError("fixed_point: no eigenvalue within tolerance of 1 (map is not trace preserving)");
  }
  ComplexMatrix rho;
  if (kernel.cols() == 1) {
    rho = unvec(kernel.col(0), d);
  } else {
    ComplexVector mixed = vec(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
    rho = unvec(kernel * (kernel.adjoint() * mixed), d);
  }
  const complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) throw NumericalError("fixed_point: fixed point has zero trace");
  rho = hermitian_part(rho / tr);
  rho /= rho.trace().real();
  return {DensityMatrix(std::move(rho), tol), kernel.cols() == 1};
}

/// Number of singular values above `tol`; the automatic threshold is
/// max(rows, cols) * sigma_max * 2^-50.
template <class Matrix>
std::size_t numerical_rank(const Matrix& m, std::optional<double> tol = std::nullopt) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<typename Matrix::PlainObject> svd(m.eval());
  const auto& s = svd.singularValues();
  const double cutoff =
      tol ? *tol : static_cast<double>(std::max(m.rows(), m.cols())) * s[0] * std::ldexp(1.0, -50);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) ++rank;
  }
  return rank;
}

}  // namespace hqmm
