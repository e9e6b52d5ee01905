#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qpath/common.hpp"

namespace qpath {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Validated density operator. `op` is the symmetrized input (M + M^dag)/2;
/// defects record how far the raw input was from the ideal so callers can
/// report them.
struct DensityMatrix {
  CMatrix op;
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
};

/// Spectral decomposition with a deterministic convention:
///  - populations sorted non-increasing,
///  - within a near-degenerate cluster (gap < degeneracy tolerance) the
///    eigenvectors are replaced by a canonical orthonormal set obtained by
///    projecting computational basis vectors onto the cluster subspace in
///    index order (Gram-Schmidt, keeping vectors with residual above 1e-6),
///  - every eigenvector's largest-magnitude entry (lowest index on ties) is
///    phase-rotated to be real and positive.
/// Identical inputs therefore decompose identically, run to run.
struct SpectralDecomposition {
  std::vector<double> populations;  // non-increasing
  CMatrix eigenvectors;             // columns, orthonormal
  bool degeneracy_flag = false;     // any cluster of size > 1
};

struct Unitary {
  CMatrix op;
  double unitarity_defect = 0.0;
};

/// Checks Hermiticity, unit trace and positivity against `tol`; throws
/// NotHermitian / TraceNotOne / NotPositive. Returns the symmetrized matrix
/// so downstream eigensolves see an exactly self-adjoint operand.
DensityMatrix validate_density(const CMatrix& m, const Tolerances& tol = {});

/// Checks U U^dag = I against tol.unitary; throws NotUnitary on failure.
Unitary validate_unitary(const CMatrix& m, const Tolerances& tol = {});

/// Eigendecomposition of a validated density matrix under the canonical
/// convention documented on SpectralDecomposition. Throws
/// DecompositionFailed if the solver fails or the resulting column set is
/// not orthonormal.
SpectralDecomposition spectral_decompose(const DensityMatrix& rho,
                                         const Tolerances& tol = {});

/// Kronecker product of `ops` left to right. The running dimension is
/// checked against `dim_cap`; DimensionOverflow names the offending size.
CMatrix tensor(const std::vector<CMatrix>& ops, std::int64_t dim_cap);

/// Kronecker product of column vectors, same order convention as tensor().
CVector tensor_vec(const std::vector<CVector>& vecs, std::int64_t dim_cap);

/// Traces out all factors except `keep` from an operator on a tensor
/// product space with factor dimensions `dims` (index 0 = leftmost/most
/// significant factor, matching tensor()).
CMatrix partial_trace(const CMatrix& op, const std::vector<int>& dims,
                      int keep);

/// |v><v| for a vector normalized within tol.vec_norm; throws NotNormalized.
CMatrix projector(const CVector& v, const Tolerances& tol = {});

/// max |m(i,j)| over all entries; 0 for empty.
double max_abs(const CMatrix& m);

}  // namespace qpath
