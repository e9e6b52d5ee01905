#include "qpath/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qpath {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::trace_not_one: return "TraceNotOne";
    case Errc::not_positive: return "NotPositive";
    case Errc::decomposition_failed: return "DecompositionFailed";
    case Errc::not_unitary: return "NotUnitary";
    case Errc::not_normalized: return "NotNormalized";
    case Errc::bad_basis: return "BadBasis";
    case Errc::dimension_overflow: return "DimensionOverflow";
    case Errc::bad_factorization: return "BadFactorization";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::enumeration_too_large: return "EnumerationTooLarge";
    case Errc::wrong_time_count: return "WrongTimeCount";
    case Errc::empty_keep_set: return "EmptyKeepSet";
    case Errc::bad_energy_length: return "BadEnergyLength";
    case Errc::not_thermal_input: return "NotThermalInput";
    case Errc::state_not_positive: return "StateNotPositive";
    case Errc::degenerate_denominator: return "DegenerateDenominator";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
  }
  return "UnknownError";
}

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

DensityMatrix validate_density(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() < 1)
    raise(Errc::validation_error,
          "density matrix must be square and non-empty, got " +
              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));

  DensityMatrix out;
  out.hermiticity_defect = max_abs(m - m.adjoint());
  if (out.hermiticity_defect > tol.herm)
    raise(Errc::not_hermitian, "max |M - M^dag| = " +
                                   std::to_string(out.hermiticity_defect) +
                                   " exceeds " + std::to_string(tol.herm));

  out.op = 0.5 * (m + m.adjoint().eval());
  out.trace_defect = std::abs(out.op.trace().real() - 1.0) +
                     std::abs(out.op.trace().imag());
  if (out.trace_defect > tol.trace)
    raise(Errc::trace_not_one, "|Tr - 1| = " +
                                   std::to_string(out.trace_defect) +
                                   " exceeds " + std::to_string(tol.trace));

  Eigen::SelfAdjointEigenSolver<CMatrix> es(out.op,
                                            Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    raise(Errc::decomposition_failed, "eigenvalue solve did not converge");
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  if (out.min_eigenvalue < -tol.psd)
    raise(Errc::not_positive,
          "min eigenvalue " + std::to_string(out.min_eigenvalue) +
              " below -" + std::to_string(tol.psd));
  return out;
}

Unitary validate_unitary(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() < 1)
    raise(Errc::validation_error, "unitary must be square and non-empty");
  Unitary out;
  out.op = m;
  CMatrix g = m * m.adjoint();
  g.diagonal().array() -= 1.0;
  out.unitarity_defect = max_abs(g);
  if (out.unitarity_defect > tol.unitary)
    raise(Errc::not_unitary, "max |U U^dag - I| = " +
                                 std::to_string(out.unitarity_defect) +
                                 " exceeds " + std::to_string(tol.unitary));
  return out;
}

namespace {

/// Rotate v so its largest-|entry| (lowest index on ties) is real positive.
void fix_phase(Eigen::Ref<CVector> v) {
  Eigen::Index best = 0;
  double best_mag = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    double mag = std::abs(v[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  if (best_mag == 0.0) return;
  complexd phase = v[best] / best_mag;
  v *= std::conj(phase);
  v[best] = complexd(std::abs(v[best]), 0.0);  // kill residual imag dust
}

}  // namespace

SpectralDecomposition spectral_decompose(const DensityMatrix& rho,
                                         const Tolerances& tol) {
  const Eigen::Index d = rho.op.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.op);
  if (es.info() != Eigen::Success)
    raise(Errc::decomposition_failed, "eigenvalue solve did not converge");

  // Eigen returns eigenvalues ascending; flip to non-increasing.
  SpectralDecomposition out;
  out.populations.resize(d);
  out.eigenvectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    out.populations[k] = es.eigenvalues()[d - 1 - k];
    out.eigenvectors.col(k) = es.eigenvectors().col(d - 1 - k);
  }

  // Cluster by descending-order gaps, then canonicalize multi-vector
  // clusters so the basis does not depend on solver internals.
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index stop = start + 1;
    while (stop < d &&
           out.populations[stop - 1] - out.populations[stop] < tol.degeneracy)
      ++stop;
    const Eigen::Index m = stop - start;
    if (m > 1) {
      out.degeneracy_flag = true;
      CMatrix sub = out.eigenvectors.middleCols(start, m);
      CMatrix proj = sub * sub.adjoint();  // cluster subspace projector
      CMatrix repl(d, m);
      Eigen::Index got = 0;
      for (Eigen::Index i = 0; i < d && got < m; ++i) {
        CVector cand = proj.col(i);  // proj * e_i
        for (Eigen::Index k = 0; k < got; ++k)
          cand -= repl.col(k).dot(cand) * repl.col(k);
        double nrm = cand.norm();
        if (nrm > 1e-6) repl.col(got++) = cand / nrm;
      }
      if (got != m)
        raise(Errc::decomposition_failed,
              "canonical basis construction found " + std::to_string(got) +
                  " of " + std::to_string(m) + " cluster vectors");
      out.eigenvectors.middleCols(start, m) = repl;
    }
    start = stop;
  }

  for (Eigen::Index k = 0; k < d; ++k) fix_phase(out.eigenvectors.col(k));

  CMatrix g = out.eigenvectors.adjoint() * out.eigenvectors;
  g.diagonal().array() -= 1.0;
  if (max_abs(g) > tol.orth)
    raise(Errc::decomposition_failed,
          "eigenvector set lost orthonormality, defect " +
              std::to_string(max_abs(g)));
  return out;
}

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void check_dim(std::int64_t rows, std::int64_t next, std::int64_t cap) {
  // rows * next must stay within the cap; guard the multiply itself too.
  if (next <= 0 || rows > cap / next)
    raise(Errc::dimension_overflow,
          "tensor product dimension " + std::to_string(rows) + " x " +
              std::to_string(next) + " exceeds cap " + std::to_string(cap));
}

}  // namespace

CMatrix tensor(const std::vector<CMatrix>& ops, std::int64_t dim_cap) {
  if (ops.empty()) raise(Errc::validation_error, "tensor of no operators");
  for (const CMatrix& m : ops)
    if (m.rows() != m.cols() || m.rows() < 1)
      raise(Errc::validation_error, "tensor factors must be square");
  std::int64_t dim = ops[0].rows();
  if (dim > dim_cap)
    raise(Errc::dimension_overflow, "factor dimension " + std::to_string(dim) +
                                        " exceeds cap " +
                                        std::to_string(dim_cap));
  CMatrix out = ops[0];
  for (std::size_t k = 1; k < ops.size(); ++k) {
    check_dim(dim, ops[k].rows(), dim_cap);
    dim *= ops[k].rows();
    out = kron(out, ops[k]);
  }
  return out;
}

CVector tensor_vec(const std::vector<CVector>& vecs, std::int64_t dim_cap) {
  if (vecs.empty()) raise(Errc::validation_error, "tensor of no vectors");
  std::int64_t dim = vecs[0].size();
  if (dim < 1 || dim > dim_cap)
    raise(Errc::dimension_overflow, "factor dimension " + std::to_string(dim) +
                                        " exceeds cap " +
                                        std::to_string(dim_cap));
  CVector out = vecs[0];
  for (std::size_t k = 1; k < vecs.size(); ++k) {
    check_dim(dim, vecs[k].size(), dim_cap);
    dim *= vecs[k].size();
    CVector next(out.size() * vecs[k].size());
    for (Eigen::Index i = 0; i < out.size(); ++i)
      next.segment(i * vecs[k].size(), vecs[k].size()) = out[i] * vecs[k];
    out.swap(next);
  }
  return out;
}

CMatrix partial_trace(const CMatrix& op, const std::vector<int>& dims,
                      int keep) {
  if (dims.empty()) raise(Errc::empty_keep_set, "no factor dimensions given");
  if (keep < 0 || keep >= static_cast<int>(dims.size()))
    raise(Errc::index_out_of_range,
          "keep index " + std::to_string(keep) + " outside 0.." +
              std::to_string(dims.size() - 1));
  std::int64_t total = 1;
  for (int d : dims) {
    if (d < 1) raise(Errc::bad_factorization, "factor dimension < 1");
    total *= d;
  }
  if (op.rows() != op.cols() || op.rows() != total)
    raise(Errc::bad_factorization,
          "operator is " + std::to_string(op.rows()) + "x" +
              std::to_string(op.cols()) + " but factors multiply to " +
              std::to_string(total));

  const std::int64_t dk = dims[keep];
  std::int64_t left = 1, right = 1;
  for (int i = 0; i < keep; ++i) left *= dims[i];
  for (std::size_t i = keep + 1; i < dims.size(); ++i) right *= dims[i];

  CMatrix out = CMatrix::Zero(dk, dk);
  for (std::int64_t l = 0; l < left; ++l)
    for (std::int64_t r = 0; r < right; ++r)
      for (std::int64_t i = 0; i < dk; ++i)
        for (std::int64_t j = 0; j < dk; ++j)
          out(i, j) += op((l * dk + i) * right + r, (l * dk + j) * right + r);
  return out;
}

CMatrix projector(const CVector& v, const Tolerances& tol) {
  double nrm = v.norm();
  if (std::abs(nrm - 1.0) > tol.vec_norm)
    raise(Errc::not_normalized,
          "vector norm " + std::to_string(nrm) + " not 1 within " +
              std::to_string(tol.vec_norm));
  return v * v.adjoint();
}

}  // namespace qpath
