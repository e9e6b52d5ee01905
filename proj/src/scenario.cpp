#include "qpath/scenario.hpp"

#include <string>

namespace qpath {

const char* method_name(Method m) {
  switch (m) {
    case Method::eq_sum: return "eq1";
    case Method::postselect: return "postselect";
    case Method::broadcast: return "broadcast";
    case Method::povm: return "povm";
    case Method::sampled: return "sampled";
    case Method::tpm: return "tpm";
  }
  return "unknown";
}

Scenario Scenario::make(std::vector<int> dims, const CMatrix& rho,
                        std::vector<std::string> labels,
                        std::vector<CMatrix> unitaries,
                        std::vector<CMatrix> bases, Tolerances tol) {
  Scenario sc;
  sc.tol = tol;

  if (dims.empty()) raise(Errc::validation_error, "no subsystem dimensions");
  std::int64_t total = 1;
  for (int d : dims) {
    if (d < 1)
      raise(Errc::validation_error, "subsystem dimension must be >= 1");
    if (total > tol.dim_cap / d)
      raise(Errc::dimension_overflow,
            "total dimension exceeds cap " + std::to_string(tol.dim_cap));
    total *= d;
  }
  sc.dims = std::move(dims);
  sc.dim = static_cast<int>(total);
  if (rho.rows() != total)
    raise(Errc::validation_error,
          "state is " + std::to_string(rho.rows()) + "-dimensional but " +
              "subsystem dimensions multiply to " + std::to_string(total));

  if (labels.size() != unitaries.size() || labels.size() != bases.size())
    raise(Errc::validation_error,
          "labels, unitaries and bases must have equal length");
  if (labels.empty())
    raise(Errc::wrong_time_count, "at least one time point is required");

  sc.rho = validate_density(rho, tol);
  sc.decomposition = spectral_decompose(sc.rho, tol);

  sc.times.reserve(labels.size());
  for (std::size_t n = 0; n < labels.size(); ++n) {
    if (unitaries[n].rows() != total || unitaries[n].cols() != total)
      raise(Errc::validation_error,
            "unitary at time " + std::to_string(n) + " has wrong shape");
    if (bases[n].rows() != total || bases[n].cols() != total)
      raise(Errc::bad_basis,
            "basis at time " + std::to_string(n) + " has wrong shape");
    TimePoint tp;
    tp.label = std::move(labels[n]);
    tp.unitary = validate_unitary(unitaries[n], tol);
    CMatrix g = bases[n].adjoint() * bases[n];
    g.diagonal().array() -= 1.0;
    if (max_abs(g) > tol.orth)
      raise(Errc::bad_basis, "basis at time " + std::to_string(n) +
                                 " is not orthonormal, defect " +
                                 std::to_string(max_abs(g)));
    tp.basis = std::move(bases[n]);
    sc.times.push_back(std::move(tp));
  }

  Fnv1a h;
  h.u64(sc.dims.size());
  for (int d : sc.dims) h.u64(static_cast<std::uint64_t>(d));
  for (Eigen::Index j = 0; j < sc.rho.op.cols(); ++j)
    for (Eigen::Index i = 0; i < sc.rho.op.rows(); ++i) {
      h.f64(sc.rho.op(i, j).real());
      h.f64(sc.rho.op(i, j).imag());
    }
  h.u64(sc.times.size());
  for (const TimePoint& tp : sc.times) {
    h.str(tp.label);
    for (Eigen::Index j = 0; j < total; ++j)
      for (Eigen::Index i = 0; i < total; ++i) {
        h.f64(tp.unitary.op(i, j).real());
        h.f64(tp.unitary.op(i, j).imag());
        h.f64(tp.basis(i, j).real());
        h.f64(tp.basis(i, j).imag());
      }
  }
  sc.fingerprint = h.value();
  return sc;
}

std::int64_t path_count(const Scenario& sc) {
  std::int64_t n = 1;
  for (std::size_t k = 0; k < sc.num_times(); ++k) {
    if (n > sc.tol.enumeration_cap / sc.dim)
      raise(Errc::enumeration_too_large,
            "path count dim^" + std::to_string(sc.num_times()) +
                " exceeds cap " + std::to_string(sc.tol.enumeration_cap));
    n *= sc.dim;
  }
  return n;
}

std::int64_t path_rank(const Path& p, int dim) {
  std::int64_t r = 0;
  for (int x : p.outcomes) {
    if (x < 0 || x >= dim)
      raise(Errc::index_out_of_range,
            "outcome " + std::to_string(x) + " outside 0.." +
                std::to_string(dim - 1));
    r = r * dim + x;
  }
  return r;
}

Path path_from_rank(std::int64_t rank, int dim, std::size_t num_times) {
  Path p;
  p.outcomes.assign(num_times, 0);
  for (std::size_t n = num_times; n-- > 0;) {
    p.outcomes[n] = static_cast<int>(rank % dim);
    rank /= dim;
  }
  if (rank != 0)
    raise(Errc::index_out_of_range, "rank too large for path space");
  return p;
}

}  // namespace qpath
