#include "qpath/povm.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace qpath {

namespace {

std::int64_t checked_power(std::int64_t base, int exp, std::int64_t cap,
                           const char* what) {
  std::int64_t n = 1;
  for (int k = 0; k < exp; ++k) {
    if (base <= 0 || n > cap / base)
      raise(Errc::dimension_overflow, std::string(what) + " dimension " +
                                          std::to_string(base) + "^" +
                                          std::to_string(exp) +
                                          " exceeds cap " +
                                          std::to_string(cap));
    n *= base;
  }
  return n;
}

/// Tensor power of one column: |v>^(x copies).
CVector vector_power(const CVector& v, int copies, std::int64_t cap) {
  std::vector<CVector> factors(copies, v);
  return tensor_vec(factors, cap);
}

/// Measured copy vector for time n, outcome x: U_n^dag |x_n basis>.
CVector measured_vector(const Scenario& sc, std::size_t n, int x) {
  return sc.times[n].unitary.op.adjoint() * sc.times[n].basis.col(x);
}

/// Tensor of measured vectors along a path, the |m> of the quadratic forms.
CVector measured_product(const Scenario& sc, const Path& p) {
  std::vector<CVector> factors;
  factors.reserve(p.outcomes.size());
  for (std::size_t n = 0; n < p.outcomes.size(); ++n)
    factors.push_back(measured_vector(sc, n, p.outcomes[n]));
  return tensor_vec(factors, sc.tol.dim_cap);
}

}  // namespace

DensityMatrix broadcast_state(const Scenario& sc, int copies) {
  if (copies < 1) raise(Errc::validation_error, "copies must be >= 1");
  const std::int64_t big =
      checked_power(sc.dim, copies, sc.tol.dim_cap, "broadcast");
  CMatrix rho = CMatrix::Zero(big, big);
  for (int s = 0; s < sc.dim; ++s) {
    CVector rep = vector_power(sc.decomposition.eigenvectors.col(s), copies,
                               sc.tol.dim_cap);
    rho.noalias() +=
        sc.decomposition.populations[s] * (rep * rep.adjoint());
  }
  return validate_density(rho, sc.tol);
}

std::vector<CMatrix> broadcast_kraus(const Scenario& sc, int copies) {
  if (copies < 1) raise(Errc::validation_error, "copies must be >= 1");
  const std::int64_t big =
      checked_power(sc.dim, copies, sc.tol.dim_cap, "broadcast");
  const std::int64_t nkraus = big / sc.dim;  // dim^(copies-1)
  const int d = sc.dim;

  // Cache |r>^(x copies) for the output side.
  std::vector<CVector> rep(d);
  for (int r = 0; r < d; ++r)
    rep[r] = vector_power(sc.decomposition.eigenvectors.col(r), copies,
                          sc.tol.dim_cap);

  std::vector<CMatrix> kraus;
  kraus.reserve(nkraus);
  std::vector<CVector> row_factors(copies);
  for (std::int64_t idx = 0; idx < nkraus; ++idx) {
    // idx encodes (i_1 .. i_{copies-1}), most significant first.
    std::int64_t q = idx;
    for (int c = copies - 1; c >= 1; --c) {
      row_factors[c] = sc.decomposition.eigenvectors.col(
          static_cast<int>(q % d));
      q /= d;
    }
    CMatrix e = CMatrix::Zero(big, big);
    for (int r = 0; r < d; ++r) {
      row_factors[0] = sc.decomposition.eigenvectors.col(r);
      CVector row = tensor_vec(row_factors, sc.tol.dim_cap);
      e.noalias() += rep[r] * row.adjoint();
    }
    kraus.push_back(std::move(e));
  }
  return kraus;
}

CMatrix apply_broadcast_channel(const std::vector<CMatrix>& kraus,
                                const CMatrix& x) {
  if (kraus.empty()) raise(Errc::validation_error, "no Kraus operators");
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (const CMatrix& e : kraus) out.noalias() += e * x * e.adjoint();
  return out;
}

namespace {

/// J = sum_i (E_i^dag m)(E_i^dag m)^dag; exact rank-1 expansion of
/// sum_i E_i^dag (m m^dag) E_i.
CMatrix povm_element_matrix(const std::vector<CMatrix>& kraus,
                            const CVector& m) {
  CMatrix j = CMatrix::Zero(m.size(), m.size());
  for (const CMatrix& e : kraus) {
    CVector w = e.adjoint() * m;
    j.noalias() += w * w.adjoint();
  }
  return j;
}

double min_eig(const CMatrix& herm) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    raise(Errc::decomposition_failed, "eigenvalue solve did not converge");
  return es.eigenvalues().minCoeff();
}

}  // namespace

PovmElement povm_element(const Scenario& sc, const Path& p) {
  if (p.outcomes.size() != sc.num_times())
    raise(Errc::wrong_time_count, "path length mismatch");
  std::vector<CMatrix> kraus =
      broadcast_kraus(sc, static_cast<int>(sc.num_times()));
  PovmElement out;
  out.path = p;
  out.op = povm_element_matrix(kraus, measured_product(sc, p));
  out.min_eigenvalue = min_eig(out.op);
  return out;
}

PovmCheck verify_povm(const Scenario& sc, Exec exec) {
  const std::int64_t npaths = path_count(sc);
  const int copies = static_cast<int>(sc.num_times());
  const std::int64_t big =
      checked_power(sc.dim, copies, sc.tol.dim_cap, "broadcast");
  std::vector<CMatrix> kraus = broadcast_kraus(sc, copies);

  // Fixed-size blocks: elements are built in parallel into block slots,
  // then folded into the running sum in rank order. The reduction order
  // never depends on the thread count.
  constexpr std::int64_t kBlock = 32;
  CMatrix sum = CMatrix::Zero(big, big);
  double lowest = 0.0;
  bool first = true;
  std::vector<CMatrix> slot(static_cast<std::size_t>(
      std::min(kBlock, npaths)));
  std::vector<double> slot_min(slot.size(), 0.0);

  for (std::int64_t base = 0; base < npaths; base += kBlock) {
    const std::int64_t count = std::min(kBlock, npaths - base);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
    for (std::int64_t k = 0; k < count; ++k) {
      Path p = path_from_rank(base + k, sc.dim, sc.num_times());
      CMatrix j = povm_element_matrix(kraus, measured_product(sc, p));
      slot_min[k] = min_eig(j);
      slot[k] = std::move(j);
    }
    for (std::int64_t k = 0; k < count; ++k) {
      sum += slot[k];
      if (first || slot_min[k] < lowest) lowest = slot_min[k];
      first = false;
    }
  }
#ifndef _OPENMP
  (void)exec;
#endif

  sum.diagonal().array() -= 1.0;
  PovmCheck out;
  out.completeness_defect = max_abs(sum);
  out.min_eigenvalue = lowest;
  out.passed = out.completeness_defect <= sc.tol.unitary &&
               out.min_eigenvalue >= -sc.tol.psd;
  return out;
}

PathDistribution distribution_via_broadcast(const Scenario& sc, Exec exec) {
  const std::int64_t npaths = path_count(sc);
  DensityMatrix bro =
      broadcast_state(sc, static_cast<int>(sc.num_times()));

  PathDistribution dist;
  dist.fingerprint = sc.fingerprint;
  dist.dim = sc.dim;
  dist.num_times = sc.num_times();
  dist.method = Method::broadcast;
  dist.probs.assign(npaths, 0.0);

  auto one_path = [&](std::int64_t rank) {
    Path p = path_from_rank(rank, sc.dim, sc.num_times());
    CVector m = measured_product(sc, p);
    return (m.adjoint() * bro.op * m)(0).real();
  };

#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < npaths; ++r) dist.probs[r] = one_path(r);
  } else
#else
  (void)exec;
#endif
  {
    for (std::int64_t r = 0; r < npaths; ++r) dist.probs[r] = one_path(r);
  }

  KahanSum total;
  for (double v : dist.probs) total.add(v);
  dist.total = total.value();
  return dist;
}

PathDistribution distribution_via_povm(const Scenario& sc, Exec exec) {
  const std::int64_t npaths = path_count(sc);
  const int copies = static_cast<int>(sc.num_times());
  std::vector<CMatrix> kraus = broadcast_kraus(sc, copies);
  std::vector<CMatrix> rho_factors(copies, sc.rho.op);
  CMatrix rho_ind = tensor(rho_factors, sc.tol.dim_cap);

  PathDistribution dist;
  dist.fingerprint = sc.fingerprint;
  dist.dim = sc.dim;
  dist.num_times = sc.num_times();
  dist.method = Method::povm;
  dist.probs.assign(npaths, 0.0);

  auto one_path = [&](std::int64_t rank) {
    Path p = path_from_rank(rank, sc.dim, sc.num_times());
    CMatrix j = povm_element_matrix(kraus, measured_product(sc, p));
    // Tr[J rho] for Hermitian J: sum of conj(J) .* rho over all entries.
    return j.conjugate().cwiseProduct(rho_ind).sum().real();
  };

#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < npaths; ++r) dist.probs[r] = one_path(r);
  } else
#else
  (void)exec;
#endif
  {
    for (std::int64_t r = 0; r < npaths; ++r) dist.probs[r] = one_path(r);
  }

  KahanSum total;
  for (double v : dist.probs) total.add(v);
  dist.total = total.value();
  return dist;
}

WorkDistribution work_values(const Scenario& sc,
                             const std::vector<double>& e0,
                             const std::vector<double>& e1,
                             double bin_tol) {
  if (sc.num_times() != 2)
    raise(Errc::wrong_time_count, "work statistics need exactly 2 times");
  if (static_cast<int>(e0.size()) != sc.dim ||
      static_cast<int>(e1.size()) != sc.dim)
    raise(Errc::bad_energy_length,
          "energy lists must have one entry per basis vector (" +
              std::to_string(sc.dim) + ")");

  PathDistribution joint = joint_distribution(sc);

  // All (x0, x1) transition values, ascending, then chain-clustered:
  // a gap above bin_tol starts a new support point. The representative is
  // the probability-weighted mean, which keeps sum w*p exact.
  std::vector<std::pair<double, double>> raw;  // (w, prob)
  raw.reserve(joint.probs.size());
  KahanSum mean;
  for (int x0 = 0; x0 < sc.dim; ++x0)
    for (int x1 = 0; x1 < sc.dim; ++x1) {
      double p = joint.probs[static_cast<std::size_t>(x0) * sc.dim + x1];
      double w = e1[x1] - e0[x0];
      raw.emplace_back(w, p);
      mean.add(w * p);
    }
  std::sort(raw.begin(), raw.end());

  WorkDistribution out;
  out.mean = mean.value();
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i + 1;
    while (j < raw.size() && raw[j].first - raw[j - 1].first <= bin_tol) ++j;
    KahanSum mass, moment;
    for (std::size_t k = i; k < j; ++k) {
      mass.add(raw[k].second);
      moment.add(raw[k].first * raw[k].second);
    }
    WorkPoint pt;
    pt.probability = mass.value();
    if (j == i + 1 || pt.probability <= 0.0)
      pt.w = raw[i].first;  // nothing merged: keep the exact value
    else
      pt.w = moment.value() / mass.value();
    out.points.push_back(pt);
    i = j;
  }
  return out;
}

FirstLawCheck first_law_check(const Scenario& sc,
                              const std::vector<double>& e0,
                              const std::vector<double>& e1) {
  WorkDistribution wd = work_values(sc, e0, e1, sc.tol.bin_tol);

  auto energy_at = [&](std::size_t n, const std::vector<double>& e) {
    const CMatrix& u = sc.times[n].unitary.op;
    CMatrix evolved = u * sc.rho.op * u.adjoint();
    KahanSum acc;
    for (int x = 0; x < sc.dim; ++x) {
      const auto b = sc.times[n].basis.col(x);
      acc.add(e[x] * (b.adjoint() * evolved * b)(0).real());
    }
    return acc.value();
  };

  FirstLawCheck out;
  out.mean_work = wd.mean;
  out.energy_change = energy_at(1, e1) - energy_at(0, e0);
  out.defect = std::abs(out.mean_work - out.energy_change);
  return out;
}

JarzynskiCheck jarzynski_check(const Scenario& sc,
                               const std::vector<double>& e0,
                               const std::vector<double>& e1, double beta) {
  if (sc.num_times() != 2)
    raise(Errc::wrong_time_count, "work statistics need exactly 2 times");
  if (static_cast<int>(e0.size()) != sc.dim ||
      static_cast<int>(e1.size()) != sc.dim)
    raise(Errc::bad_energy_length, "energy lists must match the dimension");

  // The identity needs rho thermal for e0 in the time-0 basis: check
  // <x|rho|x> = exp(-beta e0[x]) / Z_0 and vanishing off-diagonals there.
  KahanSum z0sum, z1sum;
  for (int x = 0; x < sc.dim; ++x) z0sum.add(std::exp(-beta * e0[x]));
  for (int x = 0; x < sc.dim; ++x) z1sum.add(std::exp(-beta * e1[x]));
  const double z0 = z0sum.value(), z1 = z1sum.value();

  const CMatrix& b0 = sc.times[0].basis;
  CMatrix in_basis = b0.adjoint() * sc.rho.op * b0;
  for (int x = 0; x < sc.dim; ++x)
    for (int y = 0; y < sc.dim; ++y) {
      double want = x == y ? std::exp(-beta * e0[x]) / z0 : 0.0;
      if (std::abs(in_basis(x, y) - want) > 1e-9)
        raise(Errc::not_thermal_input,
              "state is not thermal at beta = " + std::to_string(beta) +
                  " for the time-0 energies (entry " + std::to_string(x) +
                  "," + std::to_string(y) + ")");
    }

  // Average over raw transition values, not merged bins, so bin placement
  // cannot perturb the exponential average.
  PathDistribution joint = joint_distribution(sc);
  KahanSum lhs;
  for (int x0 = 0; x0 < sc.dim; ++x0)
    for (int x1 = 0; x1 < sc.dim; ++x1)
      lhs.add(std::exp(-beta * (e1[x1] - e0[x0])) *
              joint.probs[static_cast<std::size_t>(x0) * sc.dim + x1]);

  JarzynskiCheck out;
  out.lhs = lhs.value();
  out.rhs = z1 / z0;
  out.rel_defect = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
  return out;
}

}  // namespace qpath
