#include "qpath/bayesnet.hpp"

#include <string>

namespace qpath {

CondTables CondTables::build(const Scenario& sc) {
  CondTables t;
  t.dim = sc.dim;
  t.num_eigen = sc.dim;
  t.num_times = sc.num_times();
  t.populations = sc.decomposition.populations;
  t.p.assign(t.num_times * t.num_eigen * t.dim, 0.0);
  for (std::size_t n = 0; n < t.num_times; ++n) {
    // amp(x, s) = <x_n| U_n |s>; one GEMM per time point.
    CMatrix amp = sc.times[n].basis.adjoint() *
                  (sc.times[n].unitary.op * sc.decomposition.eigenvectors);
    for (int s = 0; s < t.num_eigen; ++s)
      for (int x = 0; x < t.dim; ++x)
        t.p[(n * t.num_eigen + s) * t.dim + x] = std::norm(amp(x, s));
  }
  return t;
}

double conditional_probability(const Scenario& sc, std::size_t n, int s,
                               int x) {
  if (n >= sc.num_times())
    raise(Errc::index_out_of_range, "time index " + std::to_string(n));
  if (s < 0 || s >= sc.dim || x < 0 || x >= sc.dim)
    raise(Errc::index_out_of_range, "eigenstate or outcome index");
  CVector m = sc.times[n].unitary.op * sc.decomposition.eigenvectors.col(s);
  return std::norm(sc.times[n].basis.col(x).dot(m));
}

namespace {

/// One path probability from the tables; rank decoded most significant
/// digit first, compensated sum over eigenstates.
double eq_sum_single(const CondTables& t, std::int64_t rank) {
  KahanSum acc;
  for (int s = 0; s < t.num_eigen; ++s) {
    double term = t.populations[s];
    std::int64_t r = rank;
    // digits as factors; order over n does not matter for the product
    for (std::size_t n = t.num_times; n-- > 0;) {
      int x = static_cast<int>(r % t.dim);
      r /= t.dim;
      term *= t.at(n, s, x);
    }
    acc.add(term);
  }
  return acc.value();
}

}  // namespace

double path_probability(const Scenario& sc, const Path& p) {
  if (p.outcomes.size() != sc.num_times())
    raise(Errc::wrong_time_count,
          "path has " + std::to_string(p.outcomes.size()) + " outcomes, " +
              "scenario has " + std::to_string(sc.num_times()) + " times");
  CondTables t = CondTables::build(sc);
  return eq_sum_single(t, path_rank(p, sc.dim));
}

PathDistribution joint_distribution(const Scenario& sc, Exec exec) {
  const std::int64_t npaths = path_count(sc);
  CondTables t = CondTables::build(sc);

  PathDistribution dist;
  dist.fingerprint = sc.fingerprint;
  dist.dim = sc.dim;
  dist.num_times = sc.num_times();
  dist.method = Method::eq_sum;
  dist.probs.assign(npaths, 0.0);

#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < npaths; ++r)
      dist.probs[r] = eq_sum_single(t, r);
  } else
#else
  (void)exec;
#endif
  {
    for (std::int64_t r = 0; r < npaths; ++r)
      dist.probs[r] = eq_sum_single(t, r);
  }

  KahanSum total;
  for (double v : dist.probs) total.add(v);
  dist.total = total.value();
  return dist;
}

PathDistribution marginal(const PathDistribution& dist,
                          const std::vector<std::size_t>& keep) {
  if (keep.empty()) raise(Errc::empty_keep_set, "keep set is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= dist.num_times)
      raise(Errc::index_out_of_range,
            "keep index " + std::to_string(keep[i]) + " outside 0.." +
                std::to_string(dist.num_times - 1));
    if (i > 0 && keep[i] <= keep[i - 1])
      raise(Errc::validation_error, "keep set must be strictly ascending");
  }

  std::int64_t out_n = 1;
  for (std::size_t i = 0; i < keep.size(); ++i) out_n *= dist.dim;

  PathDistribution out;
  out.fingerprint = dist.fingerprint;
  out.dim = dist.dim;
  out.num_times = keep.size();
  out.method = dist.method;
  out.probs.assign(out_n, 0.0);

  // Accumulate full-rank entries into their projected rank. Kahan per
  // output slot keeps marginals consistent with direct evaluation.
  std::vector<KahanSum> acc(out_n);
  const std::int64_t npaths = static_cast<std::int64_t>(dist.probs.size());
  std::vector<int> digits(dist.num_times);
  for (std::int64_t r = 0; r < npaths; ++r) {
    std::int64_t q = r;
    for (std::size_t n = dist.num_times; n-- > 0;) {
      digits[n] = static_cast<int>(q % dist.dim);
      q /= dist.dim;
    }
    std::int64_t pr = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
      pr = pr * dist.dim + digits[keep[i]];
    acc[pr].add(dist.probs[r]);
  }
  KahanSum total;
  for (std::int64_t i = 0; i < out_n; ++i) {
    out.probs[i] = acc[i].value();
    total.add(out.probs[i]);
  }
  out.total = total.value();
  return out;
}

PathDistribution tpm_distribution(const Scenario& sc) {
  if (sc.num_times() != 2)
    raise(Errc::wrong_time_count,
          "two-point baseline needs exactly 2 time points, scenario has " +
              std::to_string(sc.num_times()));

  const int d = sc.dim;
  PathDistribution dist;
  dist.fingerprint = sc.fingerprint;
  dist.dim = d;
  dist.num_times = 2;
  dist.method = Method::tpm;
  dist.probs.assign(static_cast<std::size_t>(d) * d, 0.0);

  // First-measurement statistics on the time-0 evolved state, then
  // propagate each collapsed basis state to time 1.
  const CMatrix& u0 = sc.times[0].unitary.op;
  const CMatrix& u1 = sc.times[1].unitary.op;
  CMatrix rho0 = u0 * sc.rho.op * u0.adjoint();
  // amp(x1, x0) = <x1 basis| U_1 U_0^dag |x0 basis>
  CMatrix amp = sc.times[1].basis.adjoint() *
                (u1 * (u0.adjoint() * sc.times[0].basis));
  KahanSum total;
  for (int x0 = 0; x0 < d; ++x0) {
    double first =
        (sc.times[0].basis.col(x0).adjoint() * rho0 * sc.times[0].basis.col(x0))(0)
            .real();
    for (int x1 = 0; x1 < d; ++x1) {
      double v = first * std::norm(amp(x1, x0));
      dist.probs[static_cast<std::size_t>(x0) * d + x1] = v;
      total.add(v);
    }
  }
  dist.total = total.value();
  return dist;
}

}  // namespace qpath
