#include "qpath/protocol.hpp"

#include <cmath>
#include <string>

#include "qpath/rng.hpp"

namespace qpath {

namespace {

/// m_n = U_n^dag |x_n basis>; the copy-n vector whose projector is
/// measured on copy n.
CVector measured_vector(const Scenario& sc, std::size_t n, int x) {
  return sc.times[n].unitary.op.adjoint() * sc.times[n].basis.col(x);
}

}  // namespace

CMatrix build_measurement_operator(const Scenario& sc, const Path& p) {
  if (p.outcomes.size() != sc.num_times())
    raise(Errc::wrong_time_count,
          "path has " + std::to_string(p.outcomes.size()) +
              " outcomes, scenario has " + std::to_string(sc.num_times()));
  std::vector<CMatrix> factors;
  factors.reserve(sc.num_times());
  for (std::size_t n = 0; n < sc.num_times(); ++n) {
    int x = p.outcomes[n];
    if (x < 0 || x >= sc.dim)
      raise(Errc::index_out_of_range, "outcome " + std::to_string(x));
    CVector m = measured_vector(sc, n, x);
    factors.push_back(m * m.adjoint());
  }
  return tensor(factors, sc.tol.dim_cap);
}

PostselectTerm postselect_expectation(const Scenario& sc, const Path& p,
                                      int s) {
  if (p.outcomes.size() != sc.num_times())
    raise(Errc::wrong_time_count, "path length mismatch");
  if (s < 0 || s >= sc.dim)
    raise(Errc::index_out_of_range, "eigenstate index " + std::to_string(s));

  const double pop = sc.decomposition.populations[s];
  const CVector v = sc.decomposition.eigenvectors.col(s);
  // Pi_s rho applied per copy: <m_n| Pi_s rho |m_n> = <m_n|v> <v|rho|m_n>.
  const CVector rho_rows_v = sc.rho.op * v;  // rho |v> = pop * |v> up to fp

  PostselectTerm out;
  double raw = 1.0;        // prod_n <m_n| Pi_s rho |m_n>, real by structure
  double cancelled = pop;  // P_s prod_n p(x_n|s)
  for (std::size_t n = 0; n < sc.num_times(); ++n) {
    CVector m = measured_vector(sc, n, p.outcomes[n]);
    complexd mv = m.dot(v);              // <m_n|v>
    complexd vm = rho_rows_v.dot(m);     // <rho v|m> = <v|rho|m>
    raw *= (mv * vm).real();
    cancelled *= std::norm(mv);
  }

  if (pop < sc.tol.pop_cutoff) {
    out.value = cancelled;
    out.zero_population = true;
    return out;
  }
  // one population factor cancels per copy beyond the first
  double denom = std::pow(pop, static_cast<double>(sc.num_times() - 1));
  out.value = raw / denom;
  return out;
}

PathDistribution postselect_distribution(const Scenario& sc, Exec exec) {
  const std::int64_t npaths = path_count(sc);

  PathDistribution dist;
  dist.fingerprint = sc.fingerprint;
  dist.dim = sc.dim;
  dist.num_times = sc.num_times();
  dist.method = Method::postselect;
  dist.probs.assign(npaths, 0.0);

  // Precompute per (time, outcome, eigenstate): the two copy factors.
  // factor(n, x, s) = <m|v><v|rho|m> and cond(n, x, s) = |<m|v>|^2.
  const int d = sc.dim;
  const std::size_t nt = sc.num_times();
  std::vector<double> factor(nt * d * d), cond(nt * d * d);
  for (std::size_t n = 0; n < nt; ++n) {
    // amp(s, x) = <v_s | U_n^dag |x>; rho_amp(s, x) = <v_s| rho U_n^dag |x>
    CMatrix back = sc.times[n].unitary.op.adjoint() * sc.times[n].basis;
    CMatrix amp = sc.decomposition.eigenvectors.adjoint() * back;
    CMatrix rho_amp =
        sc.decomposition.eigenvectors.adjoint() * (sc.rho.op * back);
    for (int x = 0; x < d; ++x)
      for (int s = 0; s < d; ++s) {
        complexd mv = amp(s, x);  // <m|v> = conj(<v|m>) ... see below
        // amp(s,x) = <v_s|m>, so <m|v> = conj(amp); <v|rho|m> = rho_amp.
        factor[(n * d + x) * d + s] = (std::conj(mv) * rho_amp(s, x)).real();
        cond[(n * d + x) * d + s] = std::norm(mv);
      }
  }

  const auto& pops = sc.decomposition.populations;
  const double cutoff = sc.tol.pop_cutoff;
  auto one_path = [&](std::int64_t rank) {
    KahanSum acc;
    for (int s = 0; s < d; ++s) {
      double pop = pops[s];
      double raw = 1.0, cancelled = pop;
      std::int64_t r = rank;
      for (std::size_t n = nt; n-- > 0;) {
        int x = static_cast<int>(r % d);
        r /= d;
        raw *= factor[(n * d + x) * d + s];
        cancelled *= cond[(n * d + x) * d + s];
      }
      if (pop < cutoff)
        acc.add(cancelled);
      else
        acc.add(raw / std::pow(pop, static_cast<double>(nt - 1)));
    }
    return acc.value();
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

namespace {

struct Cumulative {
  int dim = 0;
  std::vector<double> rows;  // per row of `dim` entries, running sums

  int draw(std::size_t row, double u) const {
    const double* c = rows.data() + row * dim;
    for (int k = 0; k < dim - 1; ++k)
      if (u < c[k]) return k;
    return dim - 1;
  }
};

Cumulative cumulative_rows(const std::vector<double>& flat, int dim) {
  Cumulative c;
  c.dim = dim;
  c.rows.resize(flat.size());
  const std::size_t nrows = flat.size() / dim;
  for (std::size_t r = 0; r < nrows; ++r) {
    double run = 0.0;
    for (int k = 0; k < dim; ++k) {
      run += std::max(flat[r * dim + k], 0.0);  // clamp -1e-15 dust
      c.rows[r * dim + k] = run;
    }
  }
  return c;
}

struct ShotTallies {
  std::vector<std::int64_t> stage1;    // [s]
  std::vector<std::int64_t> by_s;      // [s * npaths + rank]
  std::vector<std::int64_t> accepted;  // [s]

  ShotTallies(int ns, std::int64_t npaths)
      : stage1(ns, 0), by_s(static_cast<std::size_t>(ns) * npaths, 0),
        accepted(ns, 0) {}

  void merge(const ShotTallies& o) {
    for (std::size_t i = 0; i < stage1.size(); ++i) stage1[i] += o.stage1[i];
    for (std::size_t i = 0; i < by_s.size(); ++i) by_s[i] += o.by_s[i];
    for (std::size_t i = 0; i < accepted.size(); ++i)
      accepted[i] += o.accepted[i];
  }
};

/// One protocol round on the stream for (seed, shot). Copy labels first,
/// then outcomes only when all labels agree.
void run_shot(std::uint64_t seed, std::int64_t shot, const Cumulative& pop,
              const Cumulative& cond, int dim, std::size_t nt,
              std::int64_t npaths, ShotTallies& t) {
  SplitMix64 g = SplitMix64::stream(seed, static_cast<std::uint64_t>(shot));
  const std::size_t copies = nt;  // one copy per time point
  int first = -1;
  bool agree = true;
  for (std::size_t c = 0; c < copies; ++c) {
    int s = pop.draw(0, g.next_double());
    t.stage1[s]++;
    if (c == 0)
      first = s;
    else if (s != first)
      agree = false;
  }
  if (!agree) return;
  t.accepted[first]++;
  std::int64_t rank = 0;
  for (std::size_t n = 0; n < nt; ++n) {
    int x = cond.draw(n * dim + first, g.next_double());
    rank = rank * dim + x;
  }
  t.by_s[static_cast<std::size_t>(first) * npaths + rank]++;
}

}  // namespace

ShotReport sample_protocol(const Scenario& sc, std::int64_t shots,
                           std::uint64_t seed, Exec exec) {
  if (shots < 1) raise(Errc::validation_error, "shots must be >= 1");
  const std::int64_t npaths = path_count(sc);
  const int d = sc.dim;
  if (npaths > sc.tol.enumeration_cap / d)
    raise(Errc::enumeration_too_large,
          "per-eigenstate tally table exceeds enumeration cap");
  const std::size_t nt = sc.num_times();

  CondTables tables = CondTables::build(sc);
  Cumulative pop = cumulative_rows(tables.populations, d);
  Cumulative cond = cumulative_rows(tables.p, d);

  ShotTallies tallies(d, npaths);
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      ShotTallies local(d, npaths);
#pragma omp for schedule(static)
      for (std::int64_t k = 0; k < shots; ++k)
        run_shot(seed, k, pop, cond, d, nt, npaths, local);
      // Integer merges commute exactly, so merge order cannot change the
      // report.
#pragma omp critical
      tallies.merge(local);
    }
  } else
#else
  (void)exec;
#endif
  {
    for (std::int64_t k = 0; k < shots; ++k)
      run_shot(seed, k, pop, cond, d, nt, npaths, tallies);
  }

  ShotReport rep;
  rep.fingerprint = sc.fingerprint;
  rep.seed = seed;
  rep.shots_requested = shots;
  rep.stage1_counts = tallies.stage1;
  rep.path_counts.assign(npaths, 0);
  rep.estimates.assign(npaths, 0.0);
  rep.std_errors.assign(npaths, 0.0);

  std::int64_t accepted_total = 0;
  for (int s = 0; s < d; ++s) accepted_total += tallies.accepted[s];
  rep.accepted = accepted_total;
  rep.acceptance_rate = static_cast<double>(accepted_total) /
                        static_cast<double>(shots);

  const double stage1_total = static_cast<double>(shots) *
                              static_cast<double>(nt);
  // Estimate relies on every eigenstate with weight having accepted shots;
  // strata with stage-1 mass but no acceptances mark the report.
  for (int s = 0; s < d; ++s)
    if (tallies.stage1[s] > 0 && tallies.accepted[s] == 0)
      rep.no_accepted = true;

  for (std::int64_t r = 0; r < npaths; ++r) {
    double est = 0.0, var = 0.0;
    for (int s = 0; s < d; ++s) {
      std::int64_t c = tallies.by_s[static_cast<std::size_t>(s) * npaths + r];
      rep.path_counts[r] += c;
      double phat = static_cast<double>(tallies.stage1[s]) / stage1_total;
      if (tallies.accepted[s] == 0) continue;
      double ns = static_cast<double>(tallies.accepted[s]);
      double qhat = static_cast<double>(c) / ns;
      est += phat * qhat;
      var += phat * phat * qhat * (1.0 - qhat) / ns +
             qhat * qhat * phat * (1.0 - phat) / stage1_total;
    }
    rep.estimates[r] = est;
    rep.std_errors[r] = std::sqrt(var);
  }
  return rep;
}

std::vector<ConvergenceRow> convergence_table(
    const Scenario& sc, const std::vector<std::int64_t>& ladder,
    std::uint64_t seed) {
  PathDistribution exact = joint_distribution(sc);
  std::vector<ConvergenceRow> rows;
  rows.reserve(ladder.size());
  for (std::int64_t shots : ladder) {
    ShotReport rep = sample_protocol(sc, shots, seed);
    ConvergenceRow row;
    row.shots = shots;
    row.acceptance_rate = rep.acceptance_rate;
    for (std::size_t r = 0; r < rep.estimates.size(); ++r)
      row.max_abs_error =
          std::max(row.max_abs_error,
                   std::abs(rep.estimates[r] - exact.probs[r]));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qpath
