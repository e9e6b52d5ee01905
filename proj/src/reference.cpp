#include "qpath/reference.hpp"

#include <algorithm>

#include "qpath/povm.hpp"
#include "qpath/rng.hpp"

namespace qpath {
namespace ref {

PathDistribution joint_distribution(const Scenario& sc) {
  const std::int64_t npaths = path_count(sc);
  PathDistribution dist;
  dist.fingerprint = sc.fingerprint;
  dist.dim = sc.dim;
  dist.num_times = sc.num_times();
  dist.method = Method::eq_sum;
  dist.probs.assign(npaths, 0.0);

  std::vector<int> x(sc.num_times(), 0);
  for (std::int64_t rank = 0; rank < npaths; ++rank) {
    double p = 0.0;
    for (int s = 0; s < sc.dim; ++s) {
      double term = sc.decomposition.populations[s];
      for (std::size_t n = 0; n < sc.num_times(); ++n) {
        CVector evolved =
            sc.times[n].unitary.op * sc.decomposition.eigenvectors.col(s);
        term *= std::norm(sc.times[n].basis.col(x[n]).dot(evolved));
      }
      p += term;
    }
    dist.probs[rank] = p;
    dist.total += p;
    // odometer, least significant digit last
    for (std::size_t n = sc.num_times(); n-- > 0;) {
      if (++x[n] < sc.dim) break;
      x[n] = 0;
    }
  }
  return dist;
}

SampleTallies sample_protocol(const Scenario& sc, std::int64_t shots,
                              std::uint64_t seed) {
  const std::int64_t npaths = path_count(sc);
  const int d = sc.dim;
  const std::size_t nt = sc.num_times();

  // Cumulative weights straight from first principles.
  std::vector<double> pop_cum(d);
  {
    double run = 0.0;
    for (int s = 0; s < d; ++s) {
      run += std::max(sc.decomposition.populations[s], 0.0);
      pop_cum[s] = run;
    }
  }
  auto draw = [](const std::vector<double>& cum, double u) {
    for (std::size_t k = 0; k + 1 < cum.size(); ++k)
      if (u < cum[k]) return static_cast<int>(k);
    return static_cast<int>(cum.size() - 1);
  };
  std::vector<std::vector<double>> cond_cum(nt * d, std::vector<double>(d));
  for (std::size_t n = 0; n < nt; ++n)
    for (int s = 0; s < d; ++s) {
      double run = 0.0;
      for (int xo = 0; xo < d; ++xo) {
        run += std::max(conditional_probability(sc, n, s, xo), 0.0);
        cond_cum[n * d + s][xo] = run;
      }
    }

  SampleTallies t;
  t.stage1.assign(d, 0);
  t.accepted_by_s.assign(d, 0);
  t.counts_by_s.assign(static_cast<std::size_t>(d) * npaths, 0);
  for (std::int64_t k = 0; k < shots; ++k) {
    SplitMix64 g = SplitMix64::stream(seed, static_cast<std::uint64_t>(k));
    std::vector<int> labels(nt);
    for (std::size_t c = 0; c < nt; ++c) {
      labels[c] = draw(pop_cum, g.next_double());
      t.stage1[labels[c]]++;
    }
    bool agree = true;
    for (std::size_t c = 1; c < nt; ++c)
      if (labels[c] != labels[0]) agree = false;
    if (!agree) continue;
    t.accepted_by_s[labels[0]]++;
    std::int64_t rank = 0;
    for (std::size_t n = 0; n < nt; ++n)
      rank = rank * d + draw(cond_cum[n * d + labels[0]], g.next_double());
    t.counts_by_s[static_cast<std::size_t>(labels[0]) * npaths + rank]++;
  }
  return t;
}

double povm_completeness_defect(const Scenario& sc) {
  const std::int64_t npaths = path_count(sc);
  std::vector<CMatrix> kraus =
      broadcast_kraus(sc, static_cast<int>(sc.num_times()));
  const std::int64_t big = kraus.front().rows();
  CMatrix sum = CMatrix::Zero(big, big);
  for (std::int64_t rank = 0; rank < npaths; ++rank) {
    CMatrix m = build_measurement_operator(
        sc, path_from_rank(rank, sc.dim, sc.num_times()));
    for (const CMatrix& e : kraus) sum += e.adjoint() * m * e;
  }
  sum.diagonal().array() -= 1.0;
  return max_abs(sum);
}

}  // namespace ref
}  // namespace qpath
