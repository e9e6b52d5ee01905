#pragma once

#include <cmath>
#include <vector>

#include "qpath/rng.hpp"
#include "qpath/scenario.hpp"

namespace qtest {

using namespace qpath;

/// Test-data generator on top of the library RNG so fixtures are seeded
/// and reproducible without touching <random> (whose streams vary across
/// standard library implementations).
struct Rng {
  SplitMix64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}

  double uniform() { return g.next_double(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {  // 0..n-1
    return static_cast<int>(g.next() % static_cast<std::uint64_t>(n));
  }

  double normal() {
    double u1 = (static_cast<double>(g.next() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  complexd cnormal() { return complexd(normal(), normal()); }
};

inline CMatrix random_gaussian(Rng& rng, int d) {
  CMatrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.cnormal();
  return g;
}

/// G G^dag / Tr, full rank almost surely.
inline CMatrix random_density(Rng& rng, int d) {
  CMatrix g = random_gaussian(rng, d);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

/// Mixture with the maximally mixed state; keeps every eigenvalue at
/// least floor/d, handy when sampling tests need healthy acceptance.
inline CMatrix random_density_floored(Rng& rng, int d, double floor) {
  CMatrix rho = random_density(rng, d);
  return (1.0 - floor) * rho +
         floor / d * CMatrix::Identity(d, d);
}

/// Q factor of a Gaussian matrix: Haar-like unitary.
inline CMatrix random_unitary(Rng& rng, int d) {
  Eigen::HouseholderQR<CMatrix> qr(random_gaussian(rng, d));
  return qr.householderQ() * CMatrix::Identity(d, d);
}

/// Generic scenario: random full-rank state, random unitaries and bases.
inline Scenario random_scenario(Rng& rng, int d, int num_times,
                                Tolerances tol = {}) {
  std::vector<std::string> labels;
  std::vector<CMatrix> unitaries, bases;
  for (int n = 0; n < num_times; ++n) {
    labels.push_back("t" + std::to_string(n));
    unitaries.push_back(n == 0 ? CMatrix::Identity(d, d)
                               : random_unitary(rng, d));
    bases.push_back(random_unitary(rng, d));
  }
  return Scenario::make({d}, random_density(rng, d), std::move(labels),
                        std::move(unitaries), std::move(bases), tol);
}

/// Scenario whose state is diagonal in the time-0 measured basis with
/// well-separated eigenvalues: the classical case where the two-point
/// baseline must coincide with the path distribution. Time 0 keeps the
/// identity propagator so diagonality holds in the measured frame.
inline Scenario random_classical_scenario(Rng& rng, int d) {
  CMatrix b0 = random_unitary(rng, d);
  std::vector<double> lam(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    lam[i] = rng.uniform(0.0, 0.05) + 0.1 * (d - i);  // gaps >= ~0.05
    sum += lam[i];
  }
  CMatrix rho = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    rho += (lam[i] / sum) * (b0.col(i) * b0.col(i).adjoint());
  return Scenario::make(
      {d}, rho, {"t0", "t1"},
      {CMatrix::Identity(d, d), random_unitary(rng, d)},
      {b0, random_unitary(rng, d)});
}

inline double max_dist_diff(const PathDistribution& a,
                            const PathDistribution& b) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.probs.size(); ++r)
    m = std::max(m, std::abs(a.probs[r] - b.probs[r]));
  return m;
}

}  // namespace qtest
