#pragma once

#include "qpath/scenario.hpp"

namespace qpath {

/// Flattened conditional probability tables p(x at time n | eigenstate s)
/// = |<x_n| U_n |s>|^2, plus the populations. Row (n, s) sums to 1 because
/// U_n maps the unit vector |s> to a unit vector expanded in an orthonormal
/// basis; joint_distribution relies on that.
struct CondTables {
  int dim = 0;
  int num_eigen = 0;
  std::size_t num_times = 0;
  std::vector<double> populations;  // from the scenario decomposition
  std::vector<double> p;            // [(n * num_eigen + s) * dim + x]

  double at(std::size_t n, int s, int x) const {
    return p[(n * num_eigen + s) * dim + x];
  }

  static CondTables build(const Scenario& sc);
};

/// p(x at time n | s) for one entry; convenience over CondTables.
double conditional_probability(const Scenario& sc, std::size_t n, int s,
                               int x);

/// Probability of one outcome tuple: sum_s P_s prod_n p(x_n | s),
/// compensated summation over s.
double path_probability(const Scenario& sc, const Path& p);

/// Dense joint distribution over all dim^num_times outcome tuples via the
/// eigendecomposition sum. Throws EnumerationTooLarge past the cap.
PathDistribution joint_distribution(const Scenario& sc,
                                    Exec exec = Exec::parallel);

/// Marginal of `dist` onto the time points in `keep` (ascending subset of
/// 0..num_times-1); sums out the rest. Throws EmptyKeepSet / WrongTimeCount.
PathDistribution marginal(const PathDistribution& dist,
                          const std::vector<std::size_t>& keep);

/// Two-point measure-evolve-measure baseline: project onto the time-0
/// basis, propagate the collapsed state, measure in the time-1 basis.
/// Requires exactly two time points. Coincides with the two-time joint
/// exactly when rho is diagonal in the time-0 basis.
PathDistribution tpm_distribution(const Scenario& sc);

}  // namespace qpath
