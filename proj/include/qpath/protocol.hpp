#pragma once

#include <cstdint>

#include "qpath/bayesnet.hpp"

namespace qpath {

/// Measurement operator for one outcome tuple on the (num_times)-copy
/// space: tensor product over n of U_n^dag |x_n><x_n| U_n. Dense; copy
/// space dimension is checked against tol.dim_cap.
CMatrix build_measurement_operator(const Scenario& sc, const Path& p);

/// Expectation value assigned to path x by postselecting copies on
/// eigenstate s. One copy is prepared per time point; the raw expectation
/// factorizes per copy into <m_n| Pi_s rho |m_n> with m_n = U_n^dag |x_n>,
/// so it is evaluated without materializing the copy space.
///
/// Normalization convention: the raw value carries one factor Tr[Pi_s rho]
/// = P_s per copy; dividing by P_s^(num_times - 1) leaves exactly
/// P_s prod_n p(x_n | s), the term the direct sum assigns to s. Dividing
/// by a single power regardless of the copy count would leave a spurious
/// P_s^(num_times - 2) and break route equivalence for every num_times > 2;
/// this implementation always uses the per-copy normalization. When P_s
/// falls below tol.pop_cutoff the algebraically cancelled form
/// P_s prod p is returned directly and the zero-population flag is set.
struct PostselectTerm {
  double value = 0.0;
  bool zero_population = false;  // P_s < pop_cutoff, cancelled form used
};
PostselectTerm postselect_expectation(const Scenario& sc, const Path& p,
                                      int s);

/// Full distribution assembled from postselect_expectation summed over
/// eigenstates; equals the direct sum up to rounding.
PathDistribution postselect_distribution(const Scenario& sc,
                                         Exec exec = Exec::parallel);

/// Outcome of a finite-shot simulation of the protocol. Estimates are
/// stratified by eigenstate: every path estimate is
/// sum_s Phat_s * (accepted counts for s on that path / accepted for s),
/// where Phat_s pools all single-copy preparation draws. std_errors
/// propagate both the per-stratum binomial variance and the Phat_s
/// uncertainty (delta method).
struct ShotReport {
  std::uint64_t fingerprint = 0;
  std::uint64_t seed = 0;
  std::int64_t shots_requested = 0;
  std::int64_t accepted = 0;        // shots where all copies matched
  double acceptance_rate = 0.0;
  std::vector<std::int64_t> stage1_counts;   // per eigenstate, pooled draws
  std::vector<std::int64_t> path_counts;     // accepted, by path rank
  std::vector<double> estimates;             // by path rank
  std::vector<double> std_errors;            // by path rank
  bool no_accepted = false;         // some stratum never accepted a shot
};

/// Simulates `shots` protocol rounds. Each shot prepares one copy per
/// time point, draws their eigenstate labels, accepts only if all agree,
/// then draws one outcome per copy from the matching conditional row.
/// Shot k always uses SplitMix64::stream(seed, k), so reports are
/// identical for serial and parallel execution and for any thread count.
ShotReport sample_protocol(const Scenario& sc, std::int64_t shots,
                           std::uint64_t seed, Exec exec = Exec::parallel);

/// Max absolute estimate error against the exact joint, plus acceptance,
/// for each shot budget in `ladder`; used for convergence reporting.
struct ConvergenceRow {
  std::int64_t shots = 0;
  double max_abs_error = 0.0;
  double acceptance_rate = 0.0;
};
std::vector<ConvergenceRow> convergence_table(
    const Scenario& sc, const std::vector<std::int64_t>& ladder,
    std::uint64_t seed);

}  // namespace qpath
