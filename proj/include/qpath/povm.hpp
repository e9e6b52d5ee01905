#pragma once

#include "qpath/bayesnet.hpp"

namespace qpath {

/// Classically correlated copy state sum_s P_s |s..s><s..s| on `copies`
/// factors, built from the scenario's spectral decomposition. Validated
/// as a density matrix before returning.
DensityMatrix broadcast_state(const Scenario& sc, int copies);

/// Kraus operators E_i = sum_r |r..r><r, i_1..i_{copies-1}| mapping
/// `copies` independent copies of rho to the broadcast state. There are
/// dim^(copies-1) of them, indexed collectively by (i_1..i_{copies-1}).
std::vector<CMatrix> broadcast_kraus(const Scenario& sc, int copies);

/// Applies the broadcast channel sum_i E_i X E_i^dag. Dense; test and
/// diagnostic use.
CMatrix apply_broadcast_channel(const std::vector<CMatrix>& kraus,
                                const CMatrix& x);

/// One heralding POVM element J_x = sum_i E_i^dag M_x E_i on the
/// independent-copy space, with its minimum eigenvalue. M_x is the rank-1
/// projector onto the tensor product of the measured vectors, so each
/// E_i^dag M_x E_i is the rank-1 outer product of w_i = E_i^dag m; the
/// sum over i is accumulated directly from those vectors. The literal
/// triple-product form is kept as the test oracle.
struct PovmElement {
  Path path;
  CMatrix op;
  double min_eigenvalue = 0.0;
};
PovmElement povm_element(const Scenario& sc, const Path& p);

/// Completeness and positivity over every outcome tuple:
/// max |sum_x J_x - I| and min over x of the minimum eigenvalue of J_x.
/// The sum is accumulated serially over fixed-size blocks of path ranks,
/// so the defect is bitwise reproducible for any thread count.
struct PovmCheck {
  double completeness_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool passed = false;
};
PovmCheck verify_povm(const Scenario& sc, Exec exec = Exec::parallel);

/// Joint distribution as <m|rho_broadcast|m> per outcome tuple.
PathDistribution distribution_via_broadcast(const Scenario& sc,
                                            Exec exec = Exec::parallel);

/// Joint distribution as Tr[J_x rho^(x copies)] per outcome tuple.
PathDistribution distribution_via_povm(const Scenario& sc,
                                       Exec exec = Exec::parallel);

/// Work value and probability for two-time scenarios with energies
/// assigned to the two measurement bases: w = e1[x1] - e0[x0]. Values
/// closer than bin_tol are merged (probability-weighted mean keeps the
/// first moment exact); distinct support points end up separated by more
/// than bin_tol.
struct WorkPoint {
  double w = 0.0;
  double probability = 0.0;
};
struct WorkDistribution {
  std::vector<WorkPoint> points;  // ascending in w
  double mean = 0.0;              // sum w * p before any merging
};
WorkDistribution work_values(const Scenario& sc,
                             const std::vector<double>& e0,
                             const std::vector<double>& e1,
                             double bin_tol);

/// <w> against the energy change Tr[H_1 rho(t_1)] - Tr[H_0 rho(t_0)],
/// H_n = sum_x e_n[x] |x_n><x_n| and rho(t_n) = U_n rho U_n^dag.
struct FirstLawCheck {
  double mean_work = 0.0;
  double energy_change = 0.0;
  double defect = 0.0;
};
FirstLawCheck first_law_check(const Scenario& sc,
                              const std::vector<double>& e0,
                              const std::vector<double>& e1);

/// <exp(-beta w)> against Z_1/Z_0 for a state thermal in the time-0 basis
/// at inverse temperature beta (checked; throws NotThermalInput).
struct JarzynskiCheck {
  double lhs = 0.0;  // <exp(-beta w)>
  double rhs = 0.0;  // Z_1 / Z_0
  double rel_defect = 0.0;
};
JarzynskiCheck jarzynski_check(const Scenario& sc,
                               const std::vector<double>& e0,
                               const std::vector<double>& e1, double beta);

}  // namespace qpath
