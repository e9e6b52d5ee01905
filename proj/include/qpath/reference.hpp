#pragma once

#include "qpath/protocol.hpp"

namespace qpath {
/// Plain serial implementations, written independently of the kernels in
/// the main modules: odometer loops, literal operator algebra, no tables,
/// no OpenMP. They exist to cross-check the optimized paths in tests and
/// to serve as the baseline in the benchmark target. Numeric results agree
/// with the kernels to rounding (integer tallies exactly).
namespace ref {

/// Direct evaluation of the eigendecomposition sum, one amplitude at a
/// time: sum_s P_s prod_n |<x_n| U_n |s>|^2.
PathDistribution joint_distribution(const Scenario& sc);

/// Tallies of the shot protocol on SplitMix64::stream(seed, shot),
/// sequential over shots. Index s * path_count + rank for accepted draws.
struct SampleTallies {
  std::vector<std::int64_t> stage1;
  std::vector<std::int64_t> accepted_by_s;
  std::vector<std::int64_t> counts_by_s;
};
SampleTallies sample_protocol(const Scenario& sc, std::int64_t shots,
                              std::uint64_t seed);

/// Completeness defect max |sum_x J_x - I| with every J_x built from the
/// literal triple products E_i^dag M_x E_i.
double povm_completeness_defect(const Scenario& sc);

}  // namespace ref
}  // namespace qpath
