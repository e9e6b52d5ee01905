#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpath/core.hpp"

namespace qpath {

/// One measurement time: the propagator U_t from the initial time and the
/// orthonormal outcome basis (columns) read out at that time.
struct TimePoint {
  std::string label;
  Unitary unitary;
  CMatrix basis;
};

/// Extra knowledge carried by scenarios built from a named model factory,
/// used by the CLI to derive default energies and inverse temperature.
struct ModelInfo {
  std::string name;
  double beta = 0.0;
  std::vector<double> energies_initial;
  std::vector<double> energies_final;
};

/// Immutable, validated description of one computation: subsystem layout,
/// initial state with its cached spectral decomposition, and the list of
/// measurement times. Build through make(); all members are set once.
struct Scenario {
  std::vector<int> dims;          // subsystem factors, product = dim
  int dim = 0;                    // total Hilbert space dimension
  DensityMatrix rho;
  SpectralDecomposition decomposition;
  std::vector<TimePoint> times;   // at least one entry, time 0 first
  Tolerances tol;
  std::uint64_t fingerprint = 0;  // FNV-1a over dims, rho, times
  std::optional<ModelInfo> model;

  std::size_t num_times() const { return times.size(); }

  /// Validates everything: dims against the matrix size and cap, rho as a
  /// density matrix, each unitary, each basis (orthonormal columns), then
  /// caches the spectral decomposition and fingerprint.
  static Scenario make(std::vector<int> dims, const CMatrix& rho,
                       std::vector<std::string> labels,
                       std::vector<CMatrix> unitaries,
                       std::vector<CMatrix> bases, Tolerances tol = {});
};

/// Number of length-(num_times) outcome tuples, i.e. dim^num_times; throws
/// EnumerationTooLarge past tol.enumeration_cap.
std::int64_t path_count(const Scenario& sc);

/// Outcome tuple, one basis index per time point, x[0] for time 0.
struct Path {
  std::vector<int> outcomes;
};

/// Lexicographic rank of a path (x[0] most significant digit, base dim).
std::int64_t path_rank(const Path& p, int dim);

/// Inverse of path_rank.
Path path_from_rank(std::int64_t rank, int dim, std::size_t num_times);

/// Computation routes; `sampled` estimates, the others are deterministic.
enum class Method { eq_sum, postselect, broadcast, povm, sampled, tpm };

const char* method_name(Method m);

/// Dense joint distribution over all outcome tuples, indexed by path rank.
struct PathDistribution {
  std::uint64_t fingerprint = 0;
  int dim = 0;
  std::size_t num_times = 0;
  Method method = Method::eq_sum;
  std::vector<double> probs;  // size dim^num_times
  double total = 0.0;         // compensated sum of probs

  double at(const Path& p) const { return probs.at(path_rank(p, dim)); }
};

/// Serial or OpenMP execution of the enumeration kernels. Results are
/// bitwise identical either way; parallel only changes wall time.
enum class Exec { serial, parallel };

}  // namespace qpath
