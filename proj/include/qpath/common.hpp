#pragma once

#include <complex>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

namespace qpath {

using complexd = std::complex<double>;

/// Error categories raised by the engine. Names mirror the failure they
/// report; the free function errc_name() gives the canonical spelling used
/// in messages and exit-code mapping.
enum class Errc {
  not_hermitian,
  trace_not_one,
  not_positive,
  decomposition_failed,
  not_unitary,
  not_normalized,
  bad_basis,
  dimension_overflow,
  bad_factorization,
  index_out_of_range,
  enumeration_too_large,
  wrong_time_count,
  empty_keep_set,
  bad_energy_length,
  not_thermal_input,
  state_not_positive,
  degenerate_denominator,
  parse_error,
  validation_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& detail) {
  throw Error(code, detail);
}

/// Tolerances and caps shared across the engine. Defaults suit
/// double-precision dense algebra at dim <= 4096; all overridable.
struct Tolerances {
  double herm = 1e-9;
  double trace = 1e-9;
  double psd = 1e-9;
  double unitary = 1e-9;
  double orth = 1e-9;
  double vec_norm = 1e-9;
  double recon = 1e-10;
  double degeneracy = 1e-9;
  double pop_cutoff = 1e-14;
  double bin_tol = 1e-9;
  std::int64_t dim_cap = 4096;
  std::int64_t enumeration_cap = 1'000'000;
};

/// Compensated (Kahan) accumulator. Sums of d^(N+1) small terms must meet
/// the 1e-9 normalization bound, so plain += is not enough.
struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

/// FNV-1a 64-bit over raw bytes; used for scenario fingerprints.
struct Fnv1a {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    u64(u);
  }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  std::uint64_t value() const { return h; }
};

}  // namespace qpath
