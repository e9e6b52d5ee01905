#pragma once

#include <optional>
#include <string>

#include "qpath/scenario.hpp"

namespace qpath {

/// Command-line overrides applied on top of the file's options block.
/// `tol` replaces the five validation tolerances (hermiticity, trace,
/// positivity, unitarity, orthonormality); `dim_cap` replaces the
/// dimension cap.
struct FileOverrides {
  std::optional<double> tol;
  std::optional<std::int64_t> dim_cap;
};

/// Parses a scenario description from JSON text. Layout:
///
///   {
///     "version": 1,
///     "dims": [2, 2],                    // optional with "model"
///     "rho": {"matrix": [[[re, im], ...], ...]}
///         or {"model": "coherent_qubit" | "qubit_pair",
///             "params": {"beta": 1.0, ...}},
///     "times": [                         // optional with "model"
///       {"label": "t0",
///        "unitary": "identity" | "partial_swap"
///                  | {"name": "adiabatic_phase", "phi": 0.5}
///                  | {"matrix": [[[re, im], ...], ...]},
///        "basis": "computational" | "sigma_z_product"
///                | {"vectors": [[[re, im], ...], ...]}},
///       ...
///     ],
///     "options": {"tol_herm": ..., "tol_trace": ..., "tol_psd": ...,
///                 "tol_unitary": ..., "tol_orth": ...,
///                 "degeneracy_tol": ..., "pop_cutoff": ...,
///                 "bin_tol": ..., "dim_cap": ..., "enumeration_cap": ...,
///                 "incremental_unitaries": false}
///   }
///
/// Complex numbers are [re, im] pairs; "vectors" lists basis vectors
/// (rows of the array become basis columns). With "model", dims and times
/// come from the model factory; a "times" array still overrides the
/// factory's time points. The first time's unitary defaults to identity.
/// Unitaries are cumulative (initial time to time n); with
/// "incremental_unitaries": true each entry is the step from the previous
/// time and the steps are composed. "sigma_z_product" is the computational
/// basis restricted to all-qubit subsystems.
///
/// Malformed JSON raises ParseError naming the line; semantically invalid
/// content raises ParseError naming the JSON path; validation failures
/// propagate from Scenario::make.
Scenario parse_scenario(const std::string& text,
                        const std::string& source_name,
                        const FileOverrides& ov = {});

/// parse_scenario over the contents of `path`; ParseError if unreadable.
Scenario load_scenario_file(const std::string& path,
                            const FileOverrides& ov = {});

}  // namespace qpath
