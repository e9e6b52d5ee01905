#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qpath/models.hpp"
#include "qpath/povm.hpp"
#include "qpath/protocol.hpp"

namespace qpath {

/// Key/value lines emitted before the column row, each prefixed with '#'.
/// Writers add nothing of their own beyond these and the data: no
/// timestamps, no environment, so identical inputs give identical bytes.
using HeaderLines = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip decimal form of a double ("%.17g" trimmed), "nan"
/// for NaN. Negative probability dust above -1e-12 is written as 0 by the
/// distribution writers; anything below that bound is written raw so an
/// invariant violation stays visible.
std::string format_double(double v);

/// Outcome tuple as digits separated by '-': "0-1-2".
std::string format_path(const Path& p);

void write_distribution_csv(std::ostream& os, const HeaderLines& header,
                            const PathDistribution& dist);

/// Several routes side by side plus their max pairwise deviation.
void write_compare_csv(std::ostream& os, const HeaderLines& header,
                       const std::vector<PathDistribution>& dists);

void write_shot_csv(std::ostream& os, const HeaderLines& header,
                    const ShotReport& rep, const PathDistribution& exact);

void write_convergence_csv(std::ostream& os, const HeaderLines& header,
                           const std::vector<ConvergenceRow>& rows);

void write_figure_csv(std::ostream& os, const HeaderLines& header,
                      const std::string& x_name,
                      const std::vector<FigureRow>& rows);

void write_work_csv(std::ostream& os, const HeaderLines& header,
                    const WorkDistribution& wd);

}  // namespace qpath
