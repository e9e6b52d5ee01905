#include "qpath/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qpath {

namespace {

void write_header(std::ostream& os, const HeaderLines& header) {
  for (const auto& [key, value] : header)
    os << "# " << key << ": " << value << "\n";
}

/// Probabilities: negative dust becomes zero at presentation time only.
std::string format_prob(double v) {
  if (v < 0.0 && v > -1e-12) return "0";
  return format_double(v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  // %.17g always round-trips; try shorter forms first for readability.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_path(const Path& p) {
  std::string s;
  for (std::size_t i = 0; i < p.outcomes.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(p.outcomes[i]);
  }
  return s;
}

void write_distribution_csv(std::ostream& os, const HeaderLines& header,
                            const PathDistribution& dist) {
  write_header(os, header);
  os << "path,probability\n";
  for (std::size_t r = 0; r < dist.probs.size(); ++r) {
    Path p = path_from_rank(static_cast<std::int64_t>(r), dist.dim,
                            dist.num_times);
    os << format_path(p) << "," << format_prob(dist.probs[r]) << "\n";
  }
}

void write_compare_csv(std::ostream& os, const HeaderLines& header,
                       const std::vector<PathDistribution>& dists) {
  write_header(os, header);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i)
    for (std::size_t j = i + 1; j < dists.size(); ++j)
      for (std::size_t r = 0; r < dists[i].probs.size(); ++r)
        max_dev = std::max(max_dev, std::abs(dists[i].probs[r] -
                                             dists[j].probs[r]));
  os << "# max_pairwise_deviation: " << format_double(max_dev) << "\n";
  os << "path";
  for (const PathDistribution& d : dists) os << "," << method_name(d.method);
  os << "\n";
  if (dists.empty()) return;
  for (std::size_t r = 0; r < dists[0].probs.size(); ++r) {
    Path p = path_from_rank(static_cast<std::int64_t>(r), dists[0].dim,
                            dists[0].num_times);
    os << format_path(p);
    for (const PathDistribution& d : dists)
      os << "," << format_prob(d.probs[r]);
    os << "\n";
  }
}

void write_shot_csv(std::ostream& os, const HeaderLines& header,
                    const ShotReport& rep, const PathDistribution& exact) {
  write_header(os, header);
  os << "# shots: " << rep.shots_requested << "\n";
  os << "# accepted: " << rep.accepted << "\n";
  os << "# acceptance_rate: " << format_double(rep.acceptance_rate) << "\n";
  if (rep.no_accepted)
    os << "# warning: some eigenstate stratum accepted no shots\n";
  os << "path,count,estimate,std_error,exact\n";
  for (std::size_t r = 0; r < rep.estimates.size(); ++r) {
    Path p = path_from_rank(static_cast<std::int64_t>(r), exact.dim,
                            exact.num_times);
    os << format_path(p) << "," << rep.path_counts[r] << ","
       << format_prob(rep.estimates[r]) << ","
       << format_double(rep.std_errors[r]) << ","
       << format_prob(exact.probs[r]) << "\n";
  }
}

void write_convergence_csv(std::ostream& os, const HeaderLines& header,
                           const std::vector<ConvergenceRow>& rows) {
  write_header(os, header);
  os << "shots,max_abs_error,acceptance_rate\n";
  for (const ConvergenceRow& row : rows)
    os << row.shots << "," << format_double(row.max_abs_error) << ","
       << format_double(row.acceptance_rate) << "\n";
}

void write_figure_csv(std::ostream& os, const HeaderLines& header,
                      const std::string& x_name,
                      const std::vector<FigureRow>& rows) {
  write_header(os, header);
  os << x_name << ",a,engine,tpm,analytic,state_ok\n";
  for (const FigureRow& row : rows)
    os << format_double(row.x) << "," << format_double(row.a) << ","
       << format_double(row.engine) << "," << format_double(row.tpm) << ","
       << format_double(row.analytic) << "," << (row.state_ok ? 1 : 0)
       << "\n";
}

void write_work_csv(std::ostream& os, const HeaderLines& header,
                    const WorkDistribution& wd) {
  write_header(os, header);
  os << "# mean_work: " << format_double(wd.mean) << "\n";
  os << "work,probability\n";
  for (const WorkPoint& pt : wd.points)
    os << format_double(pt.w) << "," << format_prob(pt.probability) << "\n";
}

}  // namespace qpath
