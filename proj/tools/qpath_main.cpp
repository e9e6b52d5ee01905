// qpath: path probabilities of quantum systems measured at several points
// in time, computed by provably equivalent routes plus a simulated
// postselection protocol. Subcommands: exact, sample, check, figure.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpath/bayesnet.hpp"
#include "qpath/models.hpp"
#include "qpath/povm.hpp"
#include "qpath/protocol.hpp"
#include "qpath/report_io.hpp"
#include "qpath/scenario_file.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using namespace qpath;

/// Stable exit-code contract: 2 file/parse problems, 3 validation
/// failures, 4 dimension or enumeration caps. 1 is reserved for failed
/// checks (aggregate) and unexpected errors.
int exit_code_for(Errc c) {
  switch (c) {
    case Errc::parse_error:
      return 2;
    case Errc::dimension_overflow:
    case Errc::enumeration_too_large:
      return 4;
    default:
      return 3;
  }
}

std::string hex_fingerprint(std::uint64_t fp) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fp));
  return buf;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

struct CommonFlags {
  std::optional<double> tol;
  std::optional<std::int64_t> cap;

  FileOverrides overrides() const {
    FileOverrides ov;
    ov.tol = tol;
    ov.dim_cap = cap;
    return ov;
  }
  void echo(HeaderLines& hdr) const {
    if (tol) hdr.emplace_back("tol_override", format_double(*tol));
    if (cap) hdr.emplace_back("cap_override", std::to_string(*cap));
  }
};

HeaderLines base_header(const std::string& command, const std::string& file,
                        const CommonFlags& common) {
  HeaderLines hdr{{"qpath_version", kVersion}, {"command", command}};
  if (!file.empty()) hdr.emplace_back("file", file);
  common.echo(hdr);
  return hdr;
}

/// "e00,e01,...;e10,e11,...": one semicolon-separated group per time
/// point, comma-separated energies inside each group.
std::vector<std::vector<double>> parse_energies(const std::string& text) {
  std::vector<std::vector<double>> groups;
  std::string group;
  std::istringstream all(text);
  while (std::getline(all, group, ';')) {
    groups.emplace_back();
    std::string tok;
    std::istringstream inner(group);
    while (std::getline(inner, tok, ',')) {
      const char* begin = tok.c_str();
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin || *end != '\0')
        raise(Errc::parse_error,
              "--energies: '" + tok + "' is not a number");
      groups.back().push_back(v);
    }
    if (groups.back().empty())
      raise(Errc::parse_error, "--energies: empty group");
  }
  if (groups.empty()) raise(Errc::parse_error, "--energies: empty list");
  return groups;
}

int run_exact(const std::string& file, const std::string& method,
              bool compare_all, const CommonFlags& common) {
  Scenario sc = load_scenario_file(file, common.overrides());
  HeaderLines hdr = base_header("exact", file, common);
  hdr.emplace_back("fingerprint", hex_fingerprint(sc.fingerprint));
  if (compare_all) {
    hdr.emplace_back("method", "compare-all");
    std::vector<PathDistribution> dists;
    dists.push_back(joint_distribution(sc));
    dists.push_back(postselect_distribution(sc));
    dists.push_back(distribution_via_broadcast(sc));
    dists.push_back(distribution_via_povm(sc));
    write_compare_csv(std::cout, hdr, dists);
    return 0;
  }
  hdr.emplace_back("method", method);
  PathDistribution dist;
  if (method == "eq1") {
    dist = joint_distribution(sc);
  } else if (method == "postselect") {
    dist = postselect_distribution(sc);
  } else if (method == "broadcast") {
    dist = distribution_via_broadcast(sc);
  } else {
    dist = distribution_via_povm(sc);
  }
  write_distribution_csv(std::cout, hdr, dist);
  return 0;
}

int run_sample(const std::string& file, std::int64_t shots,
               std::uint64_t seed, const CommonFlags& common) {
  Scenario sc = load_scenario_file(file, common.overrides());
  HeaderLines hdr = base_header("sample", file, common);
  hdr.emplace_back("fingerprint", hex_fingerprint(sc.fingerprint));
  hdr.emplace_back("seed", std::to_string(seed));
  ShotReport rep = sample_protocol(sc, shots, seed);
  PathDistribution exact = joint_distribution(sc);
  write_shot_csv(std::cout, hdr, rep, exact);
  return 0;
}

int run_check(const std::string& file, const std::string& energies_flag,
              std::optional<double> beta_flag, const CommonFlags& common) {
  Scenario sc = load_scenario_file(file, common.overrides());
  for (const auto& [key, value] : base_header("check", file, common))
    std::cout << "# " << key << ": " << value << "\n";
  std::cout << "# fingerprint: " << hex_fingerprint(sc.fingerprint) << "\n";

  bool all_pass = true;
  auto verdict = [&](const std::string& name, bool pass) {
    all_pass = all_pass && pass;
    std::cout << name << ": " << (pass ? "PASS" : "FAIL") << "\n";
  };

  PovmCheck pc = verify_povm(sc);
  std::cout << "povm_completeness_defect: "
            << format_double(pc.completeness_defect) << "\n";
  std::cout << "povm_min_eigenvalue: " << format_double(pc.min_eigenvalue)
            << "\n";
  verdict("povm", pc.passed);

  // Energies: explicit flag first, else whatever the model declares.
  std::vector<std::vector<double>> energies;
  if (!energies_flag.empty()) {
    energies = parse_energies(energies_flag);
  } else if (sc.model) {
    energies = {sc.model->energies_initial, sc.model->energies_final};
  }
  std::optional<double> beta = beta_flag;
  if (!beta && sc.model && !std::isnan(sc.model->beta))
    beta = sc.model->beta;

  if (energies.size() == 2 && sc.num_times() == 2) {
    FirstLawCheck fl = first_law_check(sc, energies[0], energies[1]);
    std::cout << "first_law_mean_work: " << format_double(fl.mean_work)
              << "\n";
    std::cout << "first_law_energy_change: "
              << format_double(fl.energy_change) << "\n";
    std::cout << "first_law_defect: " << format_double(fl.defect) << "\n";
    verdict("first_law", fl.defect <= 1e-9);

    if (beta) {
      try {
        JarzynskiCheck jz =
            jarzynski_check(sc, energies[0], energies[1], *beta);
        std::cout << "jarzynski_lhs: " << format_double(jz.lhs) << "\n";
        std::cout << "jarzynski_rhs: " << format_double(jz.rhs) << "\n";
        std::cout << "jarzynski_rel_defect: " << format_double(jz.rel_defect)
                  << "\n";
        verdict("jarzynski", jz.rel_defect <= 1e-9);
      } catch (const Error& e) {
        if (e.code() != Errc::not_thermal_input) throw;
        std::cout << "jarzynski: SKIPPED (" << e.what() << ")\n";
      }
    } else {
      std::cout << "jarzynski: SKIPPED (no inverse temperature given)\n";
    }
  } else if (energies.empty()) {
    std::cout << "first_law: SKIPPED (no energies given)\n";
    std::cout << "jarzynski: SKIPPED (no energies given)\n";
  } else {
    std::cout << "first_law: SKIPPED (needs exactly two time points and two "
                 "energy groups)\n";
    std::cout << "jarzynski: SKIPPED (needs exactly two time points and two "
                 "energy groups)\n";
  }

  std::cout << "overall: " << (all_pass ? "PASS" : "FAIL") << "\n";
  return all_pass ? 0 : 1;
}

int run_figure(const std::string& name, std::vector<double> a_list,
               std::optional<double> t_min, std::optional<double> t_max,
               int points, double g0, double t_a,
               const CommonFlags& common) {
  if (a_list.empty()) a_list = {0.0, 0.5, 1.0};
  const bool fig2 = name == "fig2";
  const double lo = t_min.value_or(fig2 ? 0.1 : 0.05);
  const double hi = t_max.value_or(fig2 ? 1000.0 : 10.0);
  std::vector<double> grid = log_grid(lo, hi, points);

  HeaderLines hdr = base_header("figure", "", common);
  hdr.emplace_back("name", name);
  hdr.emplace_back("a", join_doubles(a_list));
  hdr.emplace_back("t_min", format_double(lo));
  hdr.emplace_back("t_max", format_double(hi));
  hdr.emplace_back("points", std::to_string(points));
  if (fig2) {
    hdr.emplace_back("g0", format_double(g0));
    write_figure_csv(std::cout, hdr, "T", figure2_data(grid, a_list, g0));
  } else {
    hdr.emplace_back("t_a", format_double(t_a));
    write_figure_csv(std::cout, hdr, "T_B", figure3_data(grid, a_list, t_a));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-time path probabilities of quantum systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qpath ") + kVersion);

  CommonFlags common;
  app.add_option("--tol", common.tol,
                 "replace the five validation tolerances");
  app.add_option("--cap-override", common.cap,
                 "replace the Hilbert-space dimension cap");

  std::string exact_file, method = "eq1";
  bool compare_all = false;
  CLI::App* exact =
      app.add_subcommand("exact", "full path distribution from a file");
  exact->fallthrough();
  exact->add_option("file", exact_file, "scenario JSON file")->required();
  exact->add_option("--method", method, "computation route")
      ->check(CLI::IsMember({"eq1", "postselect", "broadcast", "povm"}));
  exact->add_flag("--compare-all", compare_all,
                  "emit all four routes plus their max deviation");

  std::string sample_file;
  std::int64_t shots = 10000;
  std::uint64_t seed = 0;
  CLI::App* sample = app.add_subcommand(
      "sample", "finite-shot simulation of the postselection protocol");
  sample->fallthrough();
  sample->add_option("file", sample_file, "scenario JSON file")->required();
  sample->add_option("--shots", shots, "protocol rounds")
      ->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "RNG seed (echoed in the header)");

  std::string check_file, energies_flag;
  std::optional<double> beta_flag;
  CLI::App* check = app.add_subcommand(
      "check", "measurement validity, first law, fluctuation theorem");
  check->fallthrough();
  check->add_option("file", check_file, "scenario JSON file")->required();
  check->add_option("--energies", energies_flag,
                    "per-time energies 'e00,e01,...;e10,e11,...'");
  check->add_option("--beta", beta_flag,
                    "inverse temperature for the fluctuation theorem");

  std::string figure_name;
  std::vector<double> a_list;
  std::optional<double> t_min, t_max;
  int points = 61;
  double g0 = 1.0, t_a = 0.4;
  CLI::App* figure = app.add_subcommand(
      "figure", "temperature sweeps for the two worked examples");
  figure->fallthrough();
  figure->add_option("name", figure_name, "which sweep")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3"}));
  figure->add_option("--a", a_list, "coherence parameters (repeatable)");
  figure->add_option("--t-min", t_min, "grid start");
  figure->add_option("--t-max", t_max, "grid end");
  figure->add_option("--points", points, "grid size")
      ->check(CLI::Range(2, 100000));
  figure->add_option("--g0", g0, "initial qubit gap (fig2)");
  figure->add_option("--t-a", t_a, "fixed temperature of qubit A (fig3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (exact->parsed())
      return run_exact(exact_file, method, compare_all, common);
    if (sample->parsed()) return run_sample(sample_file, shots, seed, common);
    if (check->parsed())
      return run_check(check_file, energies_flag, beta_flag, common);
    return run_figure(figure_name, a_list, t_min, t_max, points, g0, t_a,
                      common);
  } catch (const qpath::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
