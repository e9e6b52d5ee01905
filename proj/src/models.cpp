#include "qpath/models.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qpath/bayesnet.hpp"

namespace qpath {

namespace {

const complexd kI(0.0, 1.0);

CMatrix thermal_qubit(double beta, double g) {
  double z = 2.0 * std::cosh(beta * g);
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = std::exp(-beta * g) / z;  // upper level, energy +g
  rho(1, 1) = std::exp(beta * g) / z;
  return rho;
}

/// Rethrow positivity failures under the model-specific name so callers
/// can tell bad parameters from bad hand-built input.
Scenario make_model_scenario(std::vector<int> dims, const CMatrix& rho,
                             std::vector<std::string> labels,
                             std::vector<CMatrix> unitaries,
                             std::vector<CMatrix> bases, Tolerances tol,
                             ModelInfo info) {
  try {
    Scenario sc = Scenario::make(std::move(dims), rho, std::move(labels),
                                 std::move(unitaries), std::move(bases), tol);
    sc.model = std::move(info);
    return sc;
  } catch (const Error& e) {
    if (e.code() == Errc::not_positive)
      raise(Errc::state_not_positive,
            "model parameters give a non-positive state (" +
                std::string(e.what()) + ")");
    throw;
  }
}

}  // namespace

Scenario coherent_qubit_scenario(const CoherentQubitParams& prm,
                                 Tolerances tol) {
  const double b = -std::tanh(prm.beta * prm.g0);
  const double alpha = prm.a * std::sqrt(std::max(1.0 - b * b, 0.0)) / 2.0;

  CMatrix rho = thermal_qubit(prm.beta, prm.g0);
  complexd off = alpha * std::exp(kI * prm.phase);
  rho(0, 1) += off;
  rho(1, 0) += std::conj(off);

  // Adiabatic propagator in the energy basis: pure relative phase. The
  // dynamical phase value never reaches any probability; g1 is used as a
  // stand-in so distinct drives fingerprint differently.
  CMatrix u1 = CMatrix::Zero(2, 2);
  u1(0, 0) = std::exp(-kI * prm.g1);
  u1(1, 1) = std::exp(kI * prm.g1);

  ModelInfo info;
  info.name = "coherent_qubit";
  info.beta = prm.beta;
  info.energies_initial = {prm.g0, -prm.g0};
  info.energies_final = {prm.g1, -prm.g1};

  return make_model_scenario(
      {2}, rho, {"t0", "t1"}, {CMatrix::Identity(2, 2), u1},
      {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)}, tol,
      std::move(info));
}

double analytic_qubit_pp(const CoherentQubitParams& prm) {
  const double b = -std::tanh(prm.beta * prm.g0);
  const double alpha = prm.a * std::sqrt(std::max(1.0 - b * b, 0.0)) / 2.0;
  const double denom = alpha * alpha + b * b;
  if (denom < 1e-14)
    raise(Errc::degenerate_denominator,
          "closed form undefined for alpha^2 + b^2 = " +
              std::to_string(denom));
  return (1.0 + b) / 2.0 - alpha * alpha / (4.0 * denom);
}

Scenario pair_scenario(const QubitPairParams& prm, Tolerances tol) {
  const double za = 2.0 * std::cosh(prm.beta_a);
  const double zb = 2.0 * std::cosh(prm.beta_b);

  CMatrix rho = CMatrix::Zero(4, 4);
  CMatrix ta = thermal_qubit(prm.beta_a, 1.0);
  CMatrix tb = thermal_qubit(prm.beta_b, 1.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      rho(i * 2 + j, i * 2 + j) = ta(i, i).real() * tb(j, j).real();
  // s+ x s- couples |+-> and |-+> (indices 1 and 2).
  complexd alpha = kI * prm.a / (za * zb);
  rho(1, 2) += alpha;
  rho(2, 1) += std::conj(alpha);

  // Partial swap (I + i S)/sqrt(2) on the product basis.
  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  CMatrix u1 = (CMatrix::Identity(4, 4) + kI * swap) / std::sqrt(2.0);

  ModelInfo info;
  info.name = "qubit_pair";
  info.beta = std::numeric_limits<double>::quiet_NaN();  // no single beta
  info.energies_initial = {2.0, 0.0, 0.0, -2.0};
  info.energies_final = {2.0, 0.0, 0.0, -2.0};

  return make_model_scenario(
      {2, 2}, rho, {"t0", "t1"}, {CMatrix::Identity(4, 4), u1},
      {CMatrix::Identity(4, 4), CMatrix::Identity(4, 4)}, tol,
      std::move(info));
}

double analytic_pair_pmmp(const QubitPairParams& prm) {
  const double za = 2.0 * std::cosh(prm.beta_a);
  const double zb = 2.0 * std::cosh(prm.beta_b);
  const double db = prm.beta_a - prm.beta_b;
  const double xi = 2.0 * prm.a * prm.a + 1.0;
  const double gam = std::exp(2.0 * db) * xi + 1.0;
  const double denom = gam + std::exp(2.0 * db) * (std::exp(2.0 * db) + xi);
  return std::exp(-db) / (2.0 * za * zb) -
         prm.a * gam / (za * zb * denom);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    raise(Errc::validation_error,
          "log grid needs 0 < lo < hi and at least 2 points");
  std::vector<double> g(n);
  const double ratio = hi / lo;
  for (int k = 0; k < n; ++k)
    g[k] = lo * std::pow(ratio, static_cast<double>(k) /
                                    static_cast<double>(n - 1));
  return g;
}

namespace {

/// Shared sweep driver: build the scenario per (a, x), read off one path
/// from the engine plus baselines; keep the row with NaNs if the state or
/// the closed form is out of range.
template <typename MakeRow>
std::vector<FigureRow> sweep(const std::vector<double>& grid,
                             const std::vector<double>& a_list,
                             MakeRow make_row) {
  std::vector<FigureRow> rows;
  rows.reserve(grid.size() * a_list.size());
  for (double a : a_list)
    for (double x : grid) rows.push_back(make_row(a, x));
  return rows;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<FigureRow> figure2_data(const std::vector<double>& t_grid,
                                    const std::vector<double>& a_list,
                                    double g0, Exec exec) {
  return sweep(t_grid, a_list, [&](double a, double t) {
    FigureRow row;
    row.x = t;
    row.a = a;
    CoherentQubitParams prm;
    prm.beta = 1.0 / t;
    prm.g0 = g0;
    prm.g1 = 2.0 * g0;
    prm.a = a;
    try {
      Scenario sc = coherent_qubit_scenario(prm);
      Path pp{{0, 0}};
      row.engine = joint_distribution(sc, exec).at(pp);
      row.tpm = tpm_distribution(sc).at(pp);
    } catch (const Error&) {
      row.state_ok = false;
      row.engine = row.tpm = kNan;
    }
    try {
      row.analytic = analytic_qubit_pp(prm);
    } catch (const Error&) {
      row.analytic_ok = false;
      row.analytic = kNan;
    }
    return row;
  });
}

std::vector<FigureRow> figure3_data(const std::vector<double>& tb_grid,
                                    const std::vector<double>& a_list,
                                    double t_a, Exec exec) {
  return sweep(tb_grid, a_list, [&](double a, double tb) {
    FigureRow row;
    row.x = tb;
    row.a = a;
    QubitPairParams prm;
    prm.beta_a = 1.0 / t_a;
    prm.beta_b = 1.0 / tb;
    prm.a = a;
    try {
      Scenario sc = pair_scenario(prm);
      Path pmmp{{1, 2}};
      row.engine = joint_distribution(sc, exec).at(pmmp);
      row.tpm = tpm_distribution(sc).at(pmmp);
    } catch (const Error&) {
      row.state_ok = false;
      row.engine = row.tpm = kNan;
    }
    row.analytic = analytic_pair_pmmp(prm);
    return row;
  });
}

}  // namespace qpath
