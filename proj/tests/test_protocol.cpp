#include <doctest.h>

#include <cmath>

#include "qpath/protocol.hpp"
#include "qpath/reference.hpp"
#include "test_support.hpp"

using namespace qpath;
using qtest::Rng;

TEST_CASE("measurement operator is the expected copy-space projector") {
  Rng rng(301);
  Scenario sc = qtest::random_scenario(rng, 2, 2);
  Path p{{1, 0}};
  CMatrix m = build_measurement_operator(sc, p);
  CHECK(m.rows() == 4);
  CHECK(max_abs(m - m.adjoint()) <= 1e-15);
  CHECK(max_abs(m * m - m) <= 1e-14);  // projector
  CHECK(m.trace().real() == doctest::Approx(1.0).epsilon(1e-13));

  // literal factor check: entry against the defining tensor product
  CVector m0 = sc.times[0].unitary.op.adjoint() * sc.times[0].basis.col(1);
  CVector m1 = sc.times[1].unitary.op.adjoint() * sc.times[1].basis.col(0);
  CMatrix lit = tensor({m0 * m0.adjoint(), m1 * m1.adjoint()}, 4096);
  CHECK(max_abs(m - lit) == 0.0);
}

TEST_CASE("postselection expectation matches the literal copy-space form") {
  // Build T_s = (Pi_s rho)^(x copies) explicitly and compare
  // Tr[M T_s] / P_s^(copies-1) against the factorized evaluation.
  Rng rng(311);
  for (int rep = 0; rep < 10; ++rep) {
    Scenario sc = qtest::random_scenario(rng, 2 + rng.uniform_int(2), 2);
    CMatrix pi_rho_all = CMatrix::Zero(sc.dim, sc.dim);
    for (int s = 0; s < sc.dim; ++s) {
      CVector v = sc.decomposition.eigenvectors.col(s);
      CMatrix pi_rho = (v * v.adjoint()) * sc.rho.op;
      std::vector<CMatrix> copies(sc.num_times(), pi_rho);
      CMatrix t_s = tensor(copies, 4096);
      for (std::int64_t rank = 0; rank < path_count(sc); ++rank) {
        Path p = path_from_rank(rank, sc.dim, sc.num_times());
        CMatrix m = build_measurement_operator(sc, p);
        double raw = (m * t_s).trace().real();
        double pop = sc.decomposition.populations[s];
        double literal =
            raw / std::pow(pop, static_cast<double>(sc.num_times() - 1));
        PostselectTerm term = postselect_expectation(sc, p, s);
        CHECK_FALSE(term.zero_population);
        // mixed absolute/relative: tiny probabilities carry rounding from
        // the copy-space trace that a pure relative bound would magnify
        CHECK(std::abs(term.value - literal) <=
              1e-9 * std::max(1.0, std::abs(literal)));
      }
      pi_rho_all += pi_rho;
    }
    // projectors resolve the identity: sum_s Pi_s rho = rho
    CHECK(max_abs(pi_rho_all - sc.rho.op) <= 1e-12);
  }
}

TEST_CASE("postselection route reproduces the direct sum") {
  Rng rng(321);
  for (int rep = 0; rep < 50; ++rep) {
    int d = 2 + rng.uniform_int(3);
    Scenario sc = qtest::random_scenario(rng, d, 1 + rng.uniform_int(3));
    CHECK(qtest::max_dist_diff(postselect_distribution(sc),
                               joint_distribution(sc)) <= 1e-10);
  }
}

TEST_CASE("serial and parallel postselection agree bitwise") {
  Rng rng(331);
  Scenario sc = qtest::random_scenario(rng, 3, 3);
  CHECK(postselect_distribution(sc, Exec::serial).probs ==
        postselect_distribution(sc, Exec::parallel).probs);
}

TEST_CASE("zero population falls back to the cancelled form") {
  // Rank-deficient state: pure |psi> on a qubit. The missing eigenstate
  // has population ~0; its contribution must come out finite and the
  // route must still match the direct sum.
  Rng rng(341);
  CVector psi = qtest::random_unitary(rng, 2).col(0);
  CMatrix rho = psi * psi.adjoint();
  CMatrix u1 = qtest::random_unitary(rng, 2);
  Scenario sc = Scenario::make(
      {2}, rho, {"t0", "t1"}, {CMatrix::Identity(2, 2), u1},
      {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)});

  CHECK(sc.decomposition.populations[1] < sc.tol.pop_cutoff);
  Path p{{0, 1}};
  PostselectTerm term = postselect_expectation(sc, p, 1);
  CHECK(term.zero_population);
  double pop = sc.decomposition.populations[1];
  double cancelled = pop * conditional_probability(sc, 0, 1, 0) *
                     conditional_probability(sc, 1, 1, 1);
  CHECK(term.value == doctest::Approx(cancelled).epsilon(1e-12));

  CHECK(qtest::max_dist_diff(postselect_distribution(sc),
                             joint_distribution(sc)) <= 1e-10);
}

TEST_CASE("shot simulation is reproducible and scheduling-independent") {
  Rng rng(351);
  Scenario sc = qtest::random_scenario(rng, 2, 2);
  ShotReport a = sample_protocol(sc, 20000, 99, Exec::parallel);
  ShotReport b = sample_protocol(sc, 20000, 99, Exec::parallel);
  ShotReport c = sample_protocol(sc, 20000, 99, Exec::serial);
  CHECK(a.path_counts == b.path_counts);
  CHECK(a.estimates == b.estimates);
  CHECK(a.std_errors == b.std_errors);
  CHECK(a.path_counts == c.path_counts);
  CHECK(a.estimates == c.estimates);
  CHECK(a.stage1_counts == c.stage1_counts);
  CHECK(a.accepted == c.accepted);

  ShotReport d = sample_protocol(sc, 20000, 100);
  CHECK(a.path_counts != d.path_counts);  // seed actually matters
}

TEST_CASE("shot tallies match the sequential reference sampler") {
  Rng rng(361);
  for (int rep = 0; rep < 5; ++rep) {
    Scenario sc = qtest::random_scenario(rng, 2 + rng.uniform_int(2), 2);
    const std::int64_t shots = 5000;
    ShotReport rep_k = sample_protocol(sc, shots, 7 + rep);
    ref::SampleTallies rt = ref::sample_protocol(sc, shots, 7 + rep);
    CHECK(rep_k.stage1_counts == rt.stage1);
    std::int64_t accepted = 0;
    std::vector<std::int64_t> counts(rep_k.path_counts.size(), 0);
    for (int s = 0; s < sc.dim; ++s) {
      accepted += rt.accepted_by_s[s];
      for (std::size_t r = 0; r < counts.size(); ++r)
        counts[r] += rt.counts_by_s[s * counts.size() + r];
    }
    CHECK(rep_k.accepted == accepted);
    CHECK(rep_k.path_counts == counts);
  }
}

TEST_CASE("estimates converge to the exact distribution") {
  Rng rng(371);
  for (int rep = 0; rep < 3; ++rep) {
    int d = 2;
    CMatrix rho = qtest::random_density_floored(rng, d, 0.3);
    Scenario sc = Scenario::make(
        {d}, rho, {"t0", "t1"},
        {CMatrix::Identity(d, d), qtest::random_unitary(rng, d)},
        {qtest::random_unitary(rng, d), qtest::random_unitary(rng, d)});
    PathDistribution exact = joint_distribution(sc);
    ShotReport srep = sample_protocol(sc, 100000, 1234 + rep);
    CHECK_FALSE(srep.no_accepted);
    for (std::size_t r = 0; r < exact.probs.size(); ++r) {
      double err = std::abs(srep.estimates[r] - exact.probs[r]);
      CHECK(err <= 5.0 * srep.std_errors[r] + 1e-4);
    }
    // acceptance rate concentrates on sum_s P_s^(num_times)
    double want = 0.0;
    for (double p : sc.decomposition.populations) want += p * p;
    double sigma = std::sqrt(want * (1.0 - want) / 100000.0);
    CHECK(std::abs(srep.acceptance_rate - want) <= 5.0 * sigma);
  }
}

TEST_CASE("estimator error scales like one over sqrt(shots)") {
  Rng rng(381);
  Scenario sc = qtest::random_scenario(rng, 2, 2);
  PathDistribution exact = joint_distribution(sc);
  const std::vector<std::int64_t> ladder = {1000, 10000, 100000};
  std::vector<double> mean_err(ladder.size(), 0.0);
  const int seeds = 20;
  for (int k = 0; k < seeds; ++k)
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      ShotReport rep = sample_protocol(sc, ladder[i], 5000 + k);
      double err = 0.0;
      for (std::size_t r = 0; r < exact.probs.size(); ++r)
        err = std::max(err, std::abs(rep.estimates[r] - exact.probs[r]));
      mean_err[i] += err / seeds;
    }
  const double root10 = std::sqrt(10.0);
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    double ratio = mean_err[i - 1] / mean_err[i];
    CHECK(ratio >= root10 / 2.0);
    CHECK(ratio <= 2.0 * root10);
  }
}

TEST_CASE("strata with no accepted shots are flagged") {
  // Skewed populations and three times: the small stratum gets stage-1
  // hits but acceptance needs all three copies to agree.
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 0.95;
  rho(1, 1) = 0.05;
  Rng rng(391);
  Scenario sc = Scenario::make(
      {2}, rho, {"t0", "t1", "t2"},
      {CMatrix::Identity(2, 2), qtest::random_unitary(rng, 2),
       qtest::random_unitary(rng, 2)},
      {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2),
       CMatrix::Identity(2, 2)});
  ShotReport rep = sample_protocol(sc, 40, 3);
  CHECK(rep.stage1_counts[1] > 0);
  CHECK(rep.no_accepted);

  // plenty of shots: every stratum accepts and the flag clears
  ShotReport big = sample_protocol(sc, 200000, 3);
  CHECK_FALSE(big.no_accepted);
}

TEST_CASE("convergence table reports shrinking errors") {
  Rng rng(401);
  Scenario sc = qtest::random_scenario(rng, 2, 2);
  auto rows = convergence_table(sc, {100, 10000}, 17);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].shots == 100);
  CHECK(rows[1].shots == 10000);
  CHECK(rows[1].max_abs_error < rows[0].max_abs_error);
  CHECK(rows[0].acceptance_rate > 0.0);
}

TEST_CASE("shots must be positive") {
  Rng rng(411);
  Scenario sc = qtest::random_scenario(rng, 2, 1);
  CHECK_THROWS_WITH_AS(sample_protocol(sc, 0, 1),
                       doctest::Contains("ValidationError"), Error);
}
