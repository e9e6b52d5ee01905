#include <doctest.h>

#include "qpath/bayesnet.hpp"
#include "qpath/reference.hpp"
#include "test_support.hpp"

using namespace qpath;
using qtest::Rng;

TEST_CASE("conditional rows are normalized for random scenarios") {
  Rng rng(201);
  for (int rep = 0; rep < 20; ++rep) {
    int d = 2 + rng.uniform_int(3);
    Scenario sc = qtest::random_scenario(rng, d, 2 + rng.uniform_int(2));
    CondTables t = CondTables::build(sc);
    for (std::size_t n = 0; n < t.num_times; ++n)
      for (int s = 0; s < d; ++s) {
        KahanSum row;
        for (int x = 0; x < d; ++x) {
          CHECK(t.at(n, s, x) >= 0.0);
          row.add(t.at(n, s, x));
        }
        CHECK(std::abs(row.value() - 1.0) <= 1e-12);
      }
  }
}

TEST_CASE("conditional probability agrees with the table entries") {
  Rng rng(211);
  Scenario sc = qtest::random_scenario(rng, 3, 2);
  CondTables t = CondTables::build(sc);
  for (std::size_t n = 0; n < 2; ++n)
    for (int s = 0; s < 3; ++s)
      for (int x = 0; x < 3; ++x)
        CHECK(conditional_probability(sc, n, s, x) ==
              doctest::Approx(t.at(n, s, x)).epsilon(1e-14));
}

TEST_CASE("joint distributions are nonnegative and normalized") {
  Rng rng(221);
  for (int rep = 0; rep < 200; ++rep) {
    int d = 2 + rng.uniform_int(3);
    int nt = 1 + rng.uniform_int(3);
    Scenario sc = qtest::random_scenario(rng, d, nt);
    PathDistribution dist = joint_distribution(sc);
    CHECK(dist.probs.size() == static_cast<std::size_t>(path_count(sc)));
    for (double p : dist.probs) CHECK(p >= -1e-12);
    CHECK(std::abs(dist.total - 1.0) <= 1e-9);
  }
}

TEST_CASE("kernel agrees with the plain reference implementation") {
  Rng rng(231);
  for (int rep = 0; rep < 25; ++rep) {
    int d = 2 + rng.uniform_int(3);
    Scenario sc = qtest::random_scenario(rng, d, 1 + rng.uniform_int(3));
    CHECK(qtest::max_dist_diff(joint_distribution(sc),
                               ref::joint_distribution(sc)) <= 1e-12);
  }
}

TEST_CASE("serial and parallel enumeration are bitwise identical") {
  Rng rng(241);
  Scenario sc = qtest::random_scenario(rng, 4, 3);
  PathDistribution a = joint_distribution(sc, Exec::serial);
  PathDistribution b = joint_distribution(sc, Exec::parallel);
  CHECK(a.probs == b.probs);
  CHECK(a.total == b.total);
}

TEST_CASE("single path probability matches the joint entry") {
  Rng rng(251);
  Scenario sc = qtest::random_scenario(rng, 3, 3);
  PathDistribution dist = joint_distribution(sc);
  Path p{{2, 0, 1}};
  CHECK(path_probability(sc, p) == dist.at(p));
  CHECK_THROWS_WITH_AS(path_probability(sc, Path{{0, 1}}),
                       doctest::Contains("WrongTimeCount"), Error);
}

TEST_CASE("marginal onto one time equals the single-time scenario") {
  // Summing the other outcomes must factor out: each conditional row sums
  // to one, so the marginal onto time n is the joint of a scenario that
  // keeps only time n.
  Rng rng(261);
  CMatrix rho = qtest::random_density(rng, 3);
  std::vector<CMatrix> us = {CMatrix::Identity(3, 3),
                             qtest::random_unitary(rng, 3),
                             qtest::random_unitary(rng, 3)};
  std::vector<CMatrix> bs = {qtest::random_unitary(rng, 3),
                             qtest::random_unitary(rng, 3),
                             qtest::random_unitary(rng, 3)};
  Scenario full =
      Scenario::make({3}, rho, {"t0", "t1", "t2"}, us, bs);
  PathDistribution joint = joint_distribution(full);
  for (std::size_t n = 0; n < 3; ++n) {
    Scenario single = Scenario::make({3}, rho, {"tn"}, {us[n]}, {bs[n]});
    PathDistribution direct = joint_distribution(single);
    PathDistribution marg = marginal(joint, {n});
    CHECK(qtest::max_dist_diff(direct, marg) <= 1e-12);
  }
}

TEST_CASE("two-time marginal keeps the selected times in order") {
  Rng rng(271);
  Scenario sc = qtest::random_scenario(rng, 2, 3);
  PathDistribution joint = joint_distribution(sc);
  PathDistribution marg = marginal(joint, {0, 2});
  // hand sum for x0 = 1, x2 = 0 over the middle outcome
  double want = joint.at(Path{{1, 0, 0}}) + joint.at(Path{{1, 1, 0}});
  CHECK(marg.at(Path{{1, 0}}) == doctest::Approx(want).epsilon(1e-14));
  CHECK(std::abs(marg.total - 1.0) <= 1e-9);

  CHECK_THROWS_WITH_AS(marginal(joint, {}),
                       doctest::Contains("EmptyKeepSet"), Error);
  CHECK_THROWS_WITH_AS(marginal(joint, {0, 3}),
                       doctest::Contains("IndexOutOfRange"), Error);
}

TEST_CASE("baseline equals the joint when the state is classical at t0") {
  Rng rng(281);
  for (int rep = 0; rep < 30; ++rep) {
    int d = 2 + rng.uniform_int(3);
    Scenario sc = qtest::random_classical_scenario(rng, d);
    CHECK(qtest::max_dist_diff(joint_distribution(sc),
                               tpm_distribution(sc)) <= 1e-12);
  }
}

TEST_CASE("baseline matches its defining formula and differs on coherence") {
  Rng rng(291);
  CMatrix rho = qtest::random_density(rng, 2);  // generic: coherent
  CMatrix u1 = qtest::random_unitary(rng, 2);
  Scenario sc = Scenario::make(
      {2}, rho, {"t0", "t1"}, {CMatrix::Identity(2, 2), u1},
      {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)});
  PathDistribution tpm = tpm_distribution(sc);
  for (int x0 = 0; x0 < 2; ++x0)
    for (int x1 = 0; x1 < 2; ++x1) {
      double want = rho(x0, x0).real() * std::norm(u1(x1, x0));
      CHECK(tpm.at(Path{{x0, x1}}) ==
            doctest::Approx(want).epsilon(1e-13));
    }
  CHECK(qtest::max_dist_diff(joint_distribution(sc), tpm) > 1e-6);

  Scenario three = qtest::random_scenario(rng, 2, 3);
  CHECK_THROWS_WITH_AS(tpm_distribution(three),
                       doctest::Contains("WrongTimeCount"), Error);
}
