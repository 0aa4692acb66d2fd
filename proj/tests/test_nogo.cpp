#include <doctest.h>

#include <random>

#include "hbac/nogo.hpp"
#include "oracles.hpp"

using namespace hbac;

TEST_CASE("premises") {
  const auto bath = BathSpec::from_q(0.5);
  const auto h3 = HamiltonianSpec::equally_spaced(3);
  const auto h2 = HamiltonianSpec::equally_spaced(2);
  const auto tau = gibbs(h3, bath);
  auto pr = check_premises(h3, h2, tau, bath);
  CHECK(pr.all());
  pr = check_premises(h2, h3, gibbs(h2, bath), bath);
  CHECK_FALSE(pr.r1);
  pr = check_premises(h3, HamiltonianSpec::explicit_levels({0, 2}), tau, bath);
  CHECK_FALSE(pr.r2);
  pr = check_premises(h3, h2, PopulationVector{0.8, 0.1, 0.1}, bath);
  CHECK_FALSE(pr.r3);
}

TEST_CASE("single-system no-go refuses inputs outside its premises") {
  const auto bath = BathSpec::from_q(0.5);
  const auto h3 = HamiltonianSpec::equally_spaced(3);
  CHECK_THROWS_AS(verify_theorem2(h3, HamiltonianSpec::explicit_levels({0, 2}), PopulationVector{0, 0, 1}, bath),
                  PremiseViolation);
}

TEST_CASE("single-system no-go bound against exhaustive enumeration") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const int ds = 2 + t % 4, dr = 2 + (t / 4) % (ds - 1);
    const auto bath = BathSpec::from_q(0.15 + 0.01 * t);
    const auto hs = HamiltonianSpec::equally_spaced(ds);
    const auto hr = HamiltonianSpec::equally_spaced(dr);
    const auto p = random_r3_state(hs, bath, rng);
    REQUIRE(satisfies_R3(p, hs, bath));
    const auto v = verify_theorem2(hs, hr, p, bath);
    std::vector<double> ps(p.probs.data(), p.probs.data() + ds);
    const double ref = oracle::exhaustive_best(oracle::product(ps, oracle::gibbs(oracle::ladder(dr), bath.beta)),
                                               oracle::energy_groups(oracle::ladder(ds), oracle::ladder(dr)),
                                               [&](int idx) { return idx / dr == 0; });
    CHECK(v.p0_star == doctest::Approx(ref).epsilon(1e-13));
    CHECK(v.bound_holds);
    CHECK(v.p0_star <= v.tau0_S + 1e-12);
    // equality when the molecule matches the system
    if (dr == ds) CHECK(std::abs(v.margin()) <= 1e-12);
    else CHECK(v.margin() > 1e-12);
  }
}

TEST_CASE("composite no-go with two-qubit copies") {
  const auto bath = BathSpec::from_q(0.5);
  const auto h = HamiltonianSpec::equally_spaced(2);
  std::mt19937_64 rng(4);
  for (int mu = 1; mu <= 3; ++mu)
    for (int nu = 1; nu <= mu; ++nu) {
      const auto comp = composite_hamiltonian(h, mu);
      const auto p = random_r3_state(comp, bath, rng);
      const auto v = verify_theorem3(h, mu, nu, p, bath);
      CHECK(v.bound_holds);
      CHECK(v.tau0_S == doctest::Approx(std::pow(1 / 1.5, mu)));
      const auto g = verify_theorem3(h, mu, nu, gibbs(comp, bath), bath);
      CHECK(std::abs(g.margin()) <= 1e-12);
    }
}

TEST_CASE("R2 counterexample") {
  for (double q : {0.2, 0.5, 0.8}) {
    const auto r = counterexample_r2(BathSpec::from_q(q));
    CHECK(r.p0_out == doctest::Approx(1 / (1 + q * q)).epsilon(1e-14));
    CHECK(r.tau0_S == doctest::Approx(1 / (1 + q + q * q)).epsilon(1e-14));
  }
}

TEST_CASE("three-qubit example") {
  const auto r = three_qubit_example(0.6, BathSpec::from_q(0.5));
  CHECK(r.p_ground_out == doctest::Approx(0.302880658).epsilon(1e-8));
  CHECK(r.tau0_S == doctest::Approx(8.0 / 27).epsilon(1e-14));
  CHECK(r.r3_violated);
  CHECK(r.oracle_p0_star == doctest::Approx(r.p_ground_out).epsilon(1e-12));
  CHECK_THROWS_AS(three_qubit_example(0.7, BathSpec::from_q(0.5)), InvalidArgument);
  // at pbar0 = tau0 the state is thermal and nothing is gained
  const auto eq = three_qubit_example(1 / 1.5, BathSpec::from_q(0.5));
  CHECK(eq.p_ground_out == doctest::Approx(eq.tau0_S).epsilon(1e-14));
}

TEST_CASE("three-qubit optimum by direct enumeration of bit strings") {
  // system: three qubits, first one in (pbar0, 1 - pbar0); molecule: three thermal qubits
  const double q = 0.5, pbar0 = 0.6, t0 = 1 / (1 + q);
  const double single[3][2] = {{pbar0, 1 - pbar0}, {t0, 1 - t0}, {t0, 1 - t0}};
  std::map<int, std::vector<double>> by_energy;
  std::map<int, int> targets;
  for (int s = 0; s < 8; ++s)
    for (int m = 0; m < 8; ++m) {
      double pr = 1;
      for (int b = 0; b < 3; ++b) pr *= single[b][(s >> (2 - b)) & 1] * ((m >> b) & 1 ? 1 - t0 : t0);
      const int e = __builtin_popcount(s) + __builtin_popcount(m);
      by_energy[e].push_back(pr);
      if (s == 0) ++targets[e];
    }
  double best = 0;
  for (auto& [e, v] : by_energy) {
    std::sort(v.rbegin(), v.rend());
    for (int i = 0; i < targets[e]; ++i) best += v[i];
  }
  CHECK(best == doctest::Approx(three_qubit_example(pbar0, BathSpec::from_q(q)).p_ground_out).epsilon(1e-13));
}

TEST_CASE("random R3 states respect equal weights on degenerate levels") {
  std::mt19937_64 rng(1);
  const auto bath = BathSpec::from_q(0.6);
  const auto h = composite_hamiltonian(HamiltonianSpec::equally_spaced(3), 2);
  for (int i = 0; i < 50; ++i) CHECK(satisfies_R3(random_r3_state(h, bath, rng), h, bath));
}

TEST_CASE("sweep is deterministic") {
  SweepConfig cfg;
  cfg.thm2_instances = 30;
  cfg.thm3_instances = 6;
  const auto a = nogo_sweep(cfg);
  const auto b = nogo_sweep(cfg);
  REQUIRE(a.size() == 36);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].verdict.p0_star == b[i].verdict.p0_star);
}
