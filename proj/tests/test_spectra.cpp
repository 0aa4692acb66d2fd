#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hbac/spectra.hpp"
#include "oracles.hpp"

using namespace hbac;

TEST_CASE("equally spaced spectrum and gibbs state") {
  const auto h = HamiltonianSpec::equally_spaced(3, 2.0);
  CHECK(h.dim() == 3);
  CHECK(h.energies()[2] == doctest::Approx(4.0));
  const auto bath = BathSpec::from_q(0.3, 2.0);
  CHECK(bath.beta == doctest::Approx(-std::log(0.3) / 2.0));
  const auto tau = gibbs(h, bath);
  const auto ref = oracle::gibbs({0, 2, 4}, bath.beta);
  for (int i = 0; i < 3; ++i) CHECK(tau[i] == doctest::Approx(ref[i]).epsilon(1e-14));
  CHECK(tau[0] == doctest::Approx(1 / (1 + 0.3 + 0.09)));

  const auto half = gibbs(HamiltonianSpec::equally_spaced(3), BathSpec::from_q(0.5));
  CHECK(half[0] == doctest::Approx(4.0 / 7).epsilon(1e-15));
  CHECK(half[1] == doctest::Approx(2.0 / 7).epsilon(1e-15));
  CHECK(half[2] == doctest::Approx(1.0 / 7).epsilon(1e-15));
}

TEST_CASE("bath from beta and from q agree") {
  const auto a = BathSpec::from_beta(0.7, 1.5);
  const auto b = BathSpec::from_q(a.q, 1.5);
  CHECK(b.beta == doctest::Approx(0.7).epsilon(1e-14));
  CHECK_THROWS_AS(BathSpec::from_q(1.0), InvalidArgument);
  CHECK_THROWS_AS(BathSpec::from_q(0.0), InvalidArgument);
  CHECK_THROWS_AS(BathSpec::from_beta(-1.0), InvalidArgument);
}

TEST_CASE("population vector normalisation and clamping") {
  CHECK_NOTHROW(PopulationVector{0.5, 0.5});
  CHECK_THROWS_AS((PopulationVector{0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS((PopulationVector{1.1, -0.1}), InvalidArgument);
  const PopulationVector p{1.0 + 5e-16, -5e-16};
  CHECK(p[1] == 0.0);
}

TEST_CASE("invalid spectra are rejected") {
  CHECK_THROWS_AS(HamiltonianSpec::equally_spaced(1), InvalidArgument);
  CHECK_THROWS_AS(HamiltonianSpec::explicit_levels({0.0, 2.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(HamiltonianSpec::equally_spaced(3, -1.0), InvalidArgument);
}

TEST_CASE("composite spectrum is sorted with lexicographic ties") {
  const auto h2 = composite_hamiltonian(HamiltonianSpec::equally_spaced(2), 3);
  CHECK(h2.dim() == 8);
  const std::vector<double> levels{0, 1, 1, 1, 2, 2, 2, 3};
  for (int i = 0; i < 8; ++i) CHECK(h2.levels[i] == doctest::Approx(levels[i]));
  CHECK(h2.product_labels[1] == std::vector<int>{0, 0, 1});
  CHECK(h2.product_labels[3] == std::vector<int>{1, 0, 0});
  CHECK_THROWS_AS(composite_hamiltonian(HamiltonianSpec::equally_spaced(3), 8, 4096), CapExceeded);
}

TEST_CASE("beta ordering examples") {
  const auto bath = BathSpec::from_q(0.5);
  const auto h = HamiltonianSpec::equally_spaced(3);
  const auto tau = gibbs(h, bath);
  // weights of (tau1, tau0, tau2) are (tau1, 2 tau0, 4 tau2) = (2, 8, 4)/7
  const PopulationVector p{tau[1], tau[0], tau[2]};
  CHECK(beta_ordering(p, h, bath) == std::vector<int>{1, 2, 0});
  CHECK(beta_ordering(tau, h, bath) == std::vector<int>{0, 1, 2});
}

TEST_CASE("R3 premise") {
  const auto bath = BathSpec::from_q(0.5);
  const auto h = HamiltonianSpec::equally_spaced(3);
  CHECK(satisfies_R3(gibbs(h, bath), h, bath));
  CHECK(satisfies_R3(PopulationVector{1.0 / 3, 1.0 / 3, 1.0 / 3}, h, bath));
  CHECK_FALSE(satisfies_R3(PopulationVector{0.9, 0.05, 0.05}, h, bath));
  const auto w = r3_witness(PopulationVector{0.9, 0.05, 0.05}, h, bath);
  REQUIRE(w.has_value());
  CHECK(w->first == 0);
  // degenerate levels need equal weights
  const auto hd = HamiltonianSpec::explicit_levels({0, 1, 1});
  CHECK_FALSE(satisfies_R3(PopulationVector{0.2, 0.5, 0.3}, hd, bath));
  CHECK(satisfies_R3(PopulationVector{0.2, 0.4, 0.4}, hd, bath));
}

TEST_CASE("config round trip") {
  const auto h = HamiltonianSpec::explicit_levels({0, 0.5, 2.0}, 1.3);
  const auto bath = BathSpec::from_q(0.37, 1.3);
  std::stringstream ss;
  write_config(ss, h, bath);
  const auto cfg = parse_config(ss);
  const auto h2 = hamiltonian_from_config(cfg);
  const auto b2 = bath_from_config(cfg);
  CHECK(h2.levels == h.levels);
  CHECK(h2.unit == h.unit);
  CHECK(b2.q == bath.q);

  std::istringstream bad("kind = equally_spaced\nd = 3\nq = 0.5\nbeta = 1\n");
  CHECK_THROWS_AS(bath_from_config(parse_config(bad)), InvalidArgument);
  std::istringstream comp("# two qutrits\nkind = composite\nd = 3\ncopies = 2\n");
  CHECK(hamiltonian_from_config(parse_config(comp)).dim() == 9);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3, 1e-300, 0.9106640, 123456.789}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.0) == "0");
}
