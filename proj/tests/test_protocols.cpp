#include <doctest.h>

#include <random>

#include "hbac/protocols.hpp"
#include "oracles.hpp"

using namespace hbac;

namespace {

Vector iterate(const Matrix& g, Vector x, int n) {
  for (int i = 0; i < n; ++i) x = g * x;
  return x;
}

}  // namespace

TEST_CASE("round matrices are column-stochastic and built from permutations") {
  const auto bath = BathSpec::from_q(0.4);
  std::vector<RoundSpec> specs{build_protocol_I_qutrit(3, bath), build_protocol_I_qutrit(6, bath),
                               build_protocol_I_general(5, 4, bath), build_protocol_I_general(8, 6, bath),
                               build_protocol_II_efficiency(bath), build_protocol_II_cooling_limit(bath)};
  for (const auto& s : specs) {
    const auto g = round_matrix(s, bath).g;
    CHECK(is_column_stochastic(g));
    for (const auto& b : s.thermalize.blocks()) {
      CHECK(((b.array() == 0) || (b.array() == 1)).all());
    }
  }
}

TEST_CASE("protocol I fixed point for d_S = d_r = 3") {
  for (double q : {0.2, 0.6}) {
    const auto bath = BathSpec::from_q(q);
    const auto spec = build_protocol_I_qutrit(3, bath);
    const auto star = fixed_point(round_matrix(spec, bath));
    const double z = 1 + q * q + std::pow(q, 4);
    CHECK(star[0] == doctest::Approx(1 / z).epsilon(1e-13));
    CHECK(star[2] == doctest::Approx(std::pow(q, 4) / z).epsilon(1e-13));
    const Vector it = iterate(round_matrix(spec, bath).g, gibbs(spec.controlled, bath).probs, 3000);
    CHECK((it - star.probs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cooling limit closed forms against fixed points") {
  for (double q : {0.2, 0.45}) {
    const auto bath = BathSpec::from_q(q);
    for (int ds = 3; ds <= 7; ++ds)
      for (int dr = 3; dr <= std::min(ds, 6); ++dr) {
        const auto spec = dr == 3 ? build_protocol_I_qutrit(ds, bath) : build_protocol_I_general(ds, dr, bath);
        const auto star = fixed_point(round_matrix(spec, bath));
        CHECK(star[0] == doctest::Approx(oracle::cooling_limit(ds, dr, q)).epsilon(1e-12));
        CHECK(cooling_limit(ds, dr, bath) == doctest::Approx(oracle::cooling_limit(ds, dr, q)).epsilon(1e-14));
      }
  }
  CHECK_THROWS_AS(cooling_limit(3, 4, BathSpec::from_q(0.5)), InvalidArgument);
  CHECK_THROWS_AS(cooling_limit(2, 2, BathSpec::from_q(0.5)), InvalidArgument);
}

TEST_CASE("builders validate dimensions") {
  CHECK_THROWS_AS(build_protocol_I_qutrit(2), InvalidArgument);
  CHECK_THROWS_AS(build_protocol_I_general(3, 4), InvalidArgument);
  CHECK_THROWS_AS(build_protocol_I_general(5, 3), InvalidArgument);
}

TEST_CASE("closed-form trajectory of protocol I") {
  const auto bath = BathSpec::from_q(0.35);
  const auto spec = build_protocol_I_qutrit(3, bath);
  const Matrix g = round_matrix(spec, bath).g;
  const PopulationVector p0{0.1, 0.3, 0.6};
  Vector x = p0.probs;
  for (int n = 1; n <= 25; ++n) {
    x = g * x;
    CHECK((protocol_I_closed_form(p0, bath, n).probs - x).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(subdominant_modulus(g) == doctest::Approx(protocol_I_rate(bath)).epsilon(1e-10));
  CHECK(protocol_I_closed_form(p0, bath, 0).probs == p0.probs);
}

TEST_CASE("trajectory starts at the input and stays normalised") {
  const auto bath = BathSpec::from_q(0.3);
  const auto spec = build_protocol_II_efficiency(bath);
  const auto tr = trajectory(spec, gibbs(spec.controlled, bath), bath, 40);
  REQUIRE(tr.size() == 41);
  CHECK(tr[0].probs == gibbs(spec.controlled, bath).probs);
  for (const auto& p : tr) CHECK(p.probs.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trajectory(spec, gibbs(spec.controlled, bath), bath, 0).size() == 1);
  CHECK_THROWS_AS(trajectory(spec, PopulationVector{0.5, 0.5}, bath, 3), DimensionMismatch);
}

TEST_CASE("efficiency variant oscillates between two limits") {
  const auto bath = BathSpec::from_q(0.3);
  const auto spec = build_protocol_II_efficiency(bath);
  const auto p0 = gibbs(spec.controlled, bath);
  const auto lim = parity_limits(spec, p0, bath);
  const Matrix g = round_matrix(spec, bath).g;
  const Vector even = iterate(g, p0.probs, 2000), odd = g * even;
  CHECK((even - lim.even.probs).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((odd - lim.odd.probs).cwiseAbs().maxCoeff() < 1e-10);
  // the fixed point is the average of the two limits
  const auto star = fixed_point(round_matrix(spec, bath));
  CHECK(((lim.even.probs + lim.odd.probs) / 2 - star.probs).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(parity_limits(build_protocol_I_qutrit(3, bath), gibbs(HamiltonianSpec::equally_spaced(3), bath), bath),
                  InvalidArgument);
}

TEST_CASE("machine marginals") {
  const auto bath = BathSpec::from_q(0.3);
  const auto spec = build_protocol_II_cooling_limit(bath);
  const auto sm = gibbs(spec.controlled, bath);
  const Vector m = spec.system_marginal(sm.probs);
  const auto tau = gibbs(HamiltonianSpec::equally_spaced(3), bath);
  CHECK((m - tau.probs).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("single-round optima by exhaustive search") {
  for (double q : {0.3, 0.5}) {
    const auto bath = BathSpec::from_q(q);
    const auto o = single_round_optima(bath);
    const double beta = bath.beta;
    const double brute_I =
        oracle::single_round_brute(oracle::ladder(3), oracle::ladder(3), beta, [](int s) { return s == 0; });
    CHECK(o.p1_star_I == doctest::Approx(brute_I).epsilon(1e-12));
    // the single-round builders reach the optimum with their fixed recharge
    const auto r1 = build_single_round_I(bath);
    const Vector p1 = round_matrix(r1, bath).g * gibbs(r1.controlled, bath).probs;
    CHECK(p1[0] == doctest::Approx(o.p1_star_I).epsilon(1e-12));
    const auto r2 = build_single_round_II(bath);
    const Vector p2 = r2.system_marginal(round_matrix(r2, bath).g * gibbs(r2.controlled, bath).probs);
    CHECK(p2[0] == doctest::Approx(o.p1_star_II).epsilon(1e-12));
  }
}
