#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hbac/collision.hpp"

namespace hbac {

struct Premises {
  bool r1 = false;
  bool r2 = false;
  bool r3 = false;
  bool all() const { return r1 && r2 && r3; }
};

struct NoGoVerdict {
  Premises premises;
  double p0_star = 0;
  double tau0_S = 0;
  bool bound_holds = false;  // p0_star <= tau0_S + 1e-12
  std::optional<BlockChannel> witness;
  double margin() const { return tau0_S - p0_star; }
};

Premises check_premises(const HamiltonianSpec& hs, const HamiltonianSpec& hr, const PopulationVector& p,
                        const BathSpec& bath);

NoGoVerdict verify_theorem2(const HamiltonianSpec& hs, const HamiltonianSpec& hr, const PopulationVector& p,
                            const BathSpec& bath);

/// System of mu copies of h, molecule of nu copies; the bound is on the
/// all-ground product level.
NoGoVerdict verify_theorem3(const HamiltonianSpec& h, int mu, int nu, const PopulationVector& p,
                            const BathSpec& bath);

struct CounterexampleResult {
  double p0_out = 0;
  double tau0_S = 0;
};

/// H_S = H^(3), H_r = 2E|1><1|, p = (0,0,1); swapping |2,0> and |0,1>.
CounterexampleResult counterexample_r2(const BathSpec& bath);

struct ThreeQubitResult {
  double p_ground_out = 0;
  double tau0_S = 0;
  bool r3_violated = false;       // on the pair (|100>, |011>)
  double oracle_p0_star = 0;      // greedy optimum over the 8 x 8 composite
};

ThreeQubitResult three_qubit_example(double pbar0, const BathSpec& bath);

/// Population on composite(h, copies) for independent particles in states `single`.
PopulationVector product_population(const HamiltonianSpec& composite, const PopulationVector& single);
PopulationVector product_population(const HamiltonianSpec& composite,
                                    const std::vector<PopulationVector>& singles);

/// Random state obeying R3: weights p_k e^{beta E_k} non-decreasing in energy
/// and equal on degenerate levels.
PopulationVector random_r3_state(const HamiltonianSpec& h, const BathSpec& bath, std::mt19937_64& rng);

struct SweepInstance {
  std::string theorem;  // "thm2" or "thm3"
  int ds = 0, dr = 0;   // thm3: mu, nu
  bool gibbs_input = false;
  NoGoVerdict verdict;
  PopulationVector input;
  double q = 0;
};

struct SweepConfig {
  int thm2_instances = 200;
  int thm3_instances = 50;
  int max_ds = 5;
  int max_mu = 3;
  double q = 0.5;
  std::uint64_t seed = 7;
};

std::vector<SweepInstance> nogo_sweep(const SweepConfig& cfg);

}  // namespace hbac
