#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hbac/collision.hpp"
#include "hbac/markov.hpp"

namespace hbac {

/// One cooling round: recharge permutation V on the controlled system, then a
/// collision with a fresh thermal molecule.
struct RoundSpec {
  std::string name;
  HamiltonianSpec system;                 // S alone
  std::optional<HamiltonianSpec> machine; // M, when present
  HamiltonianSpec controlled;             // S, or S x M with index s * d_M + m
  Permutation recharge;
  BlockChannel thermalize;

  int system_dim() const { return system.dim(); }
  const HamiltonianSpec& molecule() const { return thermalize.molecule(); }
  /// Sum over the machine index (identity without machine).
  Vector system_marginal(const Vector& p_controlled) const;
};

struct RoundMatrix {
  Matrix g;
};

/// Controlled Hamiltonian of S x M, levels ordered (s, m) lexicographically.
HamiltonianSpec product_hamiltonian(const HamiltonianSpec& s, const HamiltonianSpec& m);

RoundSpec build_protocol_I_qutrit(int ds, const BathSpec& bath = BathSpec::from_q(0.5));
RoundSpec build_protocol_I_general(int ds, int dr, const BathSpec& bath = BathSpec::from_q(0.5));
RoundSpec build_protocol_II_efficiency(const BathSpec& bath = BathSpec::from_q(0.5));
RoundSpec build_protocol_II_cooling_limit(const BathSpec& bath = BathSpec::from_q(0.5));

/// Single-round variants: V swaps levels 1 and 2 of S (I) or |01> and |11> of
/// SM (II); the collision is the greedy optimum for the thermal input.
RoundSpec build_single_round_I(const BathSpec& bath);
RoundSpec build_single_round_II(const BathSpec& bath);

Matrix permutation_matrix(const Permutation& p);

RoundMatrix round_matrix(const RoundSpec& spec, const BathSpec& bath);
PopulationVector fixed_point(const RoundMatrix& g);
std::vector<PopulationVector> trajectory(const RoundSpec& spec, const PopulationVector& p0,
                                         const BathSpec& bath, int n);

/// Closed-form ground population of the Protocol I fixed point.
double cooling_limit(int ds, int dr, const BathSpec& bath);

/// Protocol I, d_S = d_r = 3: p^(N) = p* + (2 tau_1)^{N-1} delta for N >= 1.
PopulationVector protocol_I_closed_form(const PopulationVector& p0, const BathSpec& bath, int n);
double protocol_I_rate(const BathSpec& bath);

struct ParityLimits {
  PopulationVector even;
  PopulationVector odd;
};

/// Limits of the even and odd subsequences for a round matrix whose support
/// graph is bipartite (period two).
ParityLimits parity_limits(const RoundSpec& spec, const PopulationVector& p0, const BathSpec& bath);

struct SingleRoundOptima {
  double p1_star_I = 0;
  double p1_star_II = 0;
  double w1_I = 0;
  double w1_II = 0;
};

SingleRoundOptima single_round_optima(const BathSpec& bath);

}  // namespace hbac
