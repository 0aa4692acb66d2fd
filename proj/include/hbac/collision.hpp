#pragma once

#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "hbac/spectra.hpp"

namespace hbac {

struct JointLabel {
  int system = 0;
  int molecule = 0;
  auto operator<=>(const JointLabel&) const = default;
};

/// Degenerate joint-energy subspace; basis sorted lexicographically in (k, j).
struct SubspaceIndex {
  double energy = 0;
  std::vector<JointLabel> basis;
  int size() const { return static_cast<int>(basis.size()); }
};

std::vector<SubspaceIndex> decompose_subspaces(const HamiltonianSpec& hs, const HamiltonianSpec& hr,
                                               double degeneracy_tol = 1e-9);

/// Population action of an energy-preserving unitary: one doubly-stochastic
/// block per degenerate subspace, acting on column vectors (new = B * old).
class BlockChannel {
 public:
  BlockChannel(HamiltonianSpec hs, HamiltonianSpec hr, std::vector<SubspaceIndex> subspaces,
               std::vector<Matrix> blocks);

  static BlockChannel identity(const HamiltonianSpec& hs, const HamiltonianSpec& hr);

  const HamiltonianSpec& system() const { return hs_; }
  const HamiltonianSpec& molecule() const { return hr_; }
  const std::vector<SubspaceIndex>& subspaces() const { return subspaces_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  int joint_dim() const { return hs_.dim() * hr_.dim(); }
  int joint_index(JointLabel l) const { return l.system * hr_.dim() + l.molecule; }

  /// Full joint matrix on (k, j) -> k * d_r + j ordering.
  Matrix joint_matrix() const;

 private:
  HamiltonianSpec hs_, hr_;
  std::vector<SubspaceIndex> subspaces_;
  std::vector<Matrix> blocks_;
};

struct JointPopulation {
  Vector probs;
  int ds = 0, dr = 0;
  double operator()(int k, int j) const { return probs[k * dr + j]; }
};

JointPopulation product_state(const PopulationVector& p, const PopulationVector& r);
JointPopulation apply_blocks(const BlockChannel& ch, const JointPopulation& x);
PopulationVector system_marginal(const JointPopulation& x);

PopulationVector apply_collision(const BlockChannel& ch, const PopulationVector& p,
                                 const BathSpec& bath);
PopulationVector iterate_collisions(const BlockChannel& ch, const PopulationVector& p,
                                    const BathSpec& bath, int n);

/// Column-stochastic map on the system induced by one collision.
Matrix transfer_matrix(const BlockChannel& ch, const BathSpec& bath);

struct OptimalCollision {
  double p0_star = 0;  // summed over target levels
  BlockChannel witness;
};

/// Greedy optimum of the summed population on `targets` after one collision:
/// in each subspace the c largest joint populations are routed to the c
/// target labels it contains.
OptimalCollision optimal_single_collision(const PopulationVector& p, const HamiltonianSpec& hs,
                                          const HamiltonianSpec& hr, const BathSpec& bath,
                                          const std::set<int>& targets = {0});

/// Same objective, enumerating every permutation per subspace.
OptimalCollision exhaustive_single_collision(const PopulationVector& p, const HamiltonianSpec& hs,
                                             const HamiltonianSpec& hr, const BathSpec& bath,
                                             const std::set<int>& targets = {0},
                                             int max_subspace = 8);

bool validate_channel(const BlockChannel& ch, std::vector<std::string>* warnings = nullptr);

/// Permutation channel sending label l to dest(l); must be a bijection within subspaces.
BlockChannel assemble_permutation_channel(const HamiltonianSpec& hs, const HamiltonianSpec& hr,
                                          const std::function<JointLabel(JointLabel)>& dest);

void write_channel(std::ostream& out, const BlockChannel& ch);
BlockChannel read_channel(std::istream& in, const HamiltonianSpec& hs, const HamiltonianSpec& hr);

}  // namespace hbac
