#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hbac/spectra.hpp"

namespace hbac {

/// Qubit Bloch vector (eta cos phi, eta sin phi, z) with z = p0 - p1.
struct BlochState {
  double eta = 0;
  double phi = 0;
  double z = 0;

  BlochState() = default;
  BlochState(double eta, double phi, double z);
};

struct QubitCollisionParams {
  double u00_abs = 1;
  double alpha = 0;
  int n = 1;

  QubitCollisionParams() = default;
  QubitCollisionParams(double u00_abs, double alpha, int n);
};

/// Reachable (z', eta') region of a qubit. `collisions` is empty for the
/// Markovian (infinite-collision) cone.
struct QubitCone {
  double z_tau = 0;
  double z_in = 0;
  double eta_in = 0;
  std::optional<int> collisions;

  /// Admissible z' interval (lo, hi).
  std::pair<double, double> z_range() const;
  /// (eta_min, eta_max) at z'; throws InvalidArgument outside z_range.
  std::pair<double, double> eta_bounds(double z_out) const;
  /// Within box distance tol of the region.
  bool contains(double z_out, double eta_out, double tol) const;
};

struct QutritCone {
  std::array<std::pair<double, double>, 3> intervals{};
  std::vector<Vector> extreme_points;
};

using ConeRegion = std::variant<QubitCone, QutritCone>;

double z_gibbs(const BathSpec& bath);

QubitCone qubit_cone(const BlochState& b, const BathSpec& bath, int n);
QubitCone mto_qubit_cone(const BlochState& b, const BathSpec& bath);
BlochState qubit_collision_output(const BlochState& b, const QubitCollisionParams& params,
                                  const BathSpec& bath);

enum class BetaSubset { I, II, III, IV, V, VI };
std::string to_string(BetaSubset s);

BetaSubset classify_beta_subset(const PopulationVector& p, const BathSpec& bath);

/// Parameters of the single-collision qutrit blocks G1, G2, G3.
struct QutritParams {
  double a1 = 1, a2 = 1, b2 = 0, a2p = 0, b2p = 1, a3 = 1;

  bool admissible(double tol = 1e-12) const;
  Matrix g1() const;
  Matrix g2() const;
  Matrix g3() const;
};

PopulationVector qutrit_collision_output(const PopulationVector& p, const QutritParams& params,
                                         const BathSpec& bath);

/// Closed-form cone for states whose beta-ordering is (1,2,0).
/// Extreme points are returned in the order A0..A5.
QutritCone qutrit_cone_subsetV(const PopulationVector& p, const BathSpec& bath);

/// Cone for any qutrit state from the 24 vertex parameter tuples (a1, a3 in
/// {0,1}, G2 a permutation); extreme points are the hull vertices.
QutritCone qutrit_cone_vertices(const PopulationVector& p, const BathSpec& bath);

/// The 24 vertex tuples of the admissible parameter polytope.
std::vector<QutritParams> qutrit_vertex_params();

/// Vertex tuple whose output is closest to `target` (sup norm).
std::pair<QutritParams, double> reach_point(const PopulationVector& p, const Vector& target,
                                            const BathSpec& bath);

/// Move levels (i, j) toward their mutual Gibbs ratio by fraction lambda.
PopulationVector partial_thermalization(const PopulationVector& p, int i, int j, double lambda,
                                        const BathSpec& bath);

/// Inner approximation of the Markovian qutrit population cone: hull vertices
/// over random and exhaustive full-swap sequences of at most `budget` steps.
std::vector<PopulationVector> mto_qutrit_inner_bound(const PopulationVector& p, const BathSpec& bath,
                                                     int budget, std::uint64_t seed = 1,
                                                     int samples = 100000);

}  // namespace hbac
