#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hbac/types.hpp"

namespace hbac {

/// Diagonal spectrum with levels in units of a reference gap `unit`.
struct HamiltonianSpec {
  std::vector<double> levels;
  double unit = 1.0;
  std::string label;
  std::string kind = "explicit";

  // Composite bookkeeping: level i came from product label product_labels[i].
  std::vector<double> base_levels;
  int copies = 1;
  std::vector<std::vector<int>> product_labels;

  static HamiltonianSpec equally_spaced(int d, double unit = 1.0);
  static HamiltonianSpec explicit_levels(std::vector<double> levels, double unit = 1.0,
                                         std::string label = {});

  int dim() const { return static_cast<int>(levels.size()); }
  /// Absolute energies E_j = levels[j] * unit.
  Vector energies() const;
  void validate() const;
};

struct BathSpec {
  double beta = 1.0;
  double q = 0.0;
  double unit = 1.0;

  static BathSpec from_beta(double beta, double unit = 1.0);
  static BathSpec from_q(double q, double unit = 1.0);
};

struct PopulationVector {
  Vector probs;

  PopulationVector() = default;
  explicit PopulationVector(Vector p);
  PopulationVector(std::initializer_list<double> p);

  int dim() const { return static_cast<int>(probs.size()); }
  double operator[](int i) const { return probs[i]; }
};

HamiltonianSpec composite_hamiltonian(const HamiltonianSpec& h, int copies, int cap = 4096);

PopulationVector gibbs(const HamiltonianSpec& h, const BathSpec& bath);

/// Weighted populations p_k e^{beta (E_k - E_0)}.
Vector beta_weights(const PopulationVector& p, const HamiltonianSpec& h, const BathSpec& bath);

std::vector<int> beta_ordering(const PopulationVector& p, const HamiltonianSpec& h,
                               const BathSpec& bath);

bool satisfies_R3(const PopulationVector& p, const HamiltonianSpec& h, const BathSpec& bath);

/// Whether the pair violates R3: E_k <= E_k2 but p_k e^{beta E_k} > p_k2 e^{beta E_k2}.
/// Degenerate levels must therefore carry equal weights.
bool r3_pair_violated(const PopulationVector& p, const HamiltonianSpec& h, const BathSpec& bath,
                      int k, int k2);

/// First violating pair (k, k2) with E_k <= E_k2, if any.
std::optional<std::pair<int, int>> r3_witness(const PopulationVector& p, const HamiltonianSpec& h,
                                              const BathSpec& bath);

// key = value configs
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config(std::istream& in);
HamiltonianSpec hamiltonian_from_config(const ConfigMap& cfg);
BathSpec bath_from_config(const ConfigMap& cfg);
void write_config(std::ostream& out, const HamiltonianSpec& h, const BathSpec& bath);

std::string format_double(double x);

}  // namespace hbac
