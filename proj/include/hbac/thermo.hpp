#pragma once

#include <vector>

#include "hbac/protocols.hpp"

namespace hbac {

/// W = (V p - p) . H_controlled.
double work_per_round(const RoundSpec& spec, const PopulationVector& p_before);

/// -dU = (p_before - p_after) . H_S.
double energy_reduction_per_round(const PopulationVector& p_before_S, const PopulationVector& p_after_S,
                                  const HamiltonianSpec& hS);

/// Energy the molecule carries away during the collision of one round.
double heat_to_bath(const RoundSpec& spec, const PopulationVector& p_before, const BathSpec& bath);

struct RoundRecord {
  int n = 0;
  double work = 0;
  double energy_reduction = 0;
  double heat = 0;
  Vector populations;         // controlled system after the round
  Vector system_populations;  // S marginal after the round
};

class CoolingLedger {
 public:
  CoolingLedger(Vector system_energies, Vector controlled_energies, Vector initial_system);

  void append(RoundRecord r);
  const std::vector<RoundRecord>& rounds() const { return rounds_; }
  int size() const { return static_cast<int>(rounds_.size()); }

  double cumulative_work(int n) const;
  double cumulative_reduction(int n) const;
  double initial_energy() const { return initial_system_.dot(system_energies_); }
  double min_work() const;

  const Vector& system_energies() const { return system_energies_; }
  const Vector& controlled_energies() const { return controlled_energies_; }

 private:
  Vector system_energies_, controlled_energies_, initial_system_;
  std::vector<RoundRecord> rounds_;
};

CoolingLedger run_ledger(const RoundSpec& spec, const PopulationVector& p0, const BathSpec& bath, int rounds);

/// K^(N) = sum(-dU) / sum(W) over the first n rounds.
double cumulative_cop(const CoolingLedger& ledger, int n);

double xhbac_first_round_work(int ds, const BathSpec& bath);

}  // namespace hbac
