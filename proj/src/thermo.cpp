#include "hbac/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbac {

double work_per_round(const RoundSpec& spec, const PopulationVector& p_before) {
  if (p_before.dim() != spec.controlled.dim()) throw DimensionMismatch("work_per_round: state dimension");
  const Vector vp = spec.recharge * p_before.probs;
  return (vp - p_before.probs).dot(spec.controlled.energies());
}

double energy_reduction_per_round(const PopulationVector& p_before_S, const PopulationVector& p_after_S,
                                  const HamiltonianSpec& hS) {
  if (p_before_S.dim() != hS.dim() || p_after_S.dim() != hS.dim())
    throw DimensionMismatch("energy_reduction_per_round: state dimension");
  return (p_before_S.probs - p_after_S.probs).dot(hS.energies());
}

double heat_to_bath(const RoundSpec& spec, const PopulationVector& p_before, const BathSpec& bath) {
  const PopulationVector recharged(Vector(spec.recharge * p_before.probs));
  const PopulationVector tr = gibbs(spec.molecule(), bath);
  const JointPopulation after = apply_blocks(spec.thermalize, product_state(recharged, tr));
  const int dr = after.dr;
  Vector mol = Vector::Zero(dr);
  for (int k = 0; k < after.ds; ++k) mol += after.probs.segment(k * dr, dr);
  return (mol - tr.probs).dot(spec.molecule().energies());
}

CoolingLedger::CoolingLedger(Vector system_energies, Vector controlled_energies, Vector initial_system)
    : system_energies_(std::move(system_energies)),
      controlled_energies_(std::move(controlled_energies)),
      initial_system_(std::move(initial_system)) {}

void CoolingLedger::append(RoundRecord r) {
  if (r.n != size() + 1) throw InvalidArgument("CoolingLedger: rounds must be appended contiguously from 1");
  rounds_.push_back(std::move(r));
}

double CoolingLedger::cumulative_work(int n) const {
  if (n < 0 || n > size()) throw InvalidArgument("CoolingLedger: round index out of range");
  double s = 0;
  for (int i = 0; i < n; ++i) s += rounds_[i].work;
  return s;
}

double CoolingLedger::cumulative_reduction(int n) const {
  if (n < 0 || n > size()) throw InvalidArgument("CoolingLedger: round index out of range");
  double s = 0;
  for (int i = 0; i < n; ++i) s += rounds_[i].energy_reduction;
  return s;
}

double CoolingLedger::min_work() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& r : rounds_) w = std::min(w, r.work);
  return w;
}

CoolingLedger run_ledger(const RoundSpec& spec, const PopulationVector& p0, const BathSpec& bath, int rounds) {
  if (rounds < 0) throw InvalidArgument("run_ledger: rounds must be >= 0");
  const Matrix g = round_matrix(spec, bath).g;
  CoolingLedger ledger(spec.system.energies(), spec.controlled.energies(), spec.system_marginal(p0.probs));
  PopulationVector cur = p0;
  for (int n = 1; n <= rounds; ++n) {
    RoundRecord r;
    r.n = n;
    r.work = work_per_round(spec, cur);
    r.heat = heat_to_bath(spec, cur, bath);
    Vector next = g * cur.probs;
    next /= next.sum();
    const PopulationVector before_s(spec.system_marginal(cur.probs));
    cur = PopulationVector(next);
    const PopulationVector after_s(spec.system_marginal(cur.probs));
    r.energy_reduction = energy_reduction_per_round(before_s, after_s, spec.system);
    r.populations = cur.probs;
    r.system_populations = after_s.probs;
    ledger.append(std::move(r));
  }
  return ledger;
}

double cumulative_cop(const CoolingLedger& ledger, int n) {
  if (n < 1 || n > ledger.size()) throw InvalidArgument("cumulative_cop: n outside recorded rounds");
  const double w = ledger.cumulative_work(n);
  if (!(w > 0)) throw UndefinedCop("cumulative_cop: cumulative work is not positive", w);
  return ledger.cumulative_reduction(n) / w;
}

double xhbac_first_round_work(int ds, const BathSpec& bath) {
  if (ds < 2) throw InvalidArgument("xhbac_first_round_work: d_S must be >= 2");
  const double q = bath.q;
  const double qd = std::pow(q, ds);
  return (ds - 1 - 2 * q / (1 - q) + 2 * ds * qd / (1 - qd)) * bath.unit;
}

}  // namespace hbac
