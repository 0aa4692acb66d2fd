#include "hbac/nogo.hpp"

#include <algorithm>
#include <cmath>

namespace hbac {

namespace {

constexpr double kBoundTol = 1e-12;

}  // namespace

Premises check_premises(const HamiltonianSpec& hs, const HamiltonianSpec& hr, const PopulationVector& p,
                        const BathSpec& bath) {
  Premises pr;
  pr.r1 = hs.dim() >= hr.dim();
  pr.r2 = pr.r1;
  for (int j = 0; pr.r2 && j < hr.dim(); ++j)
    if (std::abs(hs.levels[j] * hs.unit - hr.levels[j] * hr.unit) > 1e-12 * std::max(1.0, hs.unit)) pr.r2 = false;
  pr.r3 = satisfies_R3(p, hs, bath);
  return pr;
}

NoGoVerdict verify_theorem2(const HamiltonianSpec& hs, const HamiltonianSpec& hr, const PopulationVector& p,
                            const BathSpec& bath) {
  NoGoVerdict v;
  v.premises = check_premises(hs, hr, p, bath);
  if (!v.premises.all())
    throw PremiseViolation(std::string("verify_theorem2: premises fail (R1=") + (v.premises.r1 ? "1" : "0") +
                           " R2=" + (v.premises.r2 ? "1" : "0") + " R3=" + (v.premises.r3 ? "1" : "0") + ")");
  auto opt = optimal_single_collision(p, hs, hr, bath);
  v.p0_star = opt.p0_star;
  v.tau0_S = gibbs(hs, bath)[0];
  v.bound_holds = v.p0_star <= v.tau0_S + kBoundTol;
  v.witness = std::move(opt.witness);
  return v;
}

NoGoVerdict verify_theorem3(const HamiltonianSpec& h, int mu, int nu, const PopulationVector& p,
                            const BathSpec& bath) {
  if (nu < 1 || mu < 1 || nu > mu) throw InvalidArgument("verify_theorem3: need 1 <= nu <= mu");
  const HamiltonianSpec hs = composite_hamiltonian(h, mu);
  const HamiltonianSpec hr = composite_hamiltonian(h, nu);
  if (p.dim() != hs.dim()) throw DimensionMismatch("verify_theorem3: population must live on the mu-copy system");
  NoGoVerdict v;
  v.premises = check_premises(hs, hr, p, bath);
  v.premises.r1 = true;  // nu <= mu
  if (!v.premises.r3) throw PremiseViolation("verify_theorem3: initial state violates R3");
  auto opt = optimal_single_collision(p, hs, hr, bath);
  v.p0_star = opt.p0_star;
  v.tau0_S = gibbs(hs, bath)[0];
  v.bound_holds = v.p0_star <= v.tau0_S + kBoundTol;
  v.witness = std::move(opt.witness);
  return v;
}

CounterexampleResult counterexample_r2(const BathSpec& bath) {
  const auto hs = HamiltonianSpec::equally_spaced(3, bath.unit);
  const auto hr = HamiltonianSpec::explicit_levels({0.0, 2.0}, bath.unit, "2E|1><1|");
  const auto ch = assemble_permutation_channel(hs, hr, [](JointLabel l) -> JointLabel {
    if (l == JointLabel{2, 0}) return {0, 1};
    if (l == JointLabel{0, 1}) return {2, 0};
    return l;
  });
  CounterexampleResult r;
  r.p0_out = apply_collision(ch, PopulationVector{0.0, 0.0, 1.0}, bath)[0];
  r.tau0_S = gibbs(hs, bath)[0];
  if (!(r.p0_out > r.tau0_S)) throw Error("counterexample_r2: output does not exceed tau0");
  return r;
}

PopulationVector product_population(const HamiltonianSpec& composite,
                                    const std::vector<PopulationVector>& singles) {
  if (composite.product_labels.empty()) throw InvalidArgument("product_population: composite spectrum required");
  if (static_cast<int>(singles.size()) != composite.copies)
    throw DimensionMismatch("product_population: one state per copy required");
  Vector p(composite.dim());
  for (int i = 0; i < composite.dim(); ++i) {
    double v = 1;
    for (int c = 0; c < composite.copies; ++c) v *= singles[c][composite.product_labels[i][c]];
    p[i] = v;
  }
  return PopulationVector(Vector(p / p.sum()));
}

PopulationVector product_population(const HamiltonianSpec& composite, const PopulationVector& single) {
  return product_population(composite, std::vector<PopulationVector>(composite.copies, single));
}

ThreeQubitResult three_qubit_example(double pbar0, const BathSpec& bath) {
  const double t0 = 1 / (1 + bath.q), t1 = bath.q / (1 + bath.q);
  if (!(pbar0 >= 0 && pbar0 <= t0 + 1e-15))
    throw InvalidArgument("three_qubit_example: need 0 <= pbar0 <= tau0 of the qubit");
  ThreeQubitResult r;
  const double p0_1 = t0 + t0 * t1 * (t0 - pbar0);
  r.p_ground_out = p0_1 * t0 * t0;
  r.tau0_S = t0 * t0 * t0;

  const auto h = HamiltonianSpec::equally_spaced(2, bath.unit);
  const auto h3 = composite_hamiltonian(h, 3);
  const PopulationVector a1{pbar0, 1 - pbar0};
  const PopulationVector th{t0, t1};
  const auto p = product_population(h3, {a1, th, th});
  auto index_of = [&](std::vector<int> lab) {
    return static_cast<int>(std::find(h3.product_labels.begin(), h3.product_labels.end(), lab) -
                            h3.product_labels.begin());
  };
  r.r3_violated = r3_pair_violated(p, h3, bath, index_of({1, 0, 0}), index_of({0, 1, 1}));
  r.oracle_p0_star = optimal_single_collision(p, h3, h3, bath).p0_star;
  if (pbar0 < t0 && !(r.p_ground_out > r.tau0_S))
    throw Error("three_qubit_example: no improvement over tau0");
  return r;
}

PopulationVector random_r3_state(const HamiltonianSpec& h, const BathSpec& bath, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vector e = h.energies();
  // one weight per distinct energy, sorted ascending
  std::vector<int> cls(h.dim());
  int ncls = 0;
  for (int k = 0; k < h.dim(); ++k) {
    if (k > 0 && h.levels[k] - h.levels[k - 1] > 1e-9) ++ncls;
    cls[k] = ncls;
  }
  std::vector<double> w(ncls + 1);
  for (auto& x : w) x = u(rng);
  std::sort(w.begin(), w.end());
  Vector p(h.dim());
  for (int k = 0; k < h.dim(); ++k) p[k] = w[cls[k]] * std::exp(-bath.beta * (e[k] - e[0]));
  if (p.sum() <= 0) p.setOnes();
  return PopulationVector(Vector(p / p.sum()));
}

std::vector<SweepInstance> nogo_sweep(const SweepConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SweepInstance> out;

  for (int n = 0; n < cfg.thm2_instances; ++n) {
    const int ds = 2 + static_cast<int>(u(rng) * (cfg.max_ds - 1));
    const int dr = 2 + static_cast<int>(u(rng) * (ds - 1));
    const BathSpec bath = BathSpec::from_q(0.1 + 0.8 * u(rng));
    std::vector<double> levels{0.0};
    const bool equal = u(rng) < 0.5;
    static const double gaps[] = {0.5, 1.0, 1.5, 2.0};
    for (int k = 1; k < ds; ++k) levels.push_back(levels.back() + (equal ? 1.0 : gaps[static_cast<int>(u(rng) * 4)]));
    const auto hs = HamiltonianSpec::explicit_levels(levels);
    const auto hr = HamiltonianSpec::explicit_levels(std::vector<double>(levels.begin(), levels.begin() + dr));
    const bool use_gibbs = n % 10 == 0;
    const auto p = use_gibbs ? gibbs(hs, bath) : random_r3_state(hs, bath, rng);
    out.push_back({"thm2", ds, dr, use_gibbs, verify_theorem2(hs, hr, p, bath), p, bath.q});
  }

  const BathSpec bath = BathSpec::from_q(cfg.q);
  const auto h = HamiltonianSpec::equally_spaced(2);
  for (int n = 0; n < cfg.thm3_instances; ++n) {
    const int mu = 1 + static_cast<int>(u(rng) * cfg.max_mu);
    const int nu = 1 + static_cast<int>(u(rng) * mu);
    const auto hs = composite_hamiltonian(h, mu);
    const bool use_gibbs = n % 10 == 0;
    const auto p = use_gibbs ? gibbs(hs, bath) : random_r3_state(hs, bath, rng);
    out.push_back({"thm3", mu, nu, use_gibbs, verify_theorem3(h, mu, nu, p, bath), p, bath.q});
  }
  return out;
}

}  // namespace hbac
