#pragma once

// Reference computations kept apart from the library: plain loops over joint
// labels, direct sums and exhaustive enumeration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = std::vector<double>;

inline Vec gibbs(const Vec& e, double beta) {
  Vec p(e.size());
  double z = 0;
  for (std::size_t i = 0; i < e.size(); ++i) z += p[i] = std::exp(-beta * (e[i] - e[0]));
  for (auto& x : p) x /= z;
  return p;
}

inline Vec ladder(int d, double unit = 1.0) {
  Vec e(d);
  for (int i = 0; i < d; ++i) e[i] = i * unit;
  return e;
}

// groups of joint indices k*dr + j sharing E_k + E_j (rounded to 1e-9)
inline std::vector<std::vector<int>> energy_groups(const Vec& es, const Vec& er) {
  std::map<long long, std::vector<int>> m;
  const int dr = static_cast<int>(er.size());
  for (int k = 0; k < static_cast<int>(es.size()); ++k)
    for (int j = 0; j < dr; ++j) m[std::llround((es[k] + er[j]) * 1e9)].push_back(k * dr + j);
  std::vector<std::vector<int>> out;
  for (auto& [key, v] : m) out.push_back(v);
  return out;
}

inline Vec product(const Vec& a, const Vec& b) {
  Vec x;
  for (double u : a)
    for (double v : b) x.push_back(u * v);
  return x;
}

// Largest total population on joint indices flagged by `target` over every
// permutation inside every group; throws past `cap` elements per group.
inline double exhaustive_best(const Vec& joint, const std::vector<std::vector<int>>& groups,
                              const std::function<bool(int)>& target, int cap = 9) {
  double total = 0;
  for (const auto& g : groups) {
    if (static_cast<int>(g.size()) > cap) throw std::runtime_error("exhaustive_best: group too large");
    std::vector<int> perm(g.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1;
    do {
      double s = 0;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (target(g[i])) s += joint[g[perm[i]]];
      best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    total += best;
  }
  return total;
}

// Same objective for groups too large to enumerate: a permutation can route
// any c entries onto the c target slots, so the best is the sum of the c largest.
inline double top_c_best(const Vec& joint, const std::vector<std::vector<int>>& groups,
                         const std::function<bool(int)>& target) {
  double total = 0;
  for (const auto& g : groups) {
    Vec vals;
    int c = 0;
    for (int i : g) {
      vals.push_back(joint[i]);
      c += target(i);
    }
    std::sort(vals.rbegin(), vals.rend());
    for (int i = 0; i < c; ++i) total += vals[i];
  }
  return total;
}

// Best ground population of the system after one round: every recharge
// permutation of the controlled levels followed by the best collision.
inline double single_round_brute(const Vec& controlled, const Vec& molecule, double beta,
                                 const std::function<bool(int)>& is_ground) {
  const Vec tau = gibbs(controlled, beta);
  const Vec taur = gibbs(molecule, beta);
  const auto groups = energy_groups(controlled, molecule);
  const int dr = static_cast<int>(molecule.size());
  std::vector<int> v(controlled.size());
  std::iota(v.begin(), v.end(), 0);
  double best = -1;
  do {
    Vec p(controlled.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[v[i]] = tau[i];
    best = std::max(best, exhaustive_best(product(p, taur), groups, [&](int idx) { return is_ground(idx / dr); }));
  } while (std::next_permutation(v.begin(), v.end()));
  return best;
}

// Ground population of the Protocol I fixed point.
inline double cooling_limit(int ds, int dr, double q) {
  if (dr == 3) return (1 - q * q) / (1 - std::pow(q, 2 * ds));
  const double a = std::pow(q, dr + 2);
  const int k = ds / 2;
  if (ds % 2 == 0) return (1 - a) / ((1 + std::pow(q, dr - 1)) * (1 - std::pow(a, k)));
  return 1 / ((1 + std::pow(q, dr - 1)) * (1 - std::pow(a, k)) / (1 - a) + std::pow(q, (dr + 2) * k - 1));
}

// Two-qubit collision on density matrices: U = 1 + block(u00 u01; u10 u11) + e^{i phi} on |11>,
// molecule thermal, partial trace over the molecule; repeated n times.
using C = std::complex<double>;
using CMat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;

inline Eigen::Matrix2cd qubit_collisions(const Eigen::Matrix2cd& rho, const Eigen::Matrix2cd& block, C phase11,
                                         double q, int n) {
  CMat u = CMat::Zero(4, 4);
  u(0, 0) = 1;
  u.block(1, 1, 2, 2) = block;
  u(3, 3) = phase11;
  Eigen::Matrix2cd tau = Eigen::Matrix2cd::Zero();
  tau(0, 0) = 1 / (1 + q);
  tau(1, 1) = q / (1 + q);
  Eigen::Matrix2cd r = rho;
  for (int step = 0; step < n; ++step) {
    CMat joint = CMat::Zero(4, 4);  // index 2 s + m
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) joint(2 * a + c, 2 * b + d) = r(a, b) * tau(c, d);
    const CMat out = u * joint * u.adjoint();
    Eigen::Matrix2cd next = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next(a, b) = out(2 * a, 2 * b) + out(2 * a + 1, 2 * b + 1);
    r = next;
  }
  return r;
}

}  // namespace oracle
