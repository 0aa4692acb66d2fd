#include "hbac/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace hbac {

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

const Matrix& g_a() {
  static const Matrix m = mat({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  return m;
}
const Matrix& g_b() {
  static const Matrix m = mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  return m;
}
const Matrix& sigma_x() {
  static const Matrix m = mat({{0, 1}, {1, 0}});
  return m;
}

Permutation from_swaps(int n, const std::vector<std::pair<int, int>>& swaps) {
  Eigen::VectorXi idx(n);
  std::iota(idx.data(), idx.data() + n, 0);
  for (auto [a, b] : swaps) std::swap(idx[a], idx[b]);
  return Permutation(idx);
}

/// Blocks keyed by integer joint energy; identity elsewhere.
BlockChannel channel_from_table(const HamiltonianSpec& hs, const HamiltonianSpec& hr,
                                const std::map<int, Matrix>& table) {
  auto subs = decompose_subspaces(hs, hr);
  std::vector<Matrix> blocks;
  for (const auto& s : subs) {
    auto it = table.find(static_cast<int>(std::lround(s.energy / hs.unit)));
    if (it == table.end()) {
      blocks.push_back(Matrix::Identity(s.size(), s.size()));
    } else {
      if (it->second.rows() != s.size())
        throw DimensionMismatch("channel_from_table: block size differs from subspace size");
      blocks.push_back(it->second);
    }
  }
  return BlockChannel(hs, hr, std::move(subs), std::move(blocks));
}

Permutation sm_flip() {
  // I_S (x) sigma_x on index 2s + m
  return from_swaps(6, {{0, 1}, {2, 3}, {4, 5}});
}

}  // namespace

Vector RoundSpec::system_marginal(const Vector& p) const {
  if (!machine) return p;
  const int dm = machine->dim();
  Vector out = Vector::Zero(system.dim());
  for (int s = 0; s < system.dim(); ++s) out[s] = p.segment(s * dm, dm).sum();
  return out;
}

HamiltonianSpec product_hamiltonian(const HamiltonianSpec& s, const HamiltonianSpec& m) {
  std::vector<double> levels;
  for (int a = 0; a < s.dim(); ++a)
    for (int b = 0; b < m.dim(); ++b) levels.push_back(s.levels[a] + m.levels[b]);
  // (s, m) order must be energy sorted so levels stay non-decreasing
  return HamiltonianSpec::explicit_levels(levels, s.unit, s.label + " x " + m.label);
}

Matrix permutation_matrix(const Permutation& p) {
  return p * Matrix::Identity(p.size(), p.size());
}

RoundSpec build_protocol_I_qutrit(int ds, const BathSpec& bath) {
  if (ds < 3) throw InvalidArgument("build_protocol_I_qutrit: d_S must be >= 3");
  const auto hs = HamiltonianSpec::equally_spaced(ds, bath.unit);
  const auto hr = HamiltonianSpec::equally_spaced(3, bath.unit);
  const int k = ds / 3, r = ds % 3;
  const Matrix i2 = Matrix::Identity(2, 2), i3 = Matrix::Identity(3, 3);

  std::vector<std::pair<int, int>> swaps;
  std::map<int, Matrix> t;
  if (r == 0) {
    for (int b = 0; b < k; ++b) swaps.push_back({3 * b + 1, 3 * b + 2});
    t[1] = i2;
    t[2] = g_a();
    t[3 * k] = sigma_x();
    for (int j = 1; j < k; ++j) {
      t[3 * j] = g_b();
      t[3 * j + 1] = i3;
      t[3 * j + 2] = g_a();
    }
  } else if (r == 1) {
    for (int b = 0; b < k; ++b) swaps.push_back({3 * b + 1, 3 * b + 2});
    t[1] = i2;
    t[2] = g_a();
    t[3] = g_b();
    for (int j = 1; j < k; ++j) {
      t[3 * j + 1] = i3;
      t[3 * j + 2] = g_a();
      t[3 * j + 3] = g_b();
    }
    t[3 * k + 1] = i2;
  } else {
    swaps.push_back({0, 1});
    for (int b = 0; b < k; ++b) swaps.push_back({2 + 3 * b + 1, 2 + 3 * b + 2});
    t[1] = sigma_x();
    t[3 * k + 2] = sigma_x();
    for (int j = 1; j <= k; ++j) {
      t[3 * j] = i3;
      t[3 * j - 1] = g_b();
      t[3 * j + 1] = g_a();
    }
  }
  return {"protocol-I-qutrit", hs, std::nullopt, hs, from_swaps(ds, swaps), channel_from_table(hs, hr, t)};
}

RoundSpec build_protocol_I_general(int ds, int dr, const BathSpec& bath) {
  if (dr < 4 || ds < dr) throw InvalidArgument("build_protocol_I_general: need 4 <= d_r <= d_S");
  const auto hs = HamiltonianSpec::equally_spaced(ds, bath.unit);
  const auto hr = HamiltonianSpec::equally_spaced(dr, bath.unit);
  const bool odd = ds % 2 == 1;

  std::vector<std::pair<int, int>> swaps;
  for (int a = 0; a + 1 < ds; a += 2) swaps.push_back({a, a + 1});
  const Permutation v = from_swaps(ds, swaps);

  // Molecule levels whose thermal weights make up each entry of the target
  // round matrix: sub-diagonal {d_r-1}, super-diagonal {0} or {d_r-4}, rest on the diagonal.
  auto super = [&](int l) -> int {
    if (odd && l == ds - 2) return dr - 3;
    return l % 2 == 0 ? 0 : dr - 4;
  };
  auto row_of = [&](int c, int j) -> int {
    if (c + 1 < ds && j == dr - 1) return c + 1;
    if (c >= 1 && j == super(c - 1)) return c - 1;
    return c;
  };

  const Eigen::VectorXi& idx = v.indices();
  auto dest = [&](JointLabel l) -> JointLabel {
    const int c = idx[l.system];  // V is an involution: V^{-1}(k) = V(k)
    const int row = row_of(c, l.molecule);
    return {row, l.system + l.molecule - row};
  };
  return {"protocol-I-general", hs, std::nullopt, hs, v, assemble_permutation_channel(hs, hr, dest)};
}

RoundSpec build_protocol_II_efficiency(const BathSpec& bath) {
  const auto hs = HamiltonianSpec::equally_spaced(3, bath.unit);
  const auto hm = HamiltonianSpec::equally_spaced(2, bath.unit);
  const auto hsm = product_hamiltonian(hs, hm);
  const auto hr = HamiltonianSpec::equally_spaced(3, bath.unit);
  auto lab = [](int s, int m, int r) { return JointLabel{2 * s + m, r}; };
  const std::vector<std::pair<JointLabel, JointLabel>> swaps{{lab(0, 0, 2), lab(1, 1, 0)},
                                                             {lab(1, 0, 2), lab(2, 1, 0)}};
  auto dest = [&](JointLabel l) {
    for (const auto& [a, b] : swaps) {
      if (l == a) return b;
      if (l == b) return a;
    }
    return l;
  };
  return {"protocol-II-efficiency", hs, hm, hsm, sm_flip(), assemble_permutation_channel(hsm, hr, dest)};
}

RoundSpec build_protocol_II_cooling_limit(const BathSpec& bath) {
  const auto hs = HamiltonianSpec::equally_spaced(3, bath.unit);
  const auto hm = HamiltonianSpec::equally_spaced(2, bath.unit);
  const auto hsm = product_hamiltonian(hs, hm);
  const auto hr = HamiltonianSpec::equally_spaced(3, bath.unit);
  std::map<int, Matrix> t;
  t[1] = mat({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
  t[2] = mat({{0, 1, 0, 0, 0}, {0, 0, 0, 1, 0}, {1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 0, 1}});
  t[3] = mat({{1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 0, 1}, {0, 1, 0, 0, 0}, {0, 0, 0, 1, 0}});
  t[4] = mat({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  return {"protocol-II-cooling-limit", hs, hm, hsm, sm_flip(), channel_from_table(hsm, hr, t)};
}

RoundSpec build_single_round_I(const BathSpec& bath) {
  const auto hs = HamiltonianSpec::equally_spaced(3, bath.unit);
  const auto hr = HamiltonianSpec::equally_spaced(3, bath.unit);
  const Permutation v = from_swaps(3, {{1, 2}});
  const PopulationVector after(Vector(v * gibbs(hs, bath).probs));
  auto opt = optimal_single_collision(after, hs, hr, bath, {0});
  return {"single-round-I", hs, std::nullopt, hs, v, std::move(opt.witness)};
}

RoundSpec build_single_round_II(const BathSpec& bath) {
  const auto hs = HamiltonianSpec::equally_spaced(3, bath.unit);
  const auto hm = HamiltonianSpec::equally_spaced(2, bath.unit);
  const auto hsm = product_hamiltonian(hs, hm);
  const auto hr = HamiltonianSpec::equally_spaced(3, bath.unit);
  const Permutation v = from_swaps(6, {{1, 3}});
  const PopulationVector after(Vector(v * gibbs(hsm, bath).probs));
  auto opt = optimal_single_collision(after, hsm, hr, bath, {0, 1});
  return {"single-round-II", hs, hm, hsm, v, std::move(opt.witness)};
}

RoundMatrix round_matrix(const RoundSpec& spec, const BathSpec& bath) {
  if (spec.recharge.size() != spec.controlled.dim())
    throw DimensionMismatch("round_matrix: recharge does not act on the controlled system");
  if (spec.thermalize.system().dim() != spec.controlled.dim())
    throw DimensionMismatch("round_matrix: thermalization does not act on the controlled system");
  if (!validate_channel(spec.thermalize)) throw InvalidArgument("round_matrix: invalid thermalization blocks");
  RoundMatrix rm{transfer_matrix(spec.thermalize, bath) * permutation_matrix(spec.recharge)};
  if (!is_column_stochastic(rm.g)) throw Error("round_matrix: result is not column-stochastic");
  return rm;
}

PopulationVector fixed_point(const RoundMatrix& g) {
  return PopulationVector(stationary_distribution(g.g));
}

std::vector<PopulationVector> trajectory(const RoundSpec& spec, const PopulationVector& p0, const BathSpec& bath,
                                         int n) {
  if (n < 0) throw InvalidArgument("trajectory: n must be >= 0");
  if (p0.dim() != spec.controlled.dim()) throw DimensionMismatch("trajectory: initial state dimension");
  const Matrix g = round_matrix(spec, bath).g;
  std::vector<PopulationVector> out{p0};
  out.reserve(n + 1);
  for (int i = 0; i < n; ++i) {
    Vector next = g * out.back().probs;
    next /= next.sum();
    out.emplace_back(std::move(next));
  }
  return out;
}

double cooling_limit(int ds, int dr, const BathSpec& bath) {
  const double q = bath.q;
  if (dr == 3 && ds >= 3) {
    const double a = std::pow(q, dr - 1);
    return (1 - a) / (1 - std::pow(a, ds));
  }
  if (dr >= 4 && ds >= dr) {
    const double a = std::pow(q, dr + 2);
    const int k = ds / 2;
    const double head = 1 + std::pow(q, dr - 1);
    if (ds % 2 == 0) return (1 - a) / (head * (1 - std::pow(a, k)));
    return 1 / (head * (1 - std::pow(a, k)) / (1 - a) + std::pow(q, (dr + 2) * k - 1));
  }
  throw InvalidArgument("cooling_limit: unsupported (d_S, d_r)");
}

double protocol_I_rate(const BathSpec& bath) {
  return 2 * bath.q / (1 + bath.q + bath.q * bath.q);
}

PopulationVector protocol_I_closed_form(const PopulationVector& p0, const BathSpec& bath, int n) {
  if (p0.dim() != 3) throw DimensionMismatch("protocol_I_closed_form: qutrit state required");
  if (n < 0) throw InvalidArgument("protocol_I_closed_form: n must be >= 0");
  if (n == 0) return p0;
  const double q = bath.q;
  Vector star(3);
  star << 1, q * q, q * q * q * q;
  star /= star.sum();
  const Vector d = p0.probs - star;
  Vector dir(3);
  dir << 1, q - 1, -q;
  const Vector delta = (q * d[0] - d[2]) / (1 + q + q * q) * dir;
  return PopulationVector(Vector(star + std::pow(protocol_I_rate(bath), n - 1) * delta));
}

ParityLimits parity_limits(const RoundSpec& spec, const PopulationVector& p0, const BathSpec& bath) {
  const Matrix g = round_matrix(spec, bath).g;
  const int n = static_cast<int>(g.rows());
  if (p0.dim() != n) throw DimensionMismatch("parity_limits: initial state dimension");

  // two-colour the support graph
  std::vector<int> colour(n, -1);
  colour[0] = 0;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int a = stack.back();
    stack.pop_back();
    for (int b = 0; b < n; ++b) {
      if (g(a, b) <= 0 && g(b, a) <= 0) continue;
      if (colour[b] < 0) {
        colour[b] = 1 - colour[a];
        stack.push_back(b);
      } else if (colour[b] == colour[a]) {
        throw InvalidArgument("parity_limits: round matrix is not period two");
      }
    }
  }
  if (std::count(colour.begin(), colour.end(), -1) != 0)
    throw InvalidArgument("parity_limits: support graph is disconnected");

  const Matrix g2 = g * g;
  std::vector<Vector> class_limit(2);
  for (int c = 0; c < 2; ++c) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (colour[i] == c) idx.push_back(i);
    Matrix sub(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = g2(idx[a], idx[b]);
    const Vector pi = stationary_distribution(sub);
    class_limit[c] = Vector::Zero(n);
    for (std::size_t a = 0; a < idx.size(); ++a) class_limit[c][idx[a]] = pi[a];
  }
  auto limit_from = [&](const Vector& p) {
    Vector out = Vector::Zero(n);
    for (int c = 0; c < 2; ++c) {
      double w = 0;
      for (int i = 0; i < n; ++i)
        if (colour[i] == c) w += p[i];
      out += w * class_limit[c];
    }
    return PopulationVector(Vector(out / out.sum()));
  };
  return {limit_from(p0.probs), limit_from(g * p0.probs)};
}

SingleRoundOptima single_round_optima(const BathSpec& bath) {
  const double q = bath.q;
  const double z = 1 + q + q * q;
  const double t0 = 1 / z, t1 = q / z, t2 = q * q / z;
  SingleRoundOptima o;
  o.p1_star_I = t0 + t0 * (t1 - t2);
  o.p1_star_II = o.p1_star_I;
  o.w1_I = q * bath.unit * (t0 - t1);
  o.w1_II = bath.unit * (t0 - t1) * q / (1 + q);
  if (!(o.w1_II < o.w1_I)) throw Error("single_round_optima: machine round does not save work");
  if (!(o.p1_star_II <= 1 / (1 + std::pow(q, 3) + std::pow(q, 6)) + 1e-15))
    throw Error("single_round_optima: bound 1/(1+q^3+q^6) violated");
  return o;
}

}  // namespace hbac
