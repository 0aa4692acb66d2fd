#include "hbac/collision.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace hbac {

std::vector<SubspaceIndex> decompose_subspaces(const HamiltonianSpec& hs, const HamiltonianSpec& hr,
                                               double degeneracy_tol) {
  if (!(degeneracy_tol > 0)) throw InvalidArgument("decompose_subspaces: tolerance must be > 0");
  struct Item {
    double e;
    JointLabel l;
  };
  std::vector<Item> items;
  for (int k = 0; k < hs.dim(); ++k)
    for (int j = 0; j < hr.dim(); ++j)
      items.push_back({hs.levels[k] * hs.unit + hr.levels[j] * hr.unit, {k, j}});
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.e < b.e; });

  std::vector<SubspaceIndex> out;
  for (const auto& it : items) {
    if (out.empty() || it.e - out.back().energy > degeneracy_tol * hs.unit)
      out.push_back({it.e, {}});
    out.back().basis.push_back(it.l);
  }
  for (auto& s : out) std::sort(s.basis.begin(), s.basis.end());
  return out;
}

BlockChannel::BlockChannel(HamiltonianSpec hs, HamiltonianSpec hr, std::vector<SubspaceIndex> subspaces,
                           std::vector<Matrix> blocks)
    : hs_(std::move(hs)), hr_(std::move(hr)), subspaces_(std::move(subspaces)), blocks_(std::move(blocks)) {
  if (subspaces_.size() != blocks_.size())
    throw DimensionMismatch("BlockChannel: one block per subspace required");
  int covered = 0;
  for (std::size_t s = 0; s < subspaces_.size(); ++s) {
    const int n = subspaces_[s].size();
    if (blocks_[s].rows() != n || blocks_[s].cols() != n)
      throw DimensionMismatch("BlockChannel: block " + std::to_string(s) + " does not match subspace size");
    covered += n;
  }
  if (covered != hs_.dim() * hr_.dim())
    throw DimensionMismatch("BlockChannel: subspaces do not cover the joint space");
}

BlockChannel BlockChannel::identity(const HamiltonianSpec& hs, const HamiltonianSpec& hr) {
  auto subs = decompose_subspaces(hs, hr);
  std::vector<Matrix> blocks;
  for (const auto& s : subs) blocks.push_back(Matrix::Identity(s.size(), s.size()));
  return BlockChannel(hs, hr, std::move(subs), std::move(blocks));
}

Matrix BlockChannel::joint_matrix() const {
  Matrix m = Matrix::Zero(joint_dim(), joint_dim());
  for (std::size_t s = 0; s < subspaces_.size(); ++s) {
    const auto& b = subspaces_[s].basis;
    for (std::size_t a = 0; a < b.size(); ++a)
      for (std::size_t c = 0; c < b.size(); ++c) m(joint_index(b[a]), joint_index(b[c])) = blocks_[s](a, c);
  }
  return m;
}

JointPopulation product_state(const PopulationVector& p, const PopulationVector& r) {
  JointPopulation x;
  x.ds = p.dim();
  x.dr = r.dim();
  x.probs.resize(x.ds * x.dr);
  for (int k = 0; k < x.ds; ++k)
    for (int j = 0; j < x.dr; ++j) x.probs[k * x.dr + j] = p[k] * r[j];
  return x;
}

JointPopulation apply_blocks(const BlockChannel& ch, const JointPopulation& x) {
  if (x.ds != ch.system().dim() || x.dr != ch.molecule().dim())
    throw DimensionMismatch("apply_blocks: joint population does not match channel");
  JointPopulation y = x;
  for (std::size_t s = 0; s < ch.subspaces().size(); ++s) {
    const auto& b = ch.subspaces()[s].basis;
    Vector old(b.size());
    for (std::size_t a = 0; a < b.size(); ++a) old[a] = x.probs[ch.joint_index(b[a])];
    const Vector nw = ch.blocks()[s] * old;
    for (std::size_t a = 0; a < b.size(); ++a) y.probs[ch.joint_index(b[a])] = nw[a];
  }
  return y;
}

PopulationVector system_marginal(const JointPopulation& x) {
  Vector p = Vector::Zero(x.ds);
  for (int k = 0; k < x.ds; ++k) p[k] = x.probs.segment(k * x.dr, x.dr).sum();
  return PopulationVector(p);
}

PopulationVector apply_collision(const BlockChannel& ch, const PopulationVector& p, const BathSpec& bath) {
  if (p.dim() != ch.system().dim()) throw DimensionMismatch("apply_collision: population/system dimension");
  return system_marginal(apply_blocks(ch, product_state(p, gibbs(ch.molecule(), bath))));
}

PopulationVector iterate_collisions(const BlockChannel& ch, const PopulationVector& p, const BathSpec& bath,
                                    int n) {
  if (n < 1) throw InvalidArgument("iterate_collisions: n must be >= 1");
  PopulationVector cur = p;
  for (int i = 0; i < n; ++i) cur = apply_collision(ch, cur, bath);
  return cur;
}

Matrix transfer_matrix(const BlockChannel& ch, const BathSpec& bath) {
  const int ds = ch.system().dim();
  const Vector tr = gibbs(ch.molecule(), bath).probs;
  Matrix g = Matrix::Zero(ds, ds);
  for (std::size_t s = 0; s < ch.subspaces().size(); ++s) {
    const auto& b = ch.subspaces()[s].basis;
    const Matrix& B = ch.blocks()[s];
    for (std::size_t c = 0; c < b.size(); ++c)
      for (std::size_t a = 0; a < b.size(); ++a) g(b[a].system, b[c].system) += B(a, c) * tr[b[c].molecule];
  }
  return g;
}

namespace {

void check_targets(const std::set<int>& targets, int ds) {
  if (targets.empty()) throw InvalidArgument("optimal_single_collision: empty target set");
  for (int t : targets)
    if (t < 0 || t >= ds) throw InvalidArgument("optimal_single_collision: target out of range");
}

Vector subspace_values(const SubspaceIndex& s, const Vector& p, const Vector& tr) {
  Vector v(s.size());
  for (int a = 0; a < s.size(); ++a) v[a] = p[s.basis[a].system] * tr[s.basis[a].molecule];
  return v;
}

}  // namespace

OptimalCollision optimal_single_collision(const PopulationVector& p, const HamiltonianSpec& hs,
                                          const HamiltonianSpec& hr, const BathSpec& bath,
                                          const std::set<int>& targets) {
  if (p.dim() != hs.dim()) throw DimensionMismatch("optimal_single_collision: population/system dimension");
  check_targets(targets, hs.dim());
  const Vector tr = gibbs(hr, bath).probs;
  auto subs = decompose_subspaces(hs, hr);
  std::vector<Matrix> blocks;
  double total = 0;
  for (const auto& s : subs) {
    const Vector v = subspace_values(s, p.probs, tr);
    std::vector<int> src(s.size());
    std::iota(src.begin(), src.end(), 0);
    std::stable_sort(src.begin(), src.end(), [&](int a, int b) { return v[a] > v[b]; });

    std::vector<int> dst_target, dst_other;
    for (int a = 0; a < s.size(); ++a)
      (targets.count(s.basis[a].system) ? dst_target : dst_other).push_back(a);
    std::vector<int> dst = dst_target;
    dst.insert(dst.end(), dst_other.begin(), dst_other.end());

    Matrix B = Matrix::Zero(s.size(), s.size());
    for (int r = 0; r < s.size(); ++r) B(dst[r], src[r]) = 1.0;
    for (std::size_t r = 0; r < dst_target.size(); ++r) total += v[src[r]];
    blocks.push_back(std::move(B));
  }
  return {total, BlockChannel(hs, hr, std::move(subs), std::move(blocks))};
}

OptimalCollision exhaustive_single_collision(const PopulationVector& p, const HamiltonianSpec& hs,
                                             const HamiltonianSpec& hr, const BathSpec& bath,
                                             const std::set<int>& targets, int max_subspace) {
  if (p.dim() != hs.dim()) throw DimensionMismatch("exhaustive_single_collision: population/system dimension");
  check_targets(targets, hs.dim());
  const Vector tr = gibbs(hr, bath).probs;
  auto subs = decompose_subspaces(hs, hr);
  for (const auto& s : subs)
    if (s.size() > max_subspace)
      throw CapExceeded("exhaustive_single_collision: subspace of size " + std::to_string(s.size()) +
                        " exceeds cap " + std::to_string(max_subspace));

  std::vector<Matrix> blocks;
  double total = 0;
  for (const auto& s : subs) {
    const Vector v = subspace_values(s, p.probs, tr);
    std::vector<int> perm(s.size()), best;
    std::iota(perm.begin(), perm.end(), 0);
    double best_val = -1;
    do {
      // perm[a] is the source feeding destination a
      double val = 0;
      for (int a = 0; a < s.size(); ++a)
        if (targets.count(s.basis[a].system)) val += v[perm[a]];
      if (val > best_val) {
        best_val = val;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    Matrix B = Matrix::Zero(s.size(), s.size());
    for (int a = 0; a < s.size(); ++a) B(a, best[a]) = 1.0;
    total += best_val;
    blocks.push_back(std::move(B));
  }
  return {total, BlockChannel(hs, hr, std::move(subs), std::move(blocks))};
}

bool validate_channel(const BlockChannel& ch, std::vector<std::string>* warnings) {
  bool ok = true;
  for (std::size_t s = 0; s < ch.blocks().size(); ++s) {
    const Matrix& B = ch.blocks()[s];
    if ((B.array() < -kStochasticTol).any()) ok = false;
    if (((B.rowwise().sum().array() - 1.0).abs() > kStochasticTol).any()) ok = false;
    if (((B.colwise().sum().array() - 1.0).abs() > kStochasticTol).any()) ok = false;
    if (!ok) break;
    if (warnings && B.rows() >= 3) {
      const bool is_perm = ((B.array().abs() < kStochasticTol) || ((B.array() - 1.0).abs() < kStochasticTol)).all();
      if (!is_perm)
        warnings->push_back("block " + std::to_string(s) +
                            ": non-permutation block of size >= 3; unitary realizability not guaranteed");
    }
  }
  return ok;
}

BlockChannel assemble_permutation_channel(const HamiltonianSpec& hs, const HamiltonianSpec& hr,
                                          const std::function<JointLabel(JointLabel)>& dest) {
  auto subs = decompose_subspaces(hs, hr);
  std::vector<Matrix> blocks;
  for (const auto& s : subs) {
    Matrix B = Matrix::Zero(s.size(), s.size());
    for (int c = 0; c < s.size(); ++c) {
      const JointLabel to = dest(s.basis[c]);
      auto it = std::find(s.basis.begin(), s.basis.end(), to);
      if (it == s.basis.end())
        throw InvalidArgument("assemble_permutation_channel: destination leaves the energy subspace");
      const int a = static_cast<int>(it - s.basis.begin());
      if (B.row(a).sum() != 0) throw InvalidArgument("assemble_permutation_channel: map is not a bijection");
      B(a, c) = 1.0;
    }
    blocks.push_back(std::move(B));
  }
  return BlockChannel(hs, hr, std::move(subs), std::move(blocks));
}

void write_channel(std::ostream& out, const BlockChannel& ch) {
  out << "subspaces " << ch.subspaces().size() << "\n";
  for (std::size_t s = 0; s < ch.subspaces().size(); ++s) {
    const auto& sub = ch.subspaces()[s];
    out << "energy " << format_double(sub.energy) << "\nbasis";
    for (const auto& l : sub.basis) out << " " << l.system << "," << l.molecule;
    out << "\n";
    for (int r = 0; r < sub.size(); ++r) {
      out << "row";
      for (int c = 0; c < sub.size(); ++c) out << " " << format_double(ch.blocks()[s](r, c));
      out << "\n";
    }
  }
}

BlockChannel read_channel(std::istream& in, const HamiltonianSpec& hs, const HamiltonianSpec& hr) {
  auto expect = [&](const std::string& word) {
    std::string w;
    if (!(in >> w) || w != word) throw IoError("read_channel: expected '" + word + "'");
  };
  std::size_t n = 0;
  expect("subspaces");
  if (!(in >> n)) throw IoError("read_channel: missing subspace count");
  std::vector<SubspaceIndex> subs;
  std::vector<Matrix> blocks;
  std::string line;
  for (std::size_t s = 0; s < n; ++s) {
    SubspaceIndex sub;
    expect("energy");
    if (!(in >> sub.energy)) throw IoError("read_channel: bad energy");
    expect("basis");
    std::getline(in, line);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      auto comma = tok.find(',');
      if (comma == std::string::npos) throw IoError("read_channel: bad basis label " + tok);
      sub.basis.push_back({std::stoi(tok.substr(0, comma)), std::stoi(tok.substr(comma + 1))});
    }
    Matrix B(sub.size(), sub.size());
    for (int r = 0; r < sub.size(); ++r) {
      expect("row");
      for (int c = 0; c < sub.size(); ++c)
        if (!(in >> B(r, c))) throw IoError("read_channel: bad block entry");
    }
    subs.push_back(std::move(sub));
    blocks.push_back(std::move(B));
  }
  return BlockChannel(hs, hr, std::move(subs), std::move(blocks));
}

}  // namespace hbac
