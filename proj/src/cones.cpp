#include "hbac/cones.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>

#include "hbac/collision.hpp"
#include "hbac/geometry.hpp"

namespace hbac {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_phase(double a) {
  a = std::remainder(a, 2 * kPi);
  return a <= -kPi ? a + 2 * kPi : a;
}

}  // namespace

BlochState::BlochState(double eta_, double phi_, double z_) : eta(eta_), phi(phi_), z(z_) {
  if (!(eta >= 0)) throw InvalidArgument("BlochState: eta must be >= 0");
  if (!(z >= -1 && z <= 1)) throw InvalidArgument("BlochState: z outside [-1, 1]");
  if (eta * eta + z * z > 1 + 1e-12) throw InvalidArgument("BlochState: outside the Bloch ball");
}

QubitCollisionParams::QubitCollisionParams(double u, double a, int n_) : u00_abs(u), alpha(a), n(n_) {
  if (!(u >= 0 && u <= 1)) throw InvalidArgument("QubitCollisionParams: |u00| outside [0, 1]");
  if (n < 1) throw InvalidArgument("QubitCollisionParams: n must be >= 1");
}

double z_gibbs(const BathSpec& bath) { return (1 - bath.q) / (1 + bath.q); }

std::pair<double, double> QubitCone::z_range() const {
  return {std::min(z_tau, z_in), std::max(z_tau, z_in)};
}

std::pair<double, double> QubitCone::eta_bounds(double z_out) const {
  if (z_in == z_tau) {
    if (z_out != z_tau) throw InvalidArgument("QubitCone: z' must equal z_tau");
    return {0.0, eta_in};
  }
  const double ratio = (z_out - z_tau) / (z_in - z_tau);
  if (ratio < -1e-15 || ratio > 1 + 1e-15) throw InvalidArgument("QubitCone: z' outside admissible range");
  const double root = std::sqrt(std::clamp(ratio, 0.0, 1.0));
  const double hi = eta_in * root;
  const double lo = collisions ? eta_in * std::pow(z_tau, *collisions) * root : 0.0;
  return {lo, hi};
}

bool QubitCone::contains(double z_out, double eta_out, double tol) const {
  auto [zlo, zhi] = z_range();
  if (z_out < zlo - tol || z_out > zhi + tol) return false;
  if (z_in == z_tau) return eta_out >= -tol && eta_out <= eta_in + tol;
  // tol is a box distance: the eta bounds are steep near z_tau, so pick the
  // most favourable z' within tol of z_out
  const double sgn = z_in > z_tau ? 1.0 : -1.0;
  const double hi = eta_bounds(std::clamp(z_out + sgn * tol, zlo, zhi)).second;
  const double lo = eta_bounds(std::clamp(z_out - sgn * tol, zlo, zhi)).first;
  return eta_out >= lo - tol && eta_out <= hi + tol;
}

QubitCone qubit_cone(const BlochState& b, const BathSpec& bath, int n) {
  if (n < 1) throw InvalidArgument("qubit_cone: n must be >= 1");
  return {z_gibbs(bath), b.z, b.eta, n};
}

QubitCone mto_qubit_cone(const BlochState& b, const BathSpec& bath) {
  return {z_gibbs(bath), b.z, b.eta, std::nullopt};
}

BlochState qubit_collision_output(const BlochState& b, const QubitCollisionParams& params,
                                  const BathSpec& bath) {
  const double tau0 = 1 / (1 + bath.q);
  const double zt = z_gibbs(bath);
  const double un = std::pow(params.u00_abs, params.n);
  const std::complex<double> c = (1 - tau0) + tau0 * std::polar(1.0, params.alpha);
  BlochState out;
  out.z = zt + un * un * (b.z - zt);
  out.eta = b.eta * un * std::pow(std::abs(c), params.n);
  // rho01 = eta e^{-i phi} is multiplied by c^N
  out.phi = wrap_phase(b.phi - params.n * std::arg(c));
  return out;
}

std::string to_string(BetaSubset s) {
  static const char* names[] = {"I", "II", "III", "IV", "V", "VI"};
  return names[static_cast<int>(s)];
}

BetaSubset classify_beta_subset(const PopulationVector& p, const BathSpec& bath) {
  if (p.dim() != 3) throw InvalidArgument("classify_beta_subset: qutrit population required");
  const auto pi = beta_ordering(p, HamiltonianSpec::equally_spaced(3, bath.unit), bath);
  static const std::array<std::pair<std::array<int, 3>, BetaSubset>, 6> table{{
      {{0, 1, 2}, BetaSubset::I},
      {{2, 1, 0}, BetaSubset::II},
      {{1, 0, 2}, BetaSubset::III},
      {{2, 0, 1}, BetaSubset::IV},
      {{1, 2, 0}, BetaSubset::V},
      {{0, 2, 1}, BetaSubset::VI},
  }};
  for (const auto& [order, s] : table)
    if (order[0] == pi[0] && order[1] == pi[1] && order[2] == pi[2]) return s;
  throw Error("classify_beta_subset: unreachable ordering");
}

bool QutritParams::admissible(double tol) const {
  const double entries[] = {a1, 1 - a1, a3, 1 - a3, a2, b2, 1 - a2 - b2, a2p, b2p, 1 - a2p - b2p,
                            1 - a2 - a2p, 1 - b2 - b2p, a2 + b2 + a2p + b2p - 1};
  return std::all_of(std::begin(entries), std::end(entries), [&](double e) { return e >= -tol; });
}

Matrix QutritParams::g1() const {
  Matrix g(2, 2);
  g << a1, 1 - a1, 1 - a1, a1;
  return g;
}

Matrix QutritParams::g2() const {
  Matrix g(3, 3);
  g << a2, b2, 1 - a2 - b2,
       a2p, b2p, 1 - a2p - b2p,
       1 - a2 - a2p, 1 - b2 - b2p, a2 + b2 + a2p + b2p - 1;
  return g;
}

Matrix QutritParams::g3() const {
  Matrix g(2, 2);
  g << a3, 1 - a3, 1 - a3, a3;
  return g;
}

PopulationVector qutrit_collision_output(const PopulationVector& p, const QutritParams& c,
                                         const BathSpec& bath) {
  if (p.dim() != 3) throw InvalidArgument("qutrit_collision_output: qutrit population required");
  if (!c.admissible()) throw InvalidArgument("qutrit_collision_output: parameters give negative block entries");
  const double q = bath.q;
  const double z = 1 + q + q * q;
  const double t0 = 1 / z, t1 = q / z, t2 = q * q / z;
  const double x = t1 * p[0] - t0 * p[1];
  const double y = t1 * p[1] - t0 * p[2];
  const double s2 = c.a2 + c.b2 + c.a2p + c.b2p - 1;
  Vector out(3);
  out[0] = t0 + (c.a1 + q * c.a2) * x + (c.a2 + c.b2) * y;
  out[1] = t1 + (c.a1 - q * c.a2p) * (-x) + (1 - c.a2p - c.b2p - q * c.a3) * (-y);
  out[2] = t2 + q * (c.a2 + c.a2p) * (-x) + (s2 + q * c.a3) * (-y);
  return PopulationVector(out);
}

QutritCone qutrit_cone_subsetV(const PopulationVector& p, const BathSpec& bath) {
  if (p.dim() != 3) throw InvalidArgument("qutrit_cone_subsetV: qutrit population required");
  const BetaSubset s = classify_beta_subset(p, bath);
  if (s != BetaSubset::V)
    throw WrongSubset("qutrit_cone_subsetV: state lies in subset " + to_string(s) +
                      "; use qutrit_cone_vertices");
  const double q = bath.q;
  const double z = 1 + q + q * q;
  const double t0 = 1 / z, t1 = q / z, t2 = q * q / z;
  QutritCone cone;
  const double p0lo = p[0], p0hi = t0 + (t1 * p[1] - t0 * p[2]);
  const double p1lo = t1 - (t1 * p[1] - t2 * p[0]), p1hi = p[1];
  const double p2lo = p[2] - (t0 * p[2] - t2 * p[0]), p2hi = t2 + (t1 * p[1] - t2 * p[0]);
  cone.intervals = {{{p0lo, p0hi}, {p1lo, p1hi}, {p2lo, p2hi}}};
  auto pt = [](double a, double b, double c) { return Vector((Vector(3) << a, b, c).finished()); };
  cone.extreme_points = {
      pt(p0lo, p1hi, 1 - p0lo - p1hi), pt(p0lo, 1 - p0lo - p2hi, p2hi),
      pt(1 - p1lo - p2hi, p1lo, p2hi), pt(p0hi, p1lo, 1 - p1lo - p0hi),
      pt(p0hi, 1 - p0hi - p2lo, p2lo), pt(1 - p1hi - p2lo, p1hi, p2lo),
  };
  return cone;
}

std::vector<QutritParams> qutrit_vertex_params() {
  std::vector<QutritParams> out;
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  for (int a1 = 1; a1 >= 0; --a1)
    for (int a3 = 1; a3 >= 0; --a3)
      for (const auto& P : perms) {
        // row i of G2 is the unit vector e_{P[i]}
        QutritParams c;
        c.a1 = a1;
        c.a3 = a3;
        c.a2 = P[0] == 0;
        c.b2 = P[0] == 1;
        c.a2p = P[1] == 0;
        c.b2p = P[1] == 1;
        out.push_back(c);
      }
  return out;
}

namespace {

std::vector<Vector> lift_hull(const std::vector<Vector>& pts) {
  std::vector<Point2> flat;
  flat.reserve(pts.size());
  for (const auto& v : pts) flat.emplace_back(v[0], v[2]);
  std::vector<Vector> out;
  for (const auto& h : convex_hull(flat)) out.push_back((Vector(3) << h.x(), 1 - h.x() - h.y(), h.y()).finished());
  return out;
}

}  // namespace

QutritCone qutrit_cone_vertices(const PopulationVector& p, const BathSpec& bath) {
  std::vector<Vector> outs;
  for (const auto& c : qutrit_vertex_params()) outs.push_back(qutrit_collision_output(p, c, bath).probs);
  QutritCone cone;
  for (int i = 0; i < 3; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : outs) {
      lo = std::min(lo, v[i]);
      hi = std::max(hi, v[i]);
    }
    cone.intervals[i] = {lo, hi};
  }
  cone.extreme_points = lift_hull(outs);
  return cone;
}

std::pair<QutritParams, double> reach_point(const PopulationVector& p, const Vector& target,
                                            const BathSpec& bath) {
  std::pair<QutritParams, double> best{{}, std::numeric_limits<double>::infinity()};
  for (const auto& c : qutrit_vertex_params()) {
    const double err = (qutrit_collision_output(p, c, bath).probs - target).cwiseAbs().maxCoeff();
    if (err < best.second) best = {c, err};
  }
  return best;
}

PopulationVector partial_thermalization(const PopulationVector& p, int i, int j, double lambda,
                                        const BathSpec& bath) {
  if (i == j || i < 0 || j < 0 || i >= p.dim() || j >= p.dim())
    throw InvalidArgument("partial_thermalization: bad level pair");
  if (!(lambda >= 0 && lambda <= 1)) throw InvalidArgument("partial_thermalization: lambda outside [0, 1]");
  const double wi = std::pow(bath.q, i), wj = std::pow(bath.q, j);
  const double s = p[i] + p[j];
  Vector out = p.probs;
  out[i] = p[i] + lambda * (s * wi / (wi + wj) - p[i]);
  out[j] = s - out[i];
  return PopulationVector(out);
}

std::vector<PopulationVector> mto_qutrit_inner_bound(const PopulationVector& p, const BathSpec& bath,
                                                     int budget, std::uint64_t seed, int samples) {
  if (p.dim() != 3) throw InvalidArgument("mto_qutrit_inner_bound: qutrit population required");
  if (budget < 0) throw InvalidArgument("mto_qutrit_inner_bound: budget must be >= 0");
  if (budget == 0) return {p};
  static const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<Vector> pts{p.probs};

  // exhaustive full thermalizations of one pair per step
  std::vector<PopulationVector> frontier{p};
  for (int step = 0; step < budget && frontier.size() <= 100000; ++step) {
    std::vector<PopulationVector> next;
    for (const auto& s : frontier)
      for (const auto& pr : pairs) {
        next.push_back(partial_thermalization(s, pr[0], pr[1], 1.0, bath));
        pts.push_back(next.back().probs);
      }
    frontier = std::move(next);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<int> len(1, budget);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    PopulationVector cur = p;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      const auto& pr = pairs[pick(rng)];
      cur = partial_thermalization(cur, pr[0], pr[1], lam(rng), bath);
    }
    pts.push_back(cur.probs);
  }

  std::vector<PopulationVector> out;
  for (const auto& v : lift_hull(pts)) {
    Vector w = v.cwiseMax(0.0);
    out.emplace_back(Vector(w / w.sum()));
  }
  return out;
}

}  // namespace hbac
