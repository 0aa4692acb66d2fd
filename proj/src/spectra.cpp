#include "hbac/spectra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace hbac {

namespace {

constexpr double kLevelTol = 1e-9;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("config key '" + key + "': not a number: " + text);
  }
  if (used != text.size()) throw InvalidArgument("config key '" + key + "': trailing text: " + text);
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)));
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

HamiltonianSpec HamiltonianSpec::equally_spaced(int d, double unit) {
  if (d < 2) throw InvalidArgument("equally_spaced: d must be >= 2");
  HamiltonianSpec h;
  h.levels.resize(d);
  for (int j = 0; j < d; ++j) h.levels[j] = j;
  h.unit = unit;
  h.kind = "equally_spaced";
  h.label = "H^(" + std::to_string(d) + ")";
  h.validate();
  return h;
}

HamiltonianSpec HamiltonianSpec::explicit_levels(std::vector<double> levels, double unit,
                                                 std::string label) {
  HamiltonianSpec h;
  h.levels = std::move(levels);
  h.unit = unit;
  h.label = std::move(label);
  h.kind = "explicit";
  h.validate();
  return h;
}

Vector HamiltonianSpec::energies() const {
  Vector e(dim());
  for (int j = 0; j < dim(); ++j) e[j] = levels[j] * unit;
  return e;
}

void HamiltonianSpec::validate() const {
  if (levels.size() < 2) throw InvalidArgument("HamiltonianSpec: need at least two levels");
  if (!(unit > 0) || !std::isfinite(unit)) throw InvalidArgument("HamiltonianSpec: unit must be positive");
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (!std::isfinite(levels[j])) throw InvalidArgument("HamiltonianSpec: non-finite level");
    if (j > 0 && levels[j] < levels[j - 1])
      throw InvalidArgument("HamiltonianSpec: levels must be sorted non-decreasing");
  }
}

BathSpec BathSpec::from_beta(double beta, double unit) {
  if (!(beta > 0) || !std::isfinite(beta)) throw InvalidArgument("BathSpec: beta must be > 0");
  if (!(unit > 0)) throw InvalidArgument("BathSpec: unit must be > 0");
  BathSpec b;
  b.beta = beta;
  b.unit = unit;
  b.q = std::exp(-beta * unit);
  if (!(b.q > 0 && b.q < 1)) throw InvalidArgument("BathSpec: q = exp(-beta E) outside (0,1)");
  return b;
}

BathSpec BathSpec::from_q(double q, double unit) {
  if (!(q > 0 && q < 1)) throw InvalidArgument("BathSpec: q must lie in (0,1)");
  if (!(unit > 0)) throw InvalidArgument("BathSpec: unit must be > 0");
  BathSpec b;
  b.q = q;
  b.unit = unit;
  b.beta = -std::log(q) / unit;
  return b;
}

PopulationVector::PopulationVector(Vector p) : probs(std::move(p)) {
  if (probs.size() < 1) throw InvalidArgument("PopulationVector: empty");
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i])) throw InvalidArgument("PopulationVector: non-finite entry");
    if (probs[i] < 0) {
      if (probs[i] >= -kClampTol) probs[i] = 0;
      else throw InvalidArgument("PopulationVector: negative entry " + format_double(probs[i]));
    }
  }
  if (std::abs(probs.sum() - 1.0) > kNormalizationTol)
    throw InvalidArgument("PopulationVector: entries sum to " + format_double(probs.sum()));
}

PopulationVector::PopulationVector(std::initializer_list<double> p)
    : PopulationVector(Vector(Eigen::Map<const Vector>(p.begin(), static_cast<Eigen::Index>(p.size())))) {}

HamiltonianSpec composite_hamiltonian(const HamiltonianSpec& h, int copies, int cap) {
  if (copies < 1) throw InvalidArgument("composite_hamiltonian: copies must be >= 1");
  h.validate();
  if (copies == 1) return h;
  const int d = h.dim();
  long long total = 1;
  for (int c = 0; c < copies; ++c) {
    total *= d;
    if (total > cap)
      throw CapExceeded("composite_hamiltonian: dimension exceeds cap " + std::to_string(cap));
  }

  std::vector<std::vector<int>> labels;
  labels.reserve(static_cast<std::size_t>(total));
  std::vector<int> digits(copies, 0);
  for (long long n = 0; n < total; ++n) {
    labels.push_back(digits);
    for (int c = copies - 1; c >= 0; --c) {
      if (++digits[c] < d) break;
      digits[c] = 0;
    }
  }
  auto energy = [&](const std::vector<int>& l) {
    double e = 0;
    for (int i : l) e += h.levels[i];
    return e;
  };
  std::stable_sort(labels.begin(), labels.end(), [&](const auto& a, const auto& b) {
    double ea = energy(a), eb = energy(b);
    if (std::abs(ea - eb) > kLevelTol) return ea < eb;
    return a < b;
  });

  HamiltonianSpec out;
  out.unit = h.unit;
  out.kind = "composite";
  out.label = h.label + "^x" + std::to_string(copies);
  out.base_levels = h.levels;
  out.copies = copies;
  out.product_labels = labels;
  out.levels.reserve(labels.size());
  for (const auto& l : labels) out.levels.push_back(energy(l));
  // sums of equal energies may differ in the last ulp; keep sortedness exact
  for (std::size_t i = 1; i < out.levels.size(); ++i)
    if (out.levels[i] < out.levels[i - 1]) out.levels[i] = out.levels[i - 1];
  return out;
}

PopulationVector gibbs(const HamiltonianSpec& h, const BathSpec& bath) {
  h.validate();
  const Vector e = h.energies();
  Vector w = (-bath.beta * (e.array() - e[0])).exp().matrix();
  return PopulationVector(Vector(w / w.sum()));
}

Vector beta_weights(const PopulationVector& p, const HamiltonianSpec& h, const BathSpec& bath) {
  if (p.dim() != h.dim()) throw DimensionMismatch("population and Hamiltonian dimensions differ");
  const Vector e = h.energies();
  return (p.probs.array() * (bath.beta * (e.array() - e[0])).exp()).matrix();
}

std::vector<int> beta_ordering(const PopulationVector& p, const HamiltonianSpec& h,
                               const BathSpec& bath) {
  const Vector w = beta_weights(p, h, bath);
  std::vector<int> pi(p.dim());
  std::iota(pi.begin(), pi.end(), 0);
  std::stable_sort(pi.begin(), pi.end(), [&](int a, int b) { return w[a] > w[b]; });
  return pi;
}

namespace {

bool weight_exceeds(double a, double b) {
  return a - b > kNormalizationTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

bool r3_pair_violated(const PopulationVector& p, const HamiltonianSpec& h, const BathSpec& bath,
                      int k, int k2) {
  if (k < 0 || k2 < 0 || k >= h.dim() || k2 >= h.dim())
    throw InvalidArgument("r3_pair_violated: level out of range");
  // degenerate levels are constrained both ways, i.e. to equal weights
  if (k == k2 || h.levels[k] - h.levels[k2] > kLevelTol) return false;
  const Vector w = beta_weights(p, h, bath);
  return weight_exceeds(w[k], w[k2]);
}

std::optional<std::pair<int, int>> r3_witness(const PopulationVector& p, const HamiltonianSpec& h,
                                              const BathSpec& bath) {
  const Vector w = beta_weights(p, h, bath);
  for (int k = 0; k < h.dim(); ++k)
    for (int k2 = 0; k2 < h.dim(); ++k2)
      if (k != k2 && h.levels[k] - h.levels[k2] <= kLevelTol && weight_exceeds(w[k], w[k2]))
        return std::make_pair(k, k2);
  return std::nullopt;
}

bool satisfies_R3(const PopulationVector& p, const HamiltonianSpec& h, const BathSpec& bath) {
  return !r3_witness(p, h, bath).has_value();
}

ConfigMap parse_config(std::istream& in) {
  ConfigMap cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

HamiltonianSpec hamiltonian_from_config(const ConfigMap& cfg) {
  auto get = [&](const char* k) -> const std::string* {
    auto it = cfg.find(k);
    return it == cfg.end() ? nullptr : &it->second;
  };
  const std::string kind = get("kind") ? *get("kind") : "equally_spaced";
  const double unit = get("E") ? parse_number("E", *get("E")) : 1.0;

  auto base = [&]() -> HamiltonianSpec {
    if (const auto* lv = get("levels")) return HamiltonianSpec::explicit_levels(parse_list("levels", *lv), unit);
    if (const auto* d = get("d")) return HamiltonianSpec::equally_spaced(static_cast<int>(parse_number("d", *d)), unit);
    throw InvalidArgument("config: need 'd' or 'levels'");
  };

  if (kind == "equally_spaced") {
    if (!get("d")) throw InvalidArgument("config: equally_spaced needs 'd'");
    return HamiltonianSpec::equally_spaced(static_cast<int>(parse_number("d", *get("d"))), unit);
  }
  if (kind == "explicit") {
    if (!get("levels")) throw InvalidArgument("config: explicit needs 'levels'");
    return HamiltonianSpec::explicit_levels(parse_list("levels", *get("levels")), unit);
  }
  if (kind == "composite") {
    if (!get("copies")) throw InvalidArgument("config: composite needs 'copies'");
    return composite_hamiltonian(base(), static_cast<int>(parse_number("copies", *get("copies"))));
  }
  throw InvalidArgument("config: unknown kind '" + kind + "'");
}

BathSpec bath_from_config(const ConfigMap& cfg) {
  const double unit = cfg.count("E") ? parse_number("E", cfg.at("E")) : 1.0;
  const bool has_beta = cfg.count("beta") != 0, has_q = cfg.count("q") != 0;
  if (has_beta == has_q) throw InvalidArgument("config: give exactly one of 'beta' or 'q'");
  return has_q ? BathSpec::from_q(parse_number("q", cfg.at("q")), unit)
               : BathSpec::from_beta(parse_number("beta", cfg.at("beta")), unit);
}

void write_config(std::ostream& out, const HamiltonianSpec& h, const BathSpec& bath) {
  out << "kind = " << h.kind << "\n";
  out << "E = " << format_double(h.unit) << "\n";
  if (h.kind == "composite") {
    out << "levels = ";
    for (std::size_t i = 0; i < h.base_levels.size(); ++i)
      out << (i ? ", " : "") << format_double(h.base_levels[i]);
    out << "\ncopies = " << h.copies << "\n";
  } else if (h.kind == "equally_spaced") {
    out << "d = " << h.dim() << "\n";
  } else {
    out << "levels = ";
    for (int i = 0; i < h.dim(); ++i) out << (i ? ", " : "") << format_double(h.levels[i]);
    out << "\n";
  }
  out << "q = " << format_double(bath.q) << "\n";
}

}  // namespace hbac
