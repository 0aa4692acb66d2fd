#include "hbac/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "hbac/cones.hpp"
#include "hbac/nogo.hpp"
#include "hbac/protocols.hpp"
#include "hbac/thermo.hpp"

namespace hbac {

namespace {

const std::vector<std::string> kCommands{"cone", "nogo", "protocol", "cop", "report"};
const std::vector<std::string> kProtocolVariants{"I", "I-general", "II-efficiency", "II-cooling"};
const std::vector<std::string> kCopVariants{"I", "II", "II-cooling"};

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

double default_q(const std::string& command) {
  return command == "cone" || command == "nogo" ? 0.5 : 0.3;
}

std::string fmt(double x) { return format_double(x); }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "1" : "0"; }

PopulationVector parse_initial(const std::string& spec, const BathSpec& bath) {
  const auto tau = gibbs(HamiltonianSpec::equally_spaced(3, bath.unit), bath);
  if (spec == "subsetV-canonical") return PopulationVector{tau[1], tau[0], tau[2]};
  if (spec == "gibbs") return tau;
  std::vector<double> vals;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidArgument("initial: expected subsetV-canonical, gibbs or three comma-separated numbers");
    }
  }
  if (vals.size() != 3) throw InvalidArgument("initial: qutrit state needs three entries");
  return PopulationVector{vals[0], vals[1], vals[2]};
}

RoundSpec protocol_by_name(const std::string& v, const Scenario& s, const BathSpec& bath) {
  if (v == "I") return build_protocol_I_qutrit(s.ds, bath);
  if (v == "I-general") return build_protocol_I_general(s.ds, s.dr, bath);
  if (v == "II" || v == "II-efficiency") return build_protocol_II_efficiency(bath);
  if (v == "II-cooling") return build_protocol_II_cooling_limit(bath);
  throw InvalidArgument("unknown protocol variant '" + v + "'");
}

}  // namespace

BathSpec Scenario::bath() const {
  if (beta) return BathSpec::from_beta(*beta, E);
  return BathSpec::from_q(q.value_or(default_q(command)), E);
}

void Scenario::validate() const {
  if (!contains(kCommands, command)) throw InvalidArgument("unknown command '" + command + "'");
  if (q && beta) throw InvalidArgument("give either --q or --beta, not both");
  if (q && !(*q > 0 && *q < 1)) throw InvalidArgument("q must lie in (0,1)");
  if (beta && !(*beta > 0)) throw InvalidArgument("beta must be > 0");
  if (!(E > 0)) throw InvalidArgument("E must be > 0");
  if (rounds < 0) throw InvalidArgument("rounds must be >= 0");
  if (format != "csv" && format != "records") throw InvalidArgument("format must be csv or records");
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  if (command == "protocol") {
    if (variants.size() > 1) throw InvalidArgument("protocol takes a single variant");
    const std::string v = variants.empty() ? "I" : variants[0];
    if (!contains(kProtocolVariants, v)) throw InvalidArgument("unknown protocol variant '" + v + "'");
    if (v == "I" && ds < 3) throw InvalidArgument("variant I needs dS >= 3");
    if (v == "I-general" && (dr < 4 || ds < dr)) throw InvalidArgument("variant I-general needs 4 <= dr <= dS");
  }
  if (command == "cop") {
    for (const auto& v : variants)
      if (!contains(kCopVariants, v)) throw InvalidArgument("unknown cop variant '" + v + "'");
    if (ds < 3) throw InvalidArgument("variant I needs dS >= 3");
  }
  if (command == "nogo" && sweep != "default" && sweep != "quick")
    throw InvalidArgument("sweep must be default or quick");
  (void)bath();
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }
}

void write_records(std::ostream& out, const Table& t) {
  for (const auto& r : t.rows) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string& cell = r[i];
      long long iv = 0;
      const auto [ip, iec] = std::from_chars(cell.data(), cell.data() + cell.size(), iv);
      if (!cell.empty() && iec == std::errc() && ip == cell.data() + cell.size()) {
        j[t.columns[i]] = iv;
        continue;
      }
      char* end = nullptr;
      const double v = cell.empty() ? 0.0 : std::strtod(cell.c_str(), &end);
      if (cell.empty()) j[t.columns[i]] = nullptr;
      else if (end && *end == '\0') j[t.columns[i]] = v;
      else j[t.columns[i]] = cell;
    }
    out << j.dump() << "\n";
  }
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto " + target.string());
  }
}

Table cone_table(const Scenario& s) {
  const BathSpec bath = s.bath();
  const PopulationVector p = parse_initial(s.initial, bath);
  Table t{{"source", "label", "p0", "p1", "p2"}, {}};
  auto row = [&](const std::string& src, const std::string& label, const Vector& v) {
    t.rows.push_back({src, label, fmt(v[0]), fmt(v[1]), fmt(v[2])});
  };
  row("initial", "p", p.probs);

  const bool subset_v = classify_beta_subset(p, bath) == BetaSubset::V;
  const QutritCone cone = subset_v ? qutrit_cone_subsetV(p, bath) : qutrit_cone_vertices(p, bath);
  Vector lo(3), hi(3);
  for (int i = 0; i < 3; ++i) std::tie(lo[i], hi[i]) = cone.intervals[i];
  row("C-interval", "min", lo);
  row("C-interval", "max", hi);
  for (std::size_t i = 0; i < cone.extreme_points.size(); ++i)
    row("C-cone", (subset_v ? "A" : "V") + std::to_string(i), cone.extreme_points[i]);

  const auto hull = mto_qutrit_inner_bound(p, bath, s.budget, s.seed, s.samples);
  for (std::size_t i = 0; i < hull.size(); ++i) row("MTO-inner", "H" + std::to_string(i), hull[i].probs);
  return t;
}

Table nogo_table(const Scenario& s, bool* all_verified) {
  SweepConfig cfg;
  cfg.seed = s.seed;
  cfg.q = s.bath().q;
  if (s.sweep == "quick") {
    cfg.thm2_instances = 20;
    cfg.thm3_instances = 5;
  }
  Table t{{"kind", "index", "ds", "dr", "gibbs_input", "r1", "r2", "r3", "q", "p0_star", "tau0_S", "margin",
           "verified"},
          {}};
  bool ok = true;
  int index = 0;
  for (const auto& inst : nogo_sweep(cfg)) {
    const auto& v = inst.verdict;
    bool verified = v.bound_holds;
    if (inst.gibbs_input) verified = verified && std::abs(v.margin()) <= 1e-12;
    ok = ok && verified;
    t.rows.push_back({inst.theorem, fmt(index++), fmt(inst.ds), fmt(inst.dr), fmt(inst.gibbs_input),
                      fmt(v.premises.r1), fmt(v.premises.r2), fmt(v.premises.r3), "", fmt(v.p0_star), fmt(v.tau0_S),
                      fmt(v.margin()), fmt(verified)});
  }
  for (int i = 1; i <= 9; ++i) {
    const BathSpec b = BathSpec::from_q(i / 10.0, s.E);
    const auto r = counterexample_r2(b);
    const bool verified = r.p0_out - r.tau0_S >= 1e-6;
    ok = ok && verified;
    t.rows.push_back({"r2-counterexample", fmt(index++), "3", "2", "0", "1", "0", "1", fmt(b.q), fmt(r.p0_out),
                      fmt(r.tau0_S), fmt(r.tau0_S - r.p0_out), fmt(verified)});
  }
  const std::pair<double, double> three[] = {{0.5, 0.6}, {0.3, 0.7}};
  for (auto [q, pbar] : three) {
    const BathSpec b = BathSpec::from_q(q, s.E);
    const auto r = three_qubit_example(pbar, b);
    const bool verified =
        r.r3_violated && r.p_ground_out > r.tau0_S && std::abs(r.oracle_p0_star - r.p_ground_out) <= 1e-12;
    ok = ok && verified;
    t.rows.push_back({"three-qubit", fmt(index++), "8", "8", "0", "1", "0", fmt(!r.r3_violated), fmt(q),
                      fmt(r.p_ground_out), fmt(r.tau0_S), fmt(r.tau0_S - r.p_ground_out), fmt(verified)});
  }
  if (all_verified) *all_verified = ok;
  return t;
}

Table protocol_table(const Scenario& s) {
  const BathSpec bath = s.bath();
  const std::string variant = s.variants.empty() ? "I" : s.variants[0];
  const RoundSpec spec = protocol_by_name(variant, s, bath);
  const auto star = fixed_point(round_matrix(spec, bath));
  const auto traj = trajectory(spec, gibbs(spec.controlled, bath), bath, s.rounds);
  Table t{{"variant", "n"}, {}};
  for (int i = 0; i < spec.controlled.dim(); ++i) t.columns.push_back("p_" + std::to_string(i));
  if (spec.machine)
    for (int i = 0; i < spec.system_dim(); ++i) t.columns.push_back("s_" + std::to_string(i));
  t.columns.push_back("dist_fixed");
  for (std::size_t n = 0; n < traj.size(); ++n) {
    std::vector<std::string> r{variant, fmt(static_cast<int>(n))};
    for (int i = 0; i < traj[n].dim(); ++i) r.push_back(fmt(traj[n][i]));
    if (spec.machine) {
      const Vector m = spec.system_marginal(traj[n].probs);
      for (int i = 0; i < m.size(); ++i) r.push_back(fmt(m[i]));
    }
    r.push_back(fmt((traj[n].probs - star.probs).cwiseAbs().maxCoeff()));
    t.rows.push_back(std::move(r));
  }
  return t;
}

Table cop_table(const Scenario& s) {
  const BathSpec bath = s.bath();
  const std::vector<std::string> variants = s.variants.empty() ? std::vector<std::string>{"I", "II"} : s.variants;
  Table t{{"variant", "n", "W_n", "dU_n", "cumW", "cumdU", "K_n"}, {}};
  for (const auto& v : variants) {
    const RoundSpec spec = protocol_by_name(v, s, bath);
    const auto ledger = run_ledger(spec, gibbs(spec.controlled, bath), bath, s.rounds);
    for (const auto& r : ledger.rounds()) {
      const double cw = ledger.cumulative_work(r.n);
      t.rows.push_back({v, fmt(r.n), fmt(r.work), fmt(r.energy_reduction), fmt(cw),
                        fmt(ledger.cumulative_reduction(r.n)), cw > 0 ? fmt(cumulative_cop(ledger, r.n)) : ""});
    }
  }
  return t;
}

std::pair<double, double> fit_beta_ratio(const Vector& p, const HamiltonianSpec& h, const BathSpec& bath) {
  if (p.size() != h.dim()) throw DimensionMismatch("fit_beta_ratio: state dimension");
  const Vector e = h.energies();
  std::vector<double> r;
  for (int j = 0; j + 1 < h.dim(); ++j) {
    const double de = e[j + 1] - e[j];
    if (de <= 0 || p[j] <= 0 || p[j + 1] <= 0) continue;
    r.push_back(-std::log(p[j + 1] / p[j]) / (bath.beta * de));
  }
  if (r.empty()) throw InvalidArgument("fit_beta_ratio: no usable level pairs");
  double mean = 0;
  for (double x : r) mean += x;
  mean /= static_cast<double>(r.size());
  double dev = 0;
  for (double x : r) dev = std::max(dev, std::abs(x - mean));
  return {mean, dev};
}

std::vector<SummaryRow> emit_summary_table(const BathSpec& bath) {
  constexpr int kHorizon = 400;
  auto cop_flag = [&](const RoundSpec& spec) {
    const auto ledger = run_ledger(spec, gibbs(spec.controlled, bath), bath, kHorizon);
    const double tail = (ledger.cumulative_work(kHorizon) - ledger.cumulative_work(kHorizon / 2)) / (kHorizon / 2);
    // work still growing linearly means K^(N) ~ U0 / (N w) -> 0
    return tail > 1e-9 ? std::string("zero") : std::string("positive");
  };
  auto simulated = [&](const std::string& therm, const std::string& machine, const RoundSpec& spec) {
    const Vector star = spec.system_marginal(fixed_point(round_matrix(spec, bath)).probs);
    auto [ratio, dev] = fit_beta_ratio(star, spec.system, bath);
    std::ostringstream cl;
    cl << std::fixed << std::setprecision(6) << "beta*/beta = " << ratio;
    return SummaryRow{therm, machine, cl.str(), cop_flag(spec), "simulated", ratio, dev};
  };

  std::vector<SummaryRow> rows;
  rows.push_back({"reset of m machine qubits", "m qubits", "beta* = m beta", "positive", "literature"});
  rows.push_back({"PPA", "m qubits", "beta* = 2^(m-1) beta", "positive", "literature"});
  rows.push_back({"SR (subspace full thermalization)", "m qubits", "beta* = (2^(m+1)-1) beta", "zero", "literature"});
  rows.push_back({"xHBAC (full set of thermal operations)", "none", "beta* -> infinity", "zero", "literature"});
  rows.push_back(simulated("collision, d_S = 3, d_r = 3", "none", build_protocol_I_qutrit(3, bath)));
  rows.push_back(simulated("collision, d_S = 4, d_r = 4", "none", build_protocol_I_general(4, 4, bath)));
  rows.push_back(simulated("collision on SM, efficiency variant", "1 qubit", build_protocol_II_efficiency(bath)));
  rows.push_back(simulated("collision on SM, cooling-limit variant", "1 qubit", build_protocol_II_cooling_limit(bath)));
  return rows;
}

std::string render_summary_table(const std::vector<SummaryRow>& rows) {
  const std::vector<std::string> head{"thermalization", "machine", "cooling limit", "cumulative CoP", "source"};
  std::vector<std::vector<std::string>> cells{head};
  for (const auto& r : rows) cells.push_back({r.thermalization, r.machine, r.cooling_limit, r.cop, r.source});
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& c : cells)
    for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
  std::ostringstream out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t i = 0; i < cells[r].size(); ++i)
      out << (i ? " | " : "") << std::left << std::setw(static_cast<int>(width[i])) << cells[r][i];
    out << "\n";
    if (r == 0) {
      for (std::size_t i = 0; i < width.size(); ++i) out << (i ? "-+-" : "") << std::string(width[i], '-');
      out << "\n";
    }
  }
  return out.str();
}

int run_scenario(const Scenario& s, std::ostream& out, std::ostream& err) {
  try {
    s.validate();
    bool verified = true;
    std::string ext = s.format == "csv" ? "csv" : "jsonl";
    std::ostringstream body;
    if (s.command == "report") {
      const auto rows = emit_summary_table(s.bath());
      if (s.format == "records") {
        Table t{{"thermalization", "machine", "cooling_limit", "cop", "source", "beta_ratio", "max_deviation"}, {}};
        for (const auto& r : rows)
          t.rows.push_back({r.thermalization, r.machine, r.cooling_limit, r.cop, r.source,
                            r.source == "simulated" ? fmt(r.beta_ratio) : "",
                            r.source == "simulated" ? fmt(r.max_deviation) : ""});
        write_records(body, t);
      } else {
        body << render_summary_table(rows);
        ext = "txt";
      }
    } else {
      Table t;
      if (s.command == "cone") t = cone_table(s);
      else if (s.command == "nogo") t = nogo_table(s, &verified);
      else if (s.command == "protocol") t = protocol_table(s);
      else t = cop_table(s);
      if (s.format == "csv") write_csv(body, t);
      else write_records(body, t);
    }

    if (!s.out.empty()) {
      atomic_write(s.out, body.str());
    } else if (const char* dir = std::getenv("HBAC_OUT_DIR"); dir && *dir) {
      atomic_write((std::filesystem::path(dir) / (s.command + "." + ext)).string(), body.str());
    } else {
      out << body.str();
    }
    if (!verified) {
      err << "error: verification failed: a no-go bound or counterexample check did not hold\n";
      return kExitVerification;
    }
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const WrongSubset& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerification;
  }
}

}  // namespace hbac
