#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hbac/spectra.hpp"

namespace hbac {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitVerification = 3, kExitIo = 4 };

struct Scenario {
  std::string command;                 // cone | nogo | protocol | cop | report
  std::optional<double> q;             // exactly one of q / beta
  std::optional<double> beta;
  double E = 1.0;
  int ds = 3;
  int dr = 3;
  bool machine = false;
  std::vector<std::string> variants;   // protocol / cop
  int rounds = 200;
  std::uint64_t seed = 7;
  std::string initial = "subsetV-canonical";
  std::string sweep = "default";
  int budget = 6;
  int samples = 100000;
  std::string out;                     // empty: $HBAC_OUT_DIR/<command>.<ext>, else stdout
  std::string format = "csv";          // csv | records

  BathSpec bath() const;
  /// Throws InvalidArgument with a one-line reason.
  void validate() const;
};

/// Tabular result: header plus rows of already formatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const Table& t);
/// One JSON object per line; numeric-looking cells are emitted as numbers.
void write_records(std::ostream& out, const Table& t);

/// Write `content` to `path` through a temporary file and rename.
void atomic_write(const std::string& path, const std::string& content);

struct SummaryRow {
  std::string thermalization;
  std::string machine;
  std::string cooling_limit;   // e.g. "beta*/beta = 2.000000"
  std::string cop;             // positive | zero
  std::string source;          // simulated | literature
  double beta_ratio = 0;       // fitted, simulated rows only
  double max_deviation = 0;
};

/// beta*/beta fitted from adjacent level ratios: (mean, max deviation from mean).
std::pair<double, double> fit_beta_ratio(const Vector& p, const HamiltonianSpec& h, const BathSpec& bath);

std::vector<SummaryRow> emit_summary_table(const BathSpec& bath);
std::string render_summary_table(const std::vector<SummaryRow>& rows);

Table cone_table(const Scenario& s);
Table nogo_table(const Scenario& s, bool* all_verified);
Table protocol_table(const Scenario& s);
Table cop_table(const Scenario& s);

/// Runs one scenario; diagnostics go to `err` as a single line.
int run_scenario(const Scenario& s, std::ostream& out, std::ostream& err);

}  // namespace hbac
