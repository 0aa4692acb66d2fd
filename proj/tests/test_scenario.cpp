#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hbac/scenario.hpp"

using namespace hbac;

namespace {

std::string run(const Scenario& s, int* code = nullptr) {
  std::ostringstream out, err;
  const int rc = run_scenario(s, out, err);
  if (code) *code = rc;
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

// declared columns, finite numbers, monotone round index
void check_schema(const std::string& text, const std::string& index_col) {
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() > 1);
  const auto& head = rows[0];
  const auto it = std::find(head.begin(), head.end(), index_col);
  const int col = it == head.end() ? -1 : static_cast<int>(it - head.begin());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == head.size());
    for (const auto& c : rows[r]) CHECK(c.find("nan") == std::string::npos);
    if (col >= 0 && r > 1 && rows[r][0] == rows[r - 1][0])
      CHECK(std::stoi(rows[r][col]) == std::stoi(rows[r - 1][col]) + 1);
  }
}

}  // namespace

TEST_CASE("validation") {
  Scenario s;
  s.command = "protocol";
  CHECK_NOTHROW(s.validate());
  s.q = 1.5;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.q = 0.3;
  s.beta = 1.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.beta.reset();
  s.rounds = -1;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.rounds = 5;
  s.variants = {"III"};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.command = "frobnicate";
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("invalid parameters give exit code 2") {
  Scenario s;
  s.command = "cop";
  s.q = 0.0;
  int rc = 0;
  std::ostringstream out, err;
  rc = run_scenario(s, out, err);
  CHECK(rc == kExitInvalid);
  CHECK(out.str().empty());
  const std::string e = err.str();
  CHECK(std::count(e.begin(), e.end(), '\n') == 1);
}

TEST_CASE("unwritable output gives exit code 4") {
  Scenario s;
  s.command = "report";
  s.out = "/nonexistent-dir/x.txt";
  int rc = 0;
  run(s, &rc);
  CHECK(rc == kExitIo);
}

TEST_CASE("cop series schema and determinism") {
  Scenario s;
  s.command = "cop";
  s.q = 0.3;
  s.rounds = 50;
  s.variants = {"I", "II"};
  const std::string a = run(s), b = run(s);
  CHECK(a == b);
  check_schema(a, "n");
  const auto rows = parse_csv(a);
  CHECK(rows.size() == 101);
  CHECK(rows[0] == std::vector<std::string>{"variant", "n", "W_n", "dU_n", "cumW", "cumdU", "K_n"});
}

TEST_CASE("protocol series schema") {
  for (const char* v : {"I", "I-general", "II-efficiency", "II-cooling"}) {
    Scenario s;
    s.command = "protocol";
    s.variants = {v};
    s.ds = 5;
    s.dr = 4;
    s.rounds = 20;
    const std::string text = run(s);
    check_schema(text, "n");
    CHECK(parse_csv(text).size() == 22);
  }
}

TEST_CASE("cone table lists the six extreme points") {
  Scenario s;
  s.command = "cone";
  s.q = 0.5;
  s.samples = 2000;
  const auto rows = parse_csv(run(s));
  int cone = 0, mto = 0;
  for (const auto& r : rows) {
    cone += r[0] == "C-cone";
    mto += r[0] == "MTO-inner";
  }
  CHECK(cone == 6);
  CHECK(mto >= 3);
  s.initial = "0.5,0.2";
  int rc = 0;
  run(s, &rc);
  CHECK(rc == kExitInvalid);
}

TEST_CASE("nogo quick sweep verifies") {
  Scenario s;
  s.command = "nogo";
  s.sweep = "quick";
  s.format = "records";
  int rc = -1;
  const std::string text = run(s, &rc);
  CHECK(rc == kExitOk);
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["verified"] == 1);
    ++n;
  }
  CHECK(n == 25 + 9 + 2);
}

TEST_CASE("summary table rows") {
  const auto rows = emit_summary_table(BathSpec::from_q(0.3));
  int simulated = 0;
  for (const auto& r : rows)
    if (r.source == "simulated") {
      ++simulated;
      CHECK(r.max_deviation < 1e-6);
    }
  CHECK(simulated == 4);
  CHECK(rows[4].beta_ratio == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rows[5].beta_ratio == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(rows[6].cop == "positive");
  CHECK(rows[7].cop == "zero");
  const auto text = render_summary_table(rows);
  CHECK(text.find("beta*/beta = 4.000000") != std::string::npos);
}

TEST_CASE("fit of beta ratio") {
  const auto h = HamiltonianSpec::equally_spaced(4);
  const auto bath = BathSpec::from_q(0.5);
  const auto cold = gibbs(h, BathSpec::from_q(0.125));
  auto [ratio, dev] = fit_beta_ratio(cold.probs, h, bath);
  CHECK(ratio == doctest::Approx(3.0));
  CHECK(dev < 1e-12);
}

TEST_CASE("atomic write and output directory") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hbac_scenario_test";
  fs::create_directories(dir);
  const fs::path file = dir / "out.csv";
  atomic_write(file.string(), "a\n");
  atomic_write(file.string(), "b\n");
  std::ifstream f(file);
  std::string content((std::istreambuf_iterator<char>(f)), {});
  CHECK(content == "b\n");
  int leftovers = 0;
  for (const auto& e : fs::directory_iterator(dir)) leftovers += e.path().string().find(".tmp.") != std::string::npos;
  CHECK(leftovers == 0);

  ::setenv("HBAC_OUT_DIR", dir.string().c_str(), 1);
  Scenario s;
  s.command = "report";
  const std::string text = run(s);
  ::unsetenv("HBAC_OUT_DIR");
  CHECK(text.empty());
  CHECK(fs::exists(dir / "report.txt"));
  fs::remove_all(dir);
}
