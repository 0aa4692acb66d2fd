#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "hbac/scenario.hpp"

namespace {

void add_options(CLI::App* sub, hbac::Scenario& s, double& q, double& beta) {
  sub->add_option("--q", q, "Gibbs factor exp(-beta E), in (0,1)");
  sub->add_option("--beta", beta, "bath inverse temperature");
  sub->add_option("--E", s.E, "reference energy gap");
  sub->add_option("--ds", s.ds, "system dimension");
  sub->add_option("--dr", s.dr, "molecule dimension");
  sub->add_flag("--machine", s.machine, "attach a qubit machine");
  sub->add_option("--variant", s.variants, "comma-separated protocol variants")->delimiter(',');
  sub->add_option("--rounds", s.rounds, "number of rounds N");
  sub->add_option("--seed", s.seed, "random seed");
  sub->add_option("--initial", s.initial, "qutrit initial state: subsetV-canonical, gibbs or p0,p1,p2");
  sub->add_option("--sweep", s.sweep, "no-go sweep preset: default or quick");
  sub->add_option("--budget", s.budget, "MTO sequence length budget");
  sub->add_option("--samples", s.samples, "random MTO sequences");
  sub->add_option("--out", s.out, "output file (default: $HBAC_OUT_DIR/<command>.<ext> or stdout)");
  sub->add_option("--format", s.format, "csv or records");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-bath algorithmic cooling with collision models"};
  app.set_config("--config", "", "key = value config file");
  app.require_subcommand(1);
  app.fallthrough();

  hbac::Scenario s;
  double q = -1, beta = -1;
  // options live on the root so a flat config file can set them; subcommands fall through
  add_options(&app, s, q, beta);
  const std::pair<const char*, const char*> commands[] = {
      {"cone", "reachable populations of one collision sequence"},
      {"nogo", "sweep the molecule-size bound and its counterexamples"},
      {"protocol", "per-round populations of the cooling protocols"},
      {"cop", "work, heat and coefficient of performance per round"},
      {"report", "summary table of cooling limits and CoP behaviour"}};
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)->callback([&s, name] { s.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hbac::kExitInvalid;
  }

  if (app.count("--q")) s.q = q;
  if (app.count("--beta")) s.beta = beta;
  return hbac::run_scenario(s, std::cout, std::cerr);
}
