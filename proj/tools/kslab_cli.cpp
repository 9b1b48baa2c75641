#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "kslab/cli.hpp"
#include "kslab/config.hpp"
#include "kslab/errors.hpp"
#include "kslab/io.hpp"

namespace {

struct Flags {
  std::string config_path;
  int dimension = 3;
  double lambda = 0.0;
  double radius = 1.0;
  std::size_t index = 0;
  double gamma = 0.0;
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  double gamma_step = 0.0;
  double r_max = 0.0;
  std::vector<double> epsilons;
  double tol = 0.0;
  std::string out;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  sub->add_option("--dimension,-N", f.dimension, "space dimension N >= 3");
  sub->add_option("--lambda", f.lambda, "parameter lambda");
  sub->add_option("--radius,-R", f.radius, "ball radius R");
  sub->add_option("--index", f.index, "critical-radius index i (default i*)");
  sub->add_option("--gamma", f.gamma, "initial value u(0) for shoot");
  sub->add_option("--gamma-min", f.gamma_min, "first gamma of the grid");
  sub->add_option("--gamma-max", f.gamma_max, "last gamma of the grid");
  sub->add_option("--gamma-step", f.gamma_step, "gamma grid step");
  sub->add_option("--r-max", f.r_max, "outer radius of the computed profile");
  sub->add_option("--eps", f.epsilons, "inner cutoffs of the Morse ladder");
  sub->add_option("--tol", f.tol, "root residual tolerance");
  sub->add_option("--out", f.out, "base output directory");
}

kslab::RunConfig build_config(const CLI::App* sub, const Flags& f) {
  kslab::RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw kslab::Error(kslab::ErrorKind::ParseError, "cannot read " + f.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    c = kslab::parse_config(ss.str());
  }
  auto given = [sub](const char* name) { return sub->count(name) > 0; };
  if (given("--dimension")) c.dimension = f.dimension;
  if (given("--lambda")) c.lambda = f.lambda;
  if (given("--radius")) c.radius = f.radius;
  if (given("--index")) c.index = f.index;
  if (given("--gamma")) c.gamma = f.gamma;
  if (given("--gamma-min")) c.gamma_min = f.gamma_min;
  if (given("--gamma-max")) c.gamma_max = f.gamma_max;
  if (given("--gamma-step")) c.gamma_step = f.gamma_step;
  if (given("--r-max")) c.r_max = f.r_max;
  if (given("--eps")) c.epsilons = f.epsilons;
  if (given("--tol")) c.tolerances["residual"] = f.tol;
  if (given("--out")) c.output_dir = f.out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular and regular radial solutions of -u'' - (N-1)/r u' + u = lambda e^u"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"equilibria", "constant solutions and threshold table"},
      {"singular", "singular profile with critical radii and crossings"},
      {"shoot", "regular profile and its intersections with the singular one"},
      {"converge", "distance of regular profiles to the singular one on [0.5, 2]"},
      {"emden", "intersections of the regular and singular Emden profiles"},
      {"morse", "negative counts of the quadratic form along the cutoff ladder"},
      {"lambda-i", "solve R^i(lambda) = R"},
      {"branch", "trace lambda(gamma) with r^i = R and export the mu plane"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto* sub = app.get_subcommands().front();
  const auto command = kslab::cli::parse_subcommand(sub->get_name());
  try {
    return kslab::cli::dispatch(*command, build_config(sub, flags));
  } catch (const kslab::Error& e) {
    kslab::io::log(e.what());
    return kslab::is_usage_error(e.kind()) ? 2 : 1;
  }
}
