#include "kslab/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <string>

#include "kslab/bifurcation.hpp"
#include "kslab/errors.hpp"
#include "kslab/io.hpp"
#include "kslab/shooting.hpp"
#include "kslab/singular.hpp"
#include "kslab/spectrum.hpp"

namespace kslab::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::array<std::pair<Subcommand, std::string_view>, 8> kNames{{
    {Subcommand::equilibria, "equilibria"},
    {Subcommand::singular, "singular"},
    {Subcommand::shoot, "shoot"},
    {Subcommand::converge, "converge"},
    {Subcommand::emden, "emden"},
    {Subcommand::morse, "morse"},
    {Subcommand::lambda_i, "lambda-i"},
    {Subcommand::branch, "branch"},
}};

double require_lambda(const RunConfig& c, std::string_view command) {
  if (!c.lambda) throw Error(ErrorKind::ValidationError, std::string(command) + " needs --lambda");
  return *c.lambda;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void run_equilibria(const RunConfig& c, const fs::path& dir) {
  const std::vector<double> lambdas = c.lambda ? std::vector<double>{*c.lambda}
                                               : std::vector<double>{0.3, 0.1, 0.01, 1e-4};
  std::vector<std::vector<double>> rows;
  for (double lambda : lambdas) {
    const auto e = solve_equilibria(lambda);
    rows.push_back({lambda, e.u_lower, e.u_upper, std::abs(lambda * std::exp(e.u_lower) - e.u_lower),
                    std::abs(lambda * std::exp(e.u_upper) - e.u_upper)});
  }
  io::write_csv(dir / "equilibria.csv", {"lambda", "u_lower", "u_upper", "residual_lower", "residual_upper"}, rows);

  std::vector<std::vector<double>> thresholds;
  for (int n : {3, 4, 5}) {
    const double u = pohozaev_threshold(n);
    thresholds.push_back({static_cast<double>(n), u, u * std::exp(-u), lambda_star(n)});
  }
  io::write_csv(dir / "thresholds.csv", {"dimension", "u_lower_threshold", "lambda_threshold", "lambda_star"},
                thresholds);
  io::log("equilibria: " + std::to_string(rows.size()) + " rows");
}

void run_singular(const RunConfig& c, const fs::path& dir) {
  const double lambda = require_lambda(c, "singular");
  const double r_max = c.r_max.value_or(10.0);
  const auto profile = singular_profile(c.dimension, lambda, r_max);
  std::vector<std::vector<double>> rows;
  for (const auto& n : profile.nodes()) rows.push_back({n.r, n.u, n.u_prime});
  io::write_csv(dir / "profile.csv", {"r", "u", "u_prime"}, rows);

  json summary{{"dimension", c.dimension},
               {"lambda", lambda},
               {"r_max", r_max},
               {"picard_iterations", profile.source().iterations},
               {"contraction_ratio", profile.source().contraction_ratio},
               {"r0", profile.r0()}};
  if (lambda <= 1.0 / std::numbers::e) {
    const double level = solve_equilibria(lambda).u_upper;
    const auto set = find_critical_set(profile, level);
    std::vector<std::vector<double>> crit;
    for (std::size_t k = 0; k < set.critical_radii.size(); ++k) {
      crit.push_back({static_cast<double>(k + 1), set.critical_radii[k],
                      set.kinds[k] == CriticalKind::min ? 0.0 : 1.0});
    }
    io::write_csv(dir / "critical.csv", {"index", "r", "is_max"}, crit);
    std::vector<std::vector<double>> cross;
    for (double r : set.crossing_radii) cross.push_back({r});
    io::write_csv(dir / "crossings.csv", {"r"}, cross);
    summary["u_upper"] = level;
    summary["critical_count"] = set.critical_radii.size();
    summary["crossing_count"] = set.crossing_radii.size();
  }
  io::write_text(dir / "summary.json", dump(summary));
  io::log("singular: profile with " + std::to_string(rows.size()) + " nodes");
}

void run_shoot(const RunConfig& c, const fs::path& dir) {
  const double lambda = require_lambda(c, "shoot");
  const double gamma = c.gamma.value_or(20.0);
  const double r_max = c.r_max.value_or(c.radius);
  ShootOptions options;
  options.rtol = c.tolerance("ode_rtol");
  const auto params = ProblemParams::make(c.dimension, lambda);
  const auto regular = shoot_regular(params, gamma, r_max, options);
  std::vector<std::vector<double>> rows;
  for (const auto& n : regular.nodes()) rows.push_back({n.r, n.u, n.u_prime});
  io::write_csv(dir / "profile.csv", {"r", "u", "u_prime"}, rows);

  std::vector<std::vector<double>> crit;
  for (double r : regular.critical_radii(r_max)) crit.push_back({r});
  io::write_csv(dir / "critical.csv", {"r"}, crit);

  const auto singular = singular_profile(c.dimension, lambda, std::max(r_max, 1.0));
  const auto zc = regular_singular_zeros(singular, regular, std::min(c.radius, r_max));
  std::vector<std::vector<double>> zeros;
  for (double r : zc.zeros) zeros.push_back({r});
  io::write_csv(dir / "zeros.csv", {"r"}, zeros);
  io::write_text(dir / "summary.json", dump(json{{"dimension", c.dimension},
                                                 {"lambda", lambda},
                                                 {"gamma", gamma},
                                                 {"zero_count", zc.count},
                                                 {"all_simple", zc.all_simple},
                                                 {"rescaled", regular.rescaled()}}));
  io::log("shoot: " + std::to_string(zc.count) + " zeros of u - U* on (0, " + io::format_double(zc.b) + ")");
}

void run_converge(const RunConfig& c, const fs::path& dir) {
  const double lambda = require_lambda(c, "converge");
  const auto singular = singular_profile(c.dimension, lambda, 2.5);
  ShootOptions options;
  options.rtol = c.tolerance("ode_rtol");
  const auto report = convergence_report(singular, c.gamma_grid(), 0.5, 2.0, 2001, options);
  std::vector<std::vector<double>> rows;
  for (const auto& r : report) rows.push_back({r.gamma, r.value_distance, r.derivative_distance});
  io::write_csv(dir / "convergence.csv", {"gamma", "value_distance", "derivative_distance"}, rows);
  io::log("converge: " + std::to_string(rows.size()) + " gamma values");
}

void run_emden(const RunConfig& c, const fs::path& dir) {
  const double lambda_inf = c.lambda.value_or(1.0);
  const double rho_max = c.r_max.value_or(1000.0);
  const auto e = shoot_emden(c.dimension, lambda_inf, rho_max);
  std::vector<std::vector<double>> rows;
  const auto s = e.samples();
  for (std::size_t k = 0; k < s.r.size(); ++k) {
    rows.push_back({s.r[k], s.u[k], s.r[k] > 0.0 ? e.difference(s.r[k]) : std::nan("")});
  }
  io::write_csv(dir / "emden.csv", {"rho", "u", "difference"}, rows);
  ZeroScanOptions opt;
  opt.log_spacing = true;
  const auto zc = count_zeros([&](double r) { return e.difference(r); },
                              [&](double r) { return e.difference_slope(r); }, e.rho_start(), rho_max, opt);
  std::vector<std::vector<double>> zeros;
  for (double r : zc.zeros) zeros.push_back({r});
  io::write_csv(dir / "zeros.csv", {"rho"}, zeros);
  io::write_text(dir / "summary.json", dump(json{{"dimension", c.dimension},
                                                 {"lambda_inf", lambda_inf},
                                                 {"rho_max", rho_max},
                                                 {"zero_count", zc.count},
                                                 {"all_simple", zc.all_simple}}));
  io::log("emden: " + std::to_string(zc.count) + " intersections on (0, " + io::format_double(rho_max) + "]");
}

std::size_t resolve_index(const RunConfig& c) {
  return c.index > 0 ? c.index : i_star(c.dimension, c.radius, 0.5 * lambda_star(c.dimension));
}

LambdaTarget solve_target(const RunConfig& c) {
  LambdaSearchOptions opt;
  opt.residual_tol = c.tolerance("residual");
  return find_lambda_i(c.dimension, c.radius, resolve_index(c), opt);
}

json target_json(const LambdaTarget& t) {
  return json{{"N", t.dimension},         {"R", t.radius},
              {"i", t.index_i},           {"lambda_i", t.lambda_i},
              {"bracket", {t.bracket_lo, t.bracket_hi}}, {"residual", t.residual}};
}

void run_morse(const RunConfig& c, const fs::path& dir) {
  if (c.dimension == 10) {
    throw Error(ErrorKind::UnsupportedBorderline, "N = 10 is the open borderline case of the Morse dichotomy");
  }
  const double lambda = c.lambda ? *c.lambda : solve_target(c).lambda_i;
  const auto profile = singular_profile(c.dimension, lambda, 2.0 * c.radius);
  const auto ladder = morse_ladder(profile, c.radius, c.epsilons);
  json report{{"N", c.dimension}, {"lambda", lambda}, {"R", c.radius}, {"ladder", json::array()}};
  std::vector<std::vector<double>> rows;
  for (const auto& rung : ladder) {
    report["ladder"].push_back(json{{"epsilon", rung.epsilon},
                                    {"nodes", rung.elements},
                                    {"negative_count", rung.negative_count},
                                    {"converged", rung.converged}});
    rows.push_back({rung.epsilon, static_cast<double>(rung.elements), static_cast<double>(rung.negative_count)});
  }
  io::write_text(dir / "morse.json", dump(report));
  io::write_csv(dir / "morse.csv", {"epsilon", "nodes", "negative_count"}, rows);
  io::log("morse: " + std::to_string(ladder.size()) + " cutoffs");
}

void run_lambda_i(const RunConfig& c, const fs::path& dir) {
  const auto t = solve_target(c);
  io::write_text(dir / "target.json", dump(target_json(t)));
  io::log("lambda-i: i = " + std::to_string(t.index_i) + ", lambda_i = " + io::format_double(t.lambda_i));
}

void run_branch(const RunConfig& c, const fs::path& dir) {
  const auto t = solve_target(c);
  TraceOptions opt;
  opt.solve.residual_tol = c.tolerance("residual");
  const auto trace = branch_trace(c.dimension, c.radius, t.index_i, t.lambda_i, c.gamma_grid(), opt);
  std::vector<std::vector<double>> rows;
  for (const auto& s : trace.samples) rows.push_back({s.gamma, s.lambda, static_cast<double>(s.index_i), s.residual});
  io::write_csv(dir / "branch.csv", {"gamma", "lambda", "index_i", "residual"}, rows);
  std::vector<std::vector<double>> mu;
  for (const auto& p : export_mu_plane(trace.samples)) mu.push_back({p.mu, p.u0});
  io::write_csv(dir / "mu_plane.csv", {"mu", "u0"}, mu);
  auto summary = target_json(t);
  summary["samples"] = trace.samples.size();
  summary["unsolved_gammas"] = trace.unsolved;
  summary["sign_changes"] = trace.sign_changes;
  io::write_text(dir / "summary.json", dump(summary));
  io::log("branch: " + std::to_string(trace.samples.size()) + " samples, " + std::to_string(trace.sign_changes) +
          " sign changes of lambda - lambda_i, " + std::to_string(trace.unsolved.size()) + " grid values without a root");
}

}  // namespace

std::optional<Subcommand> parse_subcommand(std::string_view name) {
  for (const auto& [command, text] : kNames) {
    if (text == name) return command;
  }
  return std::nullopt;
}

std::string_view subcommand_name(Subcommand command) {
  for (const auto& [c, text] : kNames) {
    if (c == command) return text;
  }
  return "unknown";
}

fs::path run_directory(Subcommand command, const RunConfig& config) {
  RunConfig key = config;
  key.output_dir = "-";
  return io::run_directory(config.output_dir, std::string(subcommand_name(command)) + "\n" + serialize_config(key));
}

int dispatch(Subcommand command, const RunConfig& config) {
  try {
    validate_config(config);
    const auto dir = run_directory(command, config);
    io::write_text(dir / "config.json", serialize_config(config) + "\n");
    switch (command) {
      case Subcommand::equilibria: run_equilibria(config, dir); break;
      case Subcommand::singular: run_singular(config, dir); break;
      case Subcommand::shoot: run_shoot(config, dir); break;
      case Subcommand::converge: run_converge(config, dir); break;
      case Subcommand::emden: run_emden(config, dir); break;
      case Subcommand::morse: run_morse(config, dir); break;
      case Subcommand::lambda_i: run_lambda_i(config, dir); break;
      case Subcommand::branch: run_branch(config, dir); break;
    }
    io::log("output in " + dir.string());
    return 0;
  } catch (const Error& e) {
    io::log(e.what());
    return is_usage_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    io::log(e.what());
    return 1;
  }
}

}  // namespace kslab::cli
