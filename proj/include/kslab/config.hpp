#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kslab {

/// Settings shared by all subcommands. Optional fields fall back to a
/// per-subcommand default when absent.
struct RunConfig {
  int dimension = 3;
  std::optional<double> lambda;
  double radius = 1.0;
  /// Critical-radius index; 0 selects i*.
  std::size_t index = 0;
  std::optional<double> gamma;
  double gamma_min = 10.0;
  double gamma_max = 40.0;
  double gamma_step = 0.5;
  std::optional<double> r_max;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  /// Known names: residual, ode_rtol.
  std::map<std::string, double> tolerances{{"residual", 1e-9}, {"ode_rtol", 1e-12}};
  std::string output_dir = "runs";

  double tolerance(const std::string& name) const;
  /// gamma_min, gamma_min + step, ... up to gamma_max (inclusive within 1e-9 step).
  std::vector<double> gamma_grid() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON document. Unknown keys and malformed values raise
/// ParseError naming the line or field; values out of range raise
/// ValidationError.
RunConfig parse_config(std::string_view text);

/// Canonical JSON form (sorted keys, absent optionals omitted).
std::string serialize_config(const RunConfig& config);

/// Throws ValidationError unless N >= 3, R > 0, lambda > 0 if given,
/// every tolerance positive, the gamma grid well-formed and every cutoff in (0, R).
void validate_config(const RunConfig& config);

}  // namespace kslab
