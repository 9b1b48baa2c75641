#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "kslab/config.hpp"

namespace kslab::cli {

enum class Subcommand { equilibria, singular, shoot, converge, emden, morse, lambda_i, branch };

std::optional<Subcommand> parse_subcommand(std::string_view name);
std::string_view subcommand_name(Subcommand command);

/// output_dir / <hash of subcommand and config>; the hash ignores output_dir.
std::filesystem::path run_directory(Subcommand command, const RunConfig& config);

/// Runs the subcommand, writing its files to run_directory. Returns 0 on
/// success, 1 on a computational failure and 2 on a usage or config error;
/// the error message goes to standard error.
int dispatch(Subcommand command, const RunConfig& config);

}  // namespace kslab::cli
