#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kslab::io {

/// %.17g, which round-trips every double.
std::string format_double(double x);

/// Writes a CSV with the given header; every cell goes through format_double.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Writes text verbatim (used for JSON reports).
void write_text(const std::filesystem::path& path, std::string_view text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// base / <16 hex digits of fnv1a64(key)>, created if missing.
std::filesystem::path run_directory(const std::filesystem::path& base, std::string_view key);

/// One line to standard error, prefixed with "kslab: ".
void log(std::string_view message);

}  // namespace kslab::io
