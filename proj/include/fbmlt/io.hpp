#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fbmlt {

/// Shortest round-trip-safe decimal form used in every CSV artifact (17 significant digits).
std::string format_double(double v);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace fbmlt
