#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace themetrack::io {

// RFC 4180 style field splitting; quoted fields may contain commas and doubled quotes.
// Returns false when a quote is left open.
bool split_csv_line(std::string_view line, std::vector<std::string>& fields);

std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Shortest round-trippable decimal form, stable across runs.
std::string format_real(double value);

}  // namespace themetrack::io
