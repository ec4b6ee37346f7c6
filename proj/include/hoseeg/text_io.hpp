#pragma once

// Small helpers shared by the CSV readers and writers.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hoseeg::text {

std::string read_file(const std::filesystem::path& path);

/// Writes to `<path>.tmp` and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest representation that parses back to the identical double.
void append_number(std::string& out, double value);
std::string format_number(double value);

/// Strict full-field parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_integer(std::string_view field);

std::vector<std::string_view> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

/// Iterates lines of a buffer, stripping a trailing '\r'. Tracks 1-based line numbers.
class LineReader {
public:
  explicit LineReader(std::string_view buffer) : rest_(buffer) {}
  bool next(std::string_view& line);
  std::size_t line_number() const { return line_; }

private:
  std::string_view rest_;
  std::size_t line_ = 0;
};

/// Parses a `# key=value` comment line; nullopt if the line is not of that form.
std::optional<std::pair<std::string, std::string>> parse_meta(std::string_view line);

}  // namespace hoseeg::text
