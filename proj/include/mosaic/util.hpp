#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mosaic {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// A line of input with its 1-based number. CRLF endings are stripped; a final
// newline does not produce an extra empty line.
struct NumberedLine {
  std::size_t number;
  std::string_view text;
};
std::vector<NumberedLine> split_lines(std::string_view bytes);

// True when bytes are valid UTF-8 without a byte-order mark.
bool is_clean_utf8(std::string_view bytes) noexcept;

// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double value);

// Rounds to 6 decimal places; the report serializes every real this way.
double round6(double value) noexcept;

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);

namespace stats {

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> values);
double median(std::vector<double> values);
// Median absolute deviation around the median (unscaled).
double mad(std::span<const double> values);
// Linear-interpolated percentile, q in [0, 100].
double percentile(std::vector<double> values, double q);

}  // namespace stats

}  // namespace mosaic
