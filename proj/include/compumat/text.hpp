#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace compumat::text {

/// Shortest round-trip decimal; locale independent.
std::string shortest(double value);
/// Fixed-point with `decimals` digits; locale independent. Negative zero prints as zero.
std::string fixed(double value, int decimals);

std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace compumat::text
