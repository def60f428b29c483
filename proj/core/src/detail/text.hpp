#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small parsing/formatting helpers shared by the text formats.
namespace qwalk::text {

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);
/// Strict: the whole token must be a finite number.
bool parse_double(std::string_view token, double& out);

/// Phase in units of pi as written in files: 0, pi, 0.5pi, pi/2, 3pi/2.
std::string format_phase(double half_turns);
bool parse_phase(std::string_view token, double& out);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view text, std::string_view separators);
/// Lines without terminators; a trailing newline does not open an extra line.
std::vector<std::string_view> lines_of(std::string_view text);

}  // namespace qwalk::text
