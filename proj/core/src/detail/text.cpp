#include "detail/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace qwalk::text {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto result = std::from_chars(token.data(), token.data() + token.size(), out);
  return result.ec == std::errc{} && result.ptr == token.data() + token.size() && std::isfinite(out);
}

std::string format_phase(double half_turns) {
  if (half_turns == 0.0) return "0";
  if (half_turns == 1.0) return "pi";
  return format_double(half_turns) + "pi";
}

bool parse_phase(std::string_view token, double& out) {
  const auto pi_pos = token.find("pi");
  if (pi_pos == std::string_view::npos) {
    double v = 0.0;
    if (!parse_double(token, v) || v != 0.0) return false;
    out = 0.0;
    return true;
  }
  double coefficient = 1.0;
  if (pi_pos > 0 && !parse_double(token.substr(0, pi_pos), coefficient)) return false;
  const std::string_view rest = token.substr(pi_pos + 2);
  if (rest.empty()) {
    out = coefficient;
    return true;
  }
  double divisor = 0.0;
  if (rest.front() != '/' || !parse_double(rest.substr(1), divisor) || divisor == 0.0) return false;
  out = coefficient / divisor;
  return true;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view text, std::string_view separators) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = text.find_first_not_of(separators, pos);
    if (start == std::string_view::npos) break;
    const std::size_t end = text.find_first_of(separators, start);
    if (end == std::string_view::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    pos = end;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    out.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

}  // namespace qwalk::text
