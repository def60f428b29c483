#include "qwalk/io/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qwalk/errors.hpp"
#include "detail/text.hpp"

namespace qwalk::io {
namespace {

int parse_int(const std::string& key, std::string_view value) {
  int out = 0;
  const auto r = std::from_chars(value.data(), value.data() + value.size(), out);
  if (r.ec != std::errc{} || r.ptr != value.data() + value.size()) {
    throw ConfigError(key, "expected an integer, got '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, std::string_view value) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(value.data(), value.data() + value.size(), out);
  if (r.ec != std::errc{} || r.ptr != value.data() + value.size()) {
    throw ConfigError(key, "expected an unsigned integer, got '" + std::string(value) + "'");
  }
  return out;
}

double parse_real(const std::string& key, std::string_view value) {
  double out = 0.0;
  if (!text::parse_double(value, out)) {
    throw ConfigError(key, "expected a real number, got '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key, "expected true/false, got '" + std::string(value) + "'");
}

template <typename Fn>
auto with_field(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw ConfigError(key, e.what());
  }
}

std::string join_reals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += text::format_double(values[i]);
  }
  return out;
}

}  // namespace

std::vector<double> parse_real_list(std::string_view value) {
  value = text::trim(value);
  if (value.empty()) return {};
  if (value.find(':') != std::string_view::npos) {
    const auto parts = text::split(value, ":");
    double a = 0, b = 0, h = 0;
    if (parts.size() != 3 || !text::parse_double(parts[0], a) || !text::parse_double(parts[1], b) ||
        !text::parse_double(parts[2], h) || !(h > 0.0) || b < a) {
      throw DomainError("range must be start:stop:step with step > 0 and stop >= start");
    }
    const auto count = static_cast<long>(std::llround((b - a) / h));
    std::vector<double> out;
    for (long k = 0; k <= count; ++k) {
      // Round to 12 decimals so 0.07 reads as 0.07 rather than 0.07000000000000001.
      double v = a + static_cast<double>(k) * h;
      v = std::round(v * 1e12) / 1e12;
      out.push_back(std::min(v, b));
    }
    return out;
  }
  std::vector<double> out;
  for (auto token : text::split(value, ",")) {
    double v = 0.0;
    if (!text::parse_double(text::trim(token), v)) {
      throw DomainError("bad list entry '" + std::string(token) + "'");
    }
    out.push_back(v);
  }
  return out;
}

SimulationConfig::SimulationConfig() : p_grid(parse_real_list("0:1:0.01")) {
  two_photon.delays = parse_real_list("-3:3:0.1");
}

DisorderSpec SimulationConfig::disorder_spec(double p) const {
  DisorderSpec spec;
  spec.p = p;
  spec.steps = steps;
  spec.alphabet = alphabet;
  spec.sampling = sampling;
  spec.draw = draw;
  spec.master_seed = master_seed;
  return spec;
}

void SimulationConfig::validate() const {
  if (steps < 1) throw ConfigError("steps", "must be >= 1");
  if (n_max < 0) throw ConfigError("n_max", "must be >= 0 (0 selects n_max = steps)");
  if (steps > lattice_half_width()) {
    throw ConfigError("steps", "steps = " + std::to_string(steps) + " exceeds n_max = " +
                                   std::to_string(lattice_half_width()));
  }
  if (p_values.empty()) throw ConfigError("p_values", "must not be empty");
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p_values", "entries must lie in [0,1]");
  }
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p_grid", "entries must lie in [0,1]");
  }
  if (n_maps < 1) throw ConfigError("n_maps", "must be >= 1");
  if (!(coin_reflectivity >= 0.0 && coin_reflectivity <= 1.0)) {
    throw ConfigError("coin_reflectivity", "must lie in [0,1]");
  }
  with_field("alphabet", [&] { disorder_spec(0.0).validate(); });
  if (fit_range.first < 1) throw ConfigError("fit_first", "must be >= 1");
  if (fit_range.size() < 2) throw ConfigError("fit_last", "fit range must span at least two steps");
  for (int n : crossing_steps) {
    if (n < 1 || n > steps) throw ConfigError("crossing_steps", "entries must lie in 1..steps");
  }
  if (!(transmission > 0.0 && transmission <= 1.0)) throw ConfigError("transmission", "must lie in (0,1]");
  const auto& tp = two_photon;
  if (!(tp.indistinguishability >= 0.0 && tp.indistinguishability <= 1.0)) {
    throw ConfigError("two_photon.eta", "must lie in [0,1]");
  }
  if (!(tp.visibility >= 0.0 && tp.visibility <= 1.0)) throw ConfigError("two_photon.visibility", "must lie in [0,1]");
  if (!(tp.coherence_time > 0.0)) throw ConfigError("two_photon.coherence_time", "must be positive");
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

std::vector<std::pair<std::string, std::string>> SimulationConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("steps", std::to_string(steps));
  kv.emplace_back("n_max", std::to_string(lattice_half_width()));
  kv.emplace_back("p_values", join_reals(p_values));
  kv.emplace_back("n_maps", std::to_string(n_maps));
  kv.emplace_back("seed", std::to_string(master_seed));
  kv.emplace_back("coin_reflectivity", text::format_double(coin_reflectivity));
  kv.emplace_back("sampling_mode", std::string(to_string(sampling)));
  kv.emplace_back("phase_draw", std::string(to_string(draw)));
  std::string alpha;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i) alpha += ',';
    alpha += text::format_phase(alphabet[i]);
  }
  kv.emplace_back("alphabet", alpha);
  kv.emplace_back("fit_first", std::to_string(fit_range.first));
  kv.emplace_back("fit_last", std::to_string(fit_range.last));
  kv.emplace_back("fit_method", std::string(to_string(fit_method)));
  kv.emplace_back("p_grid", join_reals(p_grid));
  std::string cs;
  for (std::size_t i = 0; i < crossing_steps.size(); ++i) cs += (i ? "," : "") + std::to_string(crossing_steps[i]);
  kv.emplace_back("crossing_steps", cs);
  kv.emplace_back("synthetic_variances", join_reals(synthetic_variances));
  kv.emplace_back("transmission", text::format_double(transmission));
  kv.emplace_back("threads", std::to_string(threads));
  kv.emplace_back("output_dir", output_dir.string());
  kv.emplace_back("two_photon.enabled", two_photon.enabled ? "true" : "false");
  kv.emplace_back("two_photon.eta", text::format_double(two_photon.indistinguishability));
  kv.emplace_back("two_photon.visibility", text::format_double(two_photon.visibility));
  kv.emplace_back("two_photon.coherence_time", text::format_double(two_photon.coherence_time));
  kv.emplace_back("two_photon.delays", join_reals(two_photon.delays));
  kv.emplace_back("two_photon.display_normalize", two_photon.display_normalize ? "true" : "false");
  return kv;
}

SimulationConfig parse_config(std::string_view content) {
  SimulationConfig cfg;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (std::string_view raw : text::lines_of(content)) {
    ++line_no;
    std::string_view line = raw.substr(0, raw.find('#'));
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string_view value = text::trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");

    auto reals = [&] { return with_field(key, [&] { return parse_real_list(value); }); };

    if (key == "steps") {
      cfg.steps = parse_int(key, value);
    } else if (key == "n_max") {
      cfg.n_max = parse_int(key, value);
    } else if (key == "p_values") {
      cfg.p_values = reals();
    } else if (key == "n_maps") {
      cfg.n_maps = parse_int(key, value);
    } else if (key == "seed") {
      cfg.master_seed = parse_u64(key, value);
    } else if (key == "coin_reflectivity") {
      cfg.coin_reflectivity = parse_real(key, value);
    } else if (key == "sampling_mode") {
      cfg.sampling = with_field(key, [&] { return sampling_mode_from_string(value); });
    } else if (key == "phase_draw") {
      cfg.draw = with_field(key, [&] { return phase_draw_from_string(value); });
    } else if (key == "alphabet") {
      cfg.alphabet.clear();
      for (auto token : text::split(value, ",")) {
        double phase = 0.0;
        if (!text::parse_phase(text::trim(token), phase)) {
          throw ConfigError(key, "bad phase '" + std::string(token) + "'");
        }
        cfg.alphabet.push_back(phase);
      }
    } else if (key == "fit_first") {
      cfg.fit_range.first = parse_int(key, value);
    } else if (key == "fit_last") {
      cfg.fit_range.last = parse_int(key, value);
    } else if (key == "fit_method") {
      cfg.fit_method = with_field(key, [&] { return fit_method_from_string(value); });
    } else if (key == "p_grid") {
      cfg.p_grid = reals();
    } else if (key == "crossing_steps") {
      cfg.crossing_steps.clear();
      for (auto token : text::split(value, ",")) cfg.crossing_steps.push_back(parse_int(key, text::trim(token)));
    } else if (key == "synthetic_variances") {
      cfg.synthetic_variances = reals();
    } else if (key == "transmission") {
      cfg.transmission = parse_real(key, value);
    } else if (key == "threads") {
      const int t = parse_int(key, value);
      if (t < 0) throw ConfigError(key, "must be >= 0");
      cfg.threads = static_cast<unsigned>(t);
    } else if (key == "output_dir") {
      cfg.output_dir = std::string(value);
    } else if (key == "two_photon.enabled") {
      cfg.two_photon.enabled = parse_bool(key, value);
    } else if (key == "two_photon.eta") {
      cfg.two_photon.indistinguishability = parse_real(key, value);
    } else if (key == "two_photon.visibility") {
      cfg.two_photon.visibility = parse_real(key, value);
    } else if (key == "two_photon.coherence_time") {
      cfg.two_photon.coherence_time = parse_real(key, value);
    } else if (key == "two_photon.delays") {
      cfg.two_photon.delays = reals();
    } else if (key == "two_photon.display_normalize") {
      cfg.two_photon.display_normalize = parse_bool(key, value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  if (!seen.contains("crossing_steps")) {
    cfg.crossing_steps.clear();
    for (int n = std::max(1, cfg.steps - 2); n <= cfg.steps; ++n) cfg.crossing_steps.push_back(n);
  }
  cfg.validate();
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace qwalk::io
