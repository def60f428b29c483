#include "qwalk/disorder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "detail/text.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {
namespace {

using text::format_double;
using text::lines_of;
using text::parse_double;
using text::split;
using text::trim;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) with 53 random bits; independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % n;
}

// Alphabet index for a disordered cell; `s` is uniform in [0, 1).
std::size_t disordered_index(double s, double p, std::size_t k, PhaseDraw draw) {
  if (k == 1) return 0;
  if (draw == PhaseDraw::uniform) {
    return std::min(k - 1, static_cast<std::size_t>(s * static_cast<double>(k)));
  }
  const double nonzero = static_cast<double>(k - 1);
  const double r = std::min(1.0, nonzero / (static_cast<double>(k) * p));
  if (s >= r) return 0;
  return 1 + std::min(k - 2, static_cast<std::size_t>(s / r * nonzero));
}

void validate_alphabet(const PhaseAlphabet& alphabet) {
  if (alphabet.empty()) throw DomainError("phase alphabet is empty");
  if (alphabet.front() != 0.0) throw DomainError("phase alphabet must start with 0");
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (!std::isfinite(alphabet[i])) throw DomainError("phase alphabet entries must be finite");
    for (std::size_t j = 0; j < i; ++j) {
      if (alphabet[i] == alphabet[j]) throw DomainError("phase alphabet has duplicate entries");
    }
  }
}

}  // namespace

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::bernoulli ? "bernoulli" : "exact_fraction";
}

std::string_view to_string(PhaseDraw draw) {
  return draw == PhaseDraw::saturating ? "saturating" : "uniform";
}

SamplingMode sampling_mode_from_string(std::string_view text) {
  if (text == "bernoulli") return SamplingMode::bernoulli;
  if (text == "exact_fraction") return SamplingMode::exact_fraction;
  throw DomainError("unknown sampling mode '" + std::string(text) + "'");
}

PhaseDraw phase_draw_from_string(std::string_view text) {
  if (text == "saturating") return PhaseDraw::saturating;
  if (text == "uniform") return PhaseDraw::uniform;
  throw DomainError("unknown phase draw '" + std::string(text) + "'");
}

void DisorderSpec::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1], got " + std::to_string(p));
  if (steps < 1) throw DomainError("steps must be >= 1");
  validate_alphabet(alphabet);
}

std::size_t PhaseMap::cell_count() const {
  std::size_t count = 0;
  for (const auto& r : rows) count += r.size();
  return count;
}

PhaseMap PhaseMap::ordered(int steps) {
  PhaseMap map;
  map.steps = steps;
  for (int n = 1; n <= steps; ++n) {
    map.rows.emplace_back(static_cast<std::size_t>(2 * n + 1), 0.0);
    map.mask.emplace_back(static_cast<std::size_t>(2 * n + 1), std::uint8_t{0});
  }
  return map;
}

std::uint64_t derive_map_seed(std::uint64_t master_seed, std::uint64_t map_index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(map_index + 0x632be59bd9b4e019ULL));
}

PhaseMap regenerate_phase_map(std::uint64_t seed, double p, int steps, SamplingMode sampling,
                              PhaseDraw draw, const PhaseAlphabet& alphabet) {
  DisorderSpec spec{p, steps, alphabet, sampling, draw, 0};
  spec.validate();

  PhaseMap map = PhaseMap::ordered(steps);
  map.alphabet = alphabet;
  map.p_nominal = p;
  map.seed = seed;
  map.sampling = sampling;
  map.draw = draw;

  std::mt19937_64 engine(seed);
  const std::size_t k = alphabet.size();

  if (sampling == SamplingMode::bernoulli) {
    // One uniform per cell: the disorder decision and the phase come from the same
    // draw, so maps from one seed are nested as p grows.
    for (int n = 1; n <= steps; ++n) {
      auto& row = map.rows[static_cast<std::size_t>(n - 1)];
      auto& flags = map.mask[static_cast<std::size_t>(n - 1)];
      for (std::size_t c = 0; c < row.size(); ++c) {
        const double u = uniform01(engine);
        if (u < p) {
          flags[c] = 1;
          row[c] = alphabet[disordered_index(u / p, p, k, draw)];
        }
      }
    }
    return map;
  }

  const std::size_t cells = map.cell_count();
  const auto chosen_count = std::min(
      cells, static_cast<std::size_t>(std::floor(p * static_cast<double>(cells) + 1e-9)));
  std::vector<std::size_t> order(cells);
  for (std::size_t i = 0; i < cells; ++i) order[i] = i;
  for (std::size_t i = 0; i < chosen_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(engine, cells - i));
    std::swap(order[i], order[j]);
  }
  std::vector<std::uint8_t> selected(cells, 0);
  for (std::size_t i = 0; i < chosen_count; ++i) selected[order[i]] = 1;

  std::size_t flat = 0;
  for (int n = 1; n <= steps; ++n) {
    auto& row = map.rows[static_cast<std::size_t>(n - 1)];
    auto& flags = map.mask[static_cast<std::size_t>(n - 1)];
    for (std::size_t c = 0; c < row.size(); ++c, ++flat) {
      if (!selected[flat]) continue;
      flags[c] = 1;
      row[c] = alphabet[disordered_index(uniform01(engine), p, k, draw)];
    }
  }
  return map;
}

PhaseMap generate_phase_map(const DisorderSpec& spec, std::uint64_t map_index) {
  spec.validate();
  return regenerate_phase_map(derive_map_seed(spec.master_seed, map_index), spec.p, spec.steps,
                              spec.sampling, spec.draw, spec.alphabet);
}

double realized_fraction(const PhaseMap& map) {
  std::size_t cells = 0;
  std::size_t disordered = 0;
  for (const auto& flags : map.mask) {
    cells += flags.size();
    for (auto f : flags) disordered += f;
  }
  return cells == 0 ? 0.0 : static_cast<double>(disordered) / static_cast<double>(cells);
}

std::string format_phase_map(const PhaseMap& map) {
  std::ostringstream out;
  out << "steps=" << map.steps << '\n';
  out << "p=" << format_double(map.p_nominal) << '\n';
  out << "seed=" << map.seed << '\n';
  out << "mode=" << to_string(map.sampling) << '\n';
  out << "draw=" << to_string(map.draw) << '\n';
  out << "alphabet=";
  for (std::size_t i = 0; i < map.alphabet.size(); ++i) {
    if (i) out << ',';
    out << text::format_phase(map.alphabet[i]);
  }
  out << '\n';
  for (const auto& row : map.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      out << format_double(row[c]);
    }
    out << '\n';
  }
  out << "mask\n";
  for (const auto& flags : map.mask) {
    for (std::size_t c = 0; c < flags.size(); ++c) {
      if (c) out << ' ';
      out << static_cast<int>(flags[c]);
    }
    out << '\n';
  }
  return out.str();
}

PhaseMap parse_phase_map(std::string_view text) {
  PhaseMap map;
  map.rows.clear();
  map.mask.clear();
  bool have_steps = false, have_p = false, have_seed = false, have_mode = false, have_alphabet = false;
  bool in_mask = false;

  std::size_t line_no = 0;
  for (std::string_view raw : lines_of(text)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (const auto eq = line.find('='); eq != std::string_view::npos) {
      if (!map.rows.empty()) throw ParseError(line_no, "header", "header line after phase rows");
      const std::string key(trim(line.substr(0, eq)));
      const std::string_view value = trim(line.substr(eq + 1));
      if (key == "steps") {
        int steps = 0;
        const auto r = std::from_chars(value.data(), value.data() + value.size(), steps);
        if (r.ec != std::errc{} || r.ptr != value.data() + value.size() || steps < 1) {
          throw ParseError(line_no, key, "expected a positive integer");
        }
        map.steps = steps;
        have_steps = true;
      } else if (key == "p") {
        if (!parse_double(value, map.p_nominal) || map.p_nominal < 0.0 || map.p_nominal > 1.0) {
          throw ParseError(line_no, key, "expected a real in [0,1]");
        }
        have_p = true;
      } else if (key == "seed") {
        const auto r = std::from_chars(value.data(), value.data() + value.size(), map.seed);
        if (r.ec != std::errc{} || r.ptr != value.data() + value.size()) {
          throw ParseError(line_no, key, "expected an unsigned 64-bit integer");
        }
        have_seed = true;
      } else if (key == "mode") {
        try {
          map.sampling = sampling_mode_from_string(value);
        } catch (const DomainError& e) {
          throw ParseError(line_no, key, e.what());
        }
        have_mode = true;
      } else if (key == "draw") {
        try {
          map.draw = phase_draw_from_string(value);
        } catch (const DomainError& e) {
          throw ParseError(line_no, key, e.what());
        }
      } else if (key == "alphabet") {
        map.alphabet.clear();
        for (auto token : split(value, ",")) {
          double phase = 0.0;
          if (!text::parse_phase(trim(token), phase)) {
            throw ParseError(line_no, key, "bad phase '" + std::string(token) + "'");
          }
          map.alphabet.push_back(phase);
        }
        try {
          validate_alphabet(map.alphabet);
        } catch (const DomainError& e) {
          throw ParseError(line_no, key, e.what());
        }
        have_alphabet = true;
      } else {
        throw ParseError(line_no, key, "unknown header key");
      }
      continue;
    }

    if (line == "mask") {
      if (in_mask) throw ParseError(line_no, "mask", "duplicate mask block");
      in_mask = true;
      continue;
    }

    if (!have_steps || !have_p || !have_seed || !have_mode || !have_alphabet) {
      throw ParseError(line_no, "header",
                       "rows must follow the steps, p, seed, mode and alphabet header lines");
    }

    const int n = static_cast<int>(in_mask ? map.mask.size() : map.rows.size()) + 1;
    const std::string field = std::string(in_mask ? "mask row " : "row ") + std::to_string(n);
    if (n > map.steps) throw ParseError(line_no, field, "more rows than steps=" + std::to_string(map.steps));
    const auto tokens = split(line, " \t");
    if (tokens.size() != static_cast<std::size_t>(2 * n + 1)) {
      throw ParseError(line_no, field, "expected " + std::to_string(2 * n + 1) + " entries, got " +
                                           std::to_string(tokens.size()));
    }
    if (in_mask) {
      std::vector<std::uint8_t> flags;
      for (std::size_t c = 0; c < tokens.size(); ++c) {
        if (tokens[c] != "0" && tokens[c] != "1") {
          throw ParseError(line_no, field, "entry " + std::to_string(c) + " must be 0 or 1");
        }
        flags.push_back(tokens[c] == "1" ? 1 : 0);
      }
      map.mask.push_back(std::move(flags));
    } else {
      std::vector<double> row;
      for (std::size_t c = 0; c < tokens.size(); ++c) {
        double v = 0.0;
        if (!parse_double(tokens[c], v)) {
          throw ParseError(line_no, field, "entry " + std::to_string(c) + " is not a number");
        }
        if (std::find(map.alphabet.begin(), map.alphabet.end(), v) == map.alphabet.end()) {
          throw ParseError(line_no, field, "entry " + std::to_string(c) + " (" + std::string(tokens[c]) +
                                               " pi) is not in the alphabet");
        }
        row.push_back(v);
      }
      map.rows.push_back(std::move(row));
    }
  }

  if (!have_steps) throw ParseError(line_no, "steps", "missing header line");
  if (static_cast<int>(map.rows.size()) != map.steps) {
    throw ParseError(line_no, "rows", "expected " + std::to_string(map.steps) + " phase rows, got " +
                                          std::to_string(map.rows.size()));
  }
  if (in_mask) {
    if (static_cast<int>(map.mask.size()) != map.steps) {
      throw ParseError(line_no, "mask", "expected " + std::to_string(map.steps) + " mask rows, got " +
                                            std::to_string(map.mask.size()));
    }
    for (std::size_t n = 0; n < map.rows.size(); ++n) {
      for (std::size_t c = 0; c < map.rows[n].size(); ++c) {
        if (!map.mask[n][c] && map.rows[n][c] != 0.0) {
          throw ParseError(line_no, "mask row " + std::to_string(n + 1),
                           "ordered cell " + std::to_string(c) + " carries a non-zero phase");
        }
      }
    }
  } else {
    for (const auto& row : map.rows) {
      std::vector<std::uint8_t> flags;
      for (double v : row) flags.push_back(v != 0.0 ? 1 : 0);
      map.mask.push_back(std::move(flags));
    }
  }
  return map;
}

void save_map(const PhaseMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << format_phase_map(map);
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

PhaseMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_phase_map(buffer.str());
}

}  // namespace qwalk
