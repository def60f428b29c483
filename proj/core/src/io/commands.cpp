#include "qwalk/io/commands.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "detail/text.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/fit.hpp"
#include "qwalk/io/manifest.hpp"
#include "qwalk/two_photon.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::io {
namespace {

constexpr std::array<std::string_view, 7> kCommands{
    "evolve", "ensemble", "beta", "crossing", "two-photon", "hom", "gen-maps"};

std::string p_tag(double p) { return "p" + text::format_double(p); }

void require_two_photon(const SimulationConfig& cfg) {
  if (!cfg.two_photon.enabled) throw ConfigError("two_photon.enabled", "must be true for this command");
}

EnsembleResult ensemble_for(const SimulationConfig& cfg, double p) {
  return run_ensemble(cfg.disorder_spec(p), coin_from_reflectivity(cfg.coin_reflectivity), cfg.n_maps,
                      cfg.threads);
}

struct TwoPhotonStats {
  std::vector<CoincidenceMatrix> mean;  // per step
  std::vector<double> mean_var2;
  std::vector<double> std_var2;
};

TwoPhotonStats two_photon_ensemble(const SimulationConfig& cfg, double p, int n_maps) {
  const CoinOperator coin = coin_from_reflectivity(cfg.coin_reflectivity);
  const int n_max = cfg.lattice_half_width();
  const DisorderSpec spec = cfg.disorder_spec(p);
  const int steps = cfg.steps;

  TwoPhotonStats stats;
  stats.mean.resize(static_cast<std::size_t>(steps));
  for (auto& m : stats.mean) {
    m.offset = -n_max;
    m.probabilities = Eigen::MatrixXd::Zero(2 * n_max + 1, 2 * n_max + 1);
  }
  std::vector<std::vector<double>> var2(static_cast<std::size_t>(steps));
  for (int k = 0; k < n_maps; ++k) {
    const PhaseMap map = generate_phase_map(spec, static_cast<std::uint64_t>(k));
    for (int n = 1; n <= steps; ++n) {
      const ModeUnitary u = single_particle_unitary(n_max, coin, map, n);
      const CoincidenceMatrix cm = site_coincidences(
          two_photon_mode_distribution(u, both_ports_at_origin(u, cfg.two_photon.indistinguishability)));
      stats.mean[static_cast<std::size_t>(n - 1)].probabilities += cm.probabilities;
      var2[static_cast<std::size_t>(n - 1)].push_back(variance2(cm));
    }
  }
  for (int n = 0; n < steps; ++n) {
    auto& m = stats.mean[static_cast<std::size_t>(n)];
    m.probabilities /= static_cast<double>(n_maps);
    const auto& v = var2[static_cast<std::size_t>(n)];
    double sum = 0.0, sum_sq = 0.0;
    for (double x : v) {
      sum += x - v.front();
      sum_sq += (x - v.front()) * (x - v.front());
    }
    stats.mean_var2.push_back(v.front() + sum / n_maps);
    stats.std_var2.push_back(
        n_maps > 1 ? std::sqrt(std::max(0.0, sum_sq - sum * sum / n_maps) / (n_maps - 1)) : 0.0);
  }
  return stats;
}

}  // namespace

std::span<const std::string_view> command_names() { return kCommands; }

std::vector<OutputRecord> cmd_evolve(const SimulationConfig& cfg,
                                     const std::optional<std::filesystem::path>& map_path) {
  const PhaseMap map = map_path ? load_map(*map_path) : generate_phase_map(cfg.disorder_spec(cfg.p_values.front()), 0);
  if (map.steps < cfg.steps) {
    throw ConfigError("steps", "phase map has " + std::to_string(map.steps) + " rows, config asks for " +
                                   std::to_string(cfg.steps));
  }
  const auto trajectory = evolve(cfg.lattice_half_width(), coin_from_reflectivity(cfg.coin_reflectivity), map,
                                 cfg.steps, {1.0, 0.0}, cfg.transmission);
  CsvTable table({"step", "site", "probability"});
  for (int n = 1; n <= cfg.steps; ++n) {
    const Distribution dist = position_distribution(trajectory[static_cast<std::size_t>(n - 1)]);
    for (int site = -n; site <= n; ++site) table.row() << n << site << dist.at(site);
  }
  return {write_output(cfg.output_dir / "evolve.csv", table.str())};
}

std::vector<OutputRecord> cmd_ensemble(const SimulationConfig& cfg) {
  std::vector<EnsembleResult> results;
  for (double p : cfg.p_values) results.push_back(ensemble_for(cfg, p));

  std::vector<double> peak(static_cast<std::size_t>(cfg.steps), 0.0);
  for (const auto& r : results)
    for (int n = 0; n < cfg.steps; ++n)
      peak[static_cast<std::size_t>(n)] = std::max(peak[static_cast<std::size_t>(n)], r.mean_variance[static_cast<std::size_t>(n)]);

  CsvTable summary({"p", "step", "mean_var", "std_var", "mean_var_norm", "n_maps", "seed"});
  CsvTable dists({"p", "step", "site", "probability"});
  for (const auto& r : results) {
    for (int n = 1; n <= cfg.steps; ++n) {
      const auto k = static_cast<std::size_t>(n - 1);
      summary.row() << r.p << n << r.mean_variance[k] << r.std_variance[k]
                    << r.mean_variance[k] / peak[k] << r.n_maps << r.master_seed;
      for (int site = -n; site <= n; ++site) dists.row() << r.p << n << site << r.mean_distribution[k].at(site);
    }
  }
  return {write_output(cfg.output_dir / "ensemble.csv", summary.str()),
          write_output(cfg.output_dir / "ensemble_distributions.csv", dists.str())};
}

std::vector<OutputRecord> cmd_beta(const SimulationConfig& cfg) {
  CsvTable table({"p", "beta", "stderr", "prefactor", "fit_first", "fit_last", "method"});
  auto emit = [&](auto&& p_cell, const PowerLawFit& fit) {
    table.row() << p_cell << fit.beta << fit.beta_stderr << fit.prefactor << fit.range.first << fit.range.last
                << to_string(fit.method);
  };
  if (!cfg.synthetic_variances.empty()) {
    emit("synthetic", fit_beta(cfg.synthetic_variances, cfg.fit_range, cfg.fit_method));
  } else {
    for (double p : cfg.p_values) {
      const EnsembleResult r = ensemble_for(cfg, p);
      emit(p, fit_beta(r.mean_variance, cfg.fit_range, cfg.fit_method));
    }
  }
  return {write_output(cfg.output_dir / "beta.csv", table.str())};
}

std::vector<OutputRecord> cmd_crossing(const SimulationConfig& cfg) {
  const SimilarityScan scan = similarity_scan(cfg.p_grid, cfg.disorder_spec(0.0),
                                              coin_from_reflectivity(cfg.coin_reflectivity), cfg.n_maps,
                                              cfg.threads);
  CsvTable curves({"step", "p", "s_ordered", "s_disordered"});
  for (int n = 1; n <= cfg.steps; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    for (std::size_t i = 0; i < scan.p_grid.size(); ++i) {
      curves.row() << n << scan.p_grid[i] << scan.to_ordered[k][i] << scan.to_disordered[k][i];
    }
  }
  std::vector<OutputRecord> outputs{write_output(cfg.output_dir / "similarity_scan.csv", curves.str())};

  CsvTable crossings({"step", "p_star", "low_resolution"});
  for (int n : cfg.crossing_steps) {
    const auto k = static_cast<std::size_t>(n - 1);
    const CrossingPoint cp = crossing_point(scan.p_grid, scan.to_ordered[k], scan.to_disordered[k], n);
    crossings.row() << cp.step_n << cp.p_star << cp.low_resolution;
  }
  outputs.push_back(write_output(cfg.output_dir / "crossing.csv", crossings.str()));
  return outputs;
}

std::vector<OutputRecord> cmd_two_photon(const SimulationConfig& cfg) {
  require_two_photon(cfg);
  const TwoPhotonStats ordered = two_photon_ensemble(cfg, 0.0, 1);
  const TwoPhotonStats disordered = two_photon_ensemble(cfg, 1.0, cfg.n_maps);

  std::vector<OutputRecord> outputs;
  CsvTable var2({"p", "step", "var2_of_mean", "mean_var2", "std_var2", "var2_ordered", "var2_disordered"});
  for (double p : cfg.p_values) {
    const TwoPhotonStats stats = p == 0.0 ? ordered : p == 1.0 ? disordered : two_photon_ensemble(cfg, p, cfg.n_maps);
    for (int n = 1; n <= cfg.steps; ++n) {
      const auto k = static_cast<std::size_t>(n - 1);
      const CoincidenceMatrix& cm = stats.mean[k];
      var2.row() << p << n << variance2(cm) << stats.mean_var2[k] << stats.std_var2[k]
                 << variance2(ordered.mean[k]) << variance2(disordered.mean[k]);

      std::vector<std::string> header{"site_i", "site_j", "probability"};
      if (cfg.two_photon.display_normalize) header.emplace_back("normalized_to_max");
      CsvTable matrix(header);
      const CoincidenceMatrix display = normalized_to_max(cm);
      for (int i = -n; i <= n; ++i) {
        for (int j = -n; j <= n; ++j) {
          auto row = matrix.row();
          row << i << j << cm.at(i, j);
          if (cfg.two_photon.display_normalize) row << display.at(i, j);
        }
      }
      outputs.push_back(write_output(
          cfg.output_dir / ("coincidence_" + p_tag(p) + "_step" + std::to_string(n) + ".csv"), matrix.str()));
    }
  }
  outputs.push_back(write_output(cfg.output_dir / "var2.csv", var2.str()));
  return outputs;
}

std::vector<OutputRecord> cmd_hom(const SimulationConfig& cfg) {
  require_two_photon(cfg);
  const HomScan scan = hom_scan(cfg.two_photon.delays, cfg.two_photon.coherence_time, cfg.two_photon.visibility,
                                coin_from_reflectivity(cfg.coin_reflectivity));
  CsvTable table({"delay", "eta", "coincidence"});
  for (std::size_t i = 0; i < scan.delays.size(); ++i) {
    table.row() << scan.delays[i] << scan.indistinguishability[i] << scan.coincidences[i];
  }
  return {write_output(cfg.output_dir / "hom.csv", table.str())};
}

std::vector<OutputRecord> cmd_gen_maps(const SimulationConfig& cfg) {
  std::vector<OutputRecord> outputs;
  CsvTable index({"file", "p", "map_index", "seed", "realized_fraction"});
  for (double p : cfg.p_values) {
    const DisorderSpec spec = cfg.disorder_spec(p);
    for (int k = 0; k < cfg.n_maps; ++k) {
      const PhaseMap map = generate_phase_map(spec, static_cast<std::uint64_t>(k));
      char name[32];
      std::snprintf(name, sizeof name, "map_%05d.txt", k);
      const std::filesystem::path rel = std::filesystem::path(p_tag(p)) / name;
      outputs.push_back(write_output(cfg.output_dir / "maps" / rel, format_phase_map(map)));
      index.row() << rel.generic_string() << p << k << map.seed << realized_fraction(map);
    }
  }
  outputs.push_back(write_output(cfg.output_dir / "maps" / "index.csv", index.str()));
  return outputs;
}

int run_command(std::string_view name, const CommandOptions& options, std::ostream& log, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  std::string stage = "load config";
  const std::string prefix = "qwalk " + std::string(name) + ": ";
  try {
    SimulationConfig cfg = load_config(options.config_path);
    if (options.seed) cfg.master_seed = *options.seed;
    if (options.threads) cfg.threads = *options.threads;
    if (options.out_dir) cfg.output_dir = *options.out_dir;
    cfg.validate();

    stage = "run";
    std::vector<OutputRecord> outputs;
    if (name == "evolve") {
      outputs = cmd_evolve(cfg, options.map_path);
    } else if (name == "ensemble") {
      outputs = cmd_ensemble(cfg);
    } else if (name == "beta") {
      outputs = cmd_beta(cfg);
    } else if (name == "crossing") {
      outputs = cmd_crossing(cfg);
    } else if (name == "two-photon") {
      outputs = cmd_two_photon(cfg);
    } else if (name == "hom") {
      outputs = cmd_hom(cfg);
    } else if (name == "gen-maps") {
      outputs = cmd_gen_maps(cfg);
    } else {
      err << prefix << "unknown command\n";
      return kExitFailure;
    }

    stage = "write manifest";
    RunManifest manifest;
    manifest.command = std::string(name);
    manifest.config = cfg.echo();
    manifest.outputs = outputs;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_output(cfg.output_dir / "manifest.json", manifest.to_json());
    for (const auto& out : outputs) log << out.path.generic_string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << prefix << stage << " failed: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << prefix << stage << " failed: " << e.what() << '\n';
    return kExitConfig;
  } catch (const AmbiguityError& e) {
    err << prefix << stage << " failed: ambiguous crossing: " << e.what() << '\n';
    return kExitAmbiguous;
  } catch (const std::exception& e) {
    err << prefix << stage << " failed: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qwalk::io
