#include "qwalk/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "qwalk/errors.hpp"

namespace qwalk {
namespace {

constexpr int kBlockSize = 32;

struct BlockSums {
  // [step - 1][site + steps]
  std::vector<std::vector<double>> distribution;
};

unsigned resolve_threads(unsigned requested, int work_items) {
  unsigned threads = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return std::min<unsigned>(threads, static_cast<unsigned>(std::max(1, work_items)));
}

// Runs `task(i)` for i in [0, count) on `threads` workers; rethrows the first failure.
template <typename Task>
void parallel_for(int count, unsigned threads, Task&& task) {
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

double EnsembleResult::standard_error(int step) const {
  return std_variance.at(static_cast<std::size_t>(step - 1)) / std::sqrt(static_cast<double>(n_maps));
}

EnsembleResult run_ensemble(const DisorderSpec& spec, const CoinOperator& coin, int n_maps,
                            unsigned threads) {
  spec.validate();
  if (n_maps < 1) throw DomainError("n_maps must be >= 1");

  const int steps = spec.steps;
  const int width = 2 * steps + 1;
  const int blocks = (n_maps + kBlockSize - 1) / kBlockSize;

  std::vector<double> variances(static_cast<std::size_t>(n_maps) * static_cast<std::size_t>(steps));
  std::vector<BlockSums> block_sums(static_cast<std::size_t>(blocks));

  parallel_for(blocks, resolve_threads(threads, blocks), [&](int b) {
    BlockSums& sums = block_sums[static_cast<std::size_t>(b)];
    sums.distribution.assign(static_cast<std::size_t>(steps),
                             std::vector<double>(static_cast<std::size_t>(width), 0.0));
    const int first = b * kBlockSize;
    const int last = std::min(n_maps, first + kBlockSize);
    for (int k = first; k < last; ++k) {
      const PhaseMap map = generate_phase_map(spec, static_cast<std::uint64_t>(k));
      WalkState state = initial_state(steps);
      for (int n = 1; n <= steps; ++n) {
        advance(state, coin, map.row(n));
        const Distribution dist = position_distribution(state);
        variances[static_cast<std::size_t>(k) * steps + (n - 1)] = variance(dist);
        auto& acc = sums.distribution[static_cast<std::size_t>(n - 1)];
        for (int j = 0; j < width; ++j) acc[static_cast<std::size_t>(j)] += dist.probabilities[static_cast<std::size_t>(j)];
      }
    }
  });

  EnsembleResult result;
  result.p = spec.p;
  result.steps = steps;
  result.n_maps = n_maps;
  result.master_seed = spec.master_seed;
  result.mean_variance.resize(static_cast<std::size_t>(steps));
  result.std_variance.resize(static_cast<std::size_t>(steps));
  result.mean_distribution.resize(static_cast<std::size_t>(steps));

  const double count = static_cast<double>(n_maps);
  for (int n = 0; n < steps; ++n) {
    // Shifted two-pass sums: identical samples give exactly zero spread.
    const double shift = variances[static_cast<std::size_t>(n)];
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < n_maps; ++k) {
      const double d = variances[static_cast<std::size_t>(k) * steps + n] - shift;
      sum += d;
      sum_sq += d * d;
    }
    result.mean_variance[static_cast<std::size_t>(n)] = shift + sum / count;
    if (n_maps > 1) {
      const double ss = std::max(0.0, sum_sq - sum * sum / count);
      result.std_variance[static_cast<std::size_t>(n)] = std::sqrt(ss / (count - 1.0));
    }

    Distribution& mean = result.mean_distribution[static_cast<std::size_t>(n)];
    mean.offset = -steps;
    mean.probabilities.assign(static_cast<std::size_t>(width), 0.0);
    for (const BlockSums& sums : block_sums) {
      const auto& acc = sums.distribution[static_cast<std::size_t>(n)];
      for (int j = 0; j < width; ++j) mean.probabilities[static_cast<std::size_t>(j)] += acc[static_cast<std::size_t>(j)];
    }
    for (double& v : mean.probabilities) v /= count;
  }
  return result;
}

SimilarityScan similarity_scan(std::span<const double> p_grid, const DisorderSpec& base,
                               const CoinOperator& coin, int n_maps, unsigned threads) {
  if (p_grid.empty()) throw DomainError("similarity scan needs a non-empty p grid");
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p grid value outside [0,1]");
  }

  auto ensemble_at = [&](double p) {
    DisorderSpec spec = base;
    spec.p = p;
    return run_ensemble(spec, coin, n_maps, threads);
  };

  SimilarityScan scan;
  scan.p_grid.assign(p_grid.begin(), p_grid.end());
  scan.steps = base.steps;
  for (double p : p_grid) scan.ensembles.push_back(ensemble_at(p));

  auto find = [&](double p) -> const EnsembleResult* {
    for (const auto& e : scan.ensembles)
      if (e.p == p) return &e;
    return nullptr;
  };
  std::optional<EnsembleResult> extra_ordered;
  std::optional<EnsembleResult> extra_disordered;
  const EnsembleResult* ordered = find(0.0);
  if (!ordered) ordered = &extra_ordered.emplace(ensemble_at(0.0));
  const EnsembleResult* disordered = find(1.0);
  if (!disordered) disordered = &extra_disordered.emplace(ensemble_at(1.0));

  scan.to_ordered.assign(static_cast<std::size_t>(base.steps), {});
  scan.to_disordered.assign(static_cast<std::size_t>(base.steps), {});
  for (int n = 0; n < base.steps; ++n) {
    const auto step = static_cast<std::size_t>(n);
    for (const auto& e : scan.ensembles) {
      scan.to_ordered[step].push_back(similarity(ordered->mean_distribution[step], e.mean_distribution[step]));
      scan.to_disordered[step].push_back(similarity(disordered->mean_distribution[step], e.mean_distribution[step]));
    }
  }
  return scan;
}

CrossingPoint crossing_point(std::span<const double> p_grid, std::span<const double> s_ordered,
                             std::span<const double> s_disordered, int step_n) {
  if (p_grid.size() != s_ordered.size() || p_grid.size() != s_disordered.size()) {
    throw DomainError("crossing_point: curves and grid differ in length");
  }
  auto describe = [&] {
    std::ostringstream os;
    os << "step " << step_n << ", grid {";
    for (std::size_t k = 0; k < p_grid.size(); ++k) os << (k ? ", " : "") << p_grid[k];
    os << "}";
    return os.str();
  };

  // Indices of non-zero differences and the sign changes between consecutive ones.
  std::vector<std::size_t> nonzero;
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    if (s_ordered[k] - s_disordered[k] != 0.0) nonzero.push_back(k);
  }
  std::vector<std::pair<std::size_t, std::size_t>> changes;
  for (std::size_t t = 1; t < nonzero.size(); ++t) {
    const double a = s_ordered[nonzero[t - 1]] - s_disordered[nonzero[t - 1]];
    const double b = s_ordered[nonzero[t]] - s_disordered[nonzero[t]];
    if ((a > 0.0) != (b > 0.0)) changes.emplace_back(nonzero[t - 1], nonzero[t]);
  }
  if (changes.empty()) throw AmbiguityError("S0 - S1 never changes sign (" + describe() + ")");
  if (changes.size() > 1) {
    throw AmbiguityError("S0 - S1 changes sign " + std::to_string(changes.size()) + " times (" +
                         describe() + ")");
  }

  const auto [i, j] = changes.front();
  CrossingPoint cp;
  cp.step_n = step_n;
  if (j == i + 1) {
    const double di = s_ordered[i] - s_disordered[i];
    const double dj = s_ordered[j] - s_disordered[j];
    cp.p_star = p_grid[i] + (p_grid[j] - p_grid[i]) * di / (di - dj);
  } else {
    // Exact zeros strictly inside the bracket: centre of the zero run.
    cp.p_star = 0.5 * (p_grid[i + 1] + p_grid[j - 1]);
  }
  cp.low_resolution = p_grid[j] - p_grid[i] > 0.05;
  return cp;
}

}  // namespace qwalk
