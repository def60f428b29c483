#include "qwalk/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {
namespace {

void require_normalized(const Distribution& dist) {
  const double total = dist.total();
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("distribution is not normalised (sum = " + std::to_string(total) + ")");
  }
  for (double v : dist.probabilities) {
    if (v < 0.0) throw DomainError("distribution has a negative entry");
  }
}

}  // namespace

double Distribution::at(int site) const {
  const int k = site - offset;
  if (k < 0 || k >= static_cast<int>(probabilities.size())) return 0.0;
  return probabilities[static_cast<std::size_t>(k)];
}

double Distribution::total() const {
  double sum = 0.0;
  for (double v : probabilities) sum += v;
  return sum;
}

double mean_position(const Distribution& dist) {
  require_normalized(dist);
  double first = 0.0;
  for (std::size_t k = 0; k < dist.probabilities.size(); ++k) {
    first += (dist.offset + static_cast<int>(k)) * dist.probabilities[k];
  }
  return first;
}

double variance(const Distribution& dist) {
  require_normalized(dist);
  double first = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < dist.probabilities.size(); ++k) {
    const double site = dist.offset + static_cast<int>(k);
    first += site * dist.probabilities[k];
    second += site * site * dist.probabilities[k];
  }
  return second - first * first;
}

double similarity(const Distribution& g, const Distribution& h) {
  double g_total = 0.0;
  double h_total = 0.0;
  for (double v : g.probabilities) {
    if (v < 0.0) throw DomainError("similarity needs non-negative inputs");
    g_total += v;
  }
  for (double v : h.probabilities) {
    if (v < 0.0) throw DomainError("similarity needs non-negative inputs");
    h_total += v;
  }
  if (!(g_total > 0.0) || !(h_total > 0.0)) throw DomainError("similarity of an all-zero distribution");

  const int lo = std::max(g.first_site(), h.first_site());
  const int hi = std::min(g.last_site(), h.last_site());
  double overlap = 0.0;
  for (int site = lo; site <= hi; ++site) overlap += std::sqrt(g.at(site) * h.at(site));
  return std::min(1.0, overlap * overlap / (g_total * h_total));
}

Distribution crw_reference(int steps) {
  if (steps < 1) throw DomainError("crw_reference needs steps >= 1");
  Distribution dist;
  dist.offset = -steps;
  dist.probabilities.assign(static_cast<std::size_t>(2 * steps + 1), 0.0);
  // Row `steps` of Pascal's triangle scaled by 2^-steps, built by repeated halving so
  // every entry stays exact in binary floating point for the sizes used here.
  std::vector<double> row{1.0};
  for (int n = 1; n <= steps; ++n) {
    std::vector<double> next(row.size() + 1, 0.0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      next[k] += 0.5 * row[k];
      next[k + 1] += 0.5 * row[k];
    }
    row = std::move(next);
  }
  for (std::size_t k = 0; k < row.size(); ++k) dist.probabilities[2 * k] = row[k];
  return dist;
}

}  // namespace qwalk
