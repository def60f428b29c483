#pragma once

#include <vector>

namespace qwalk {

/// Probability (or raw weight) per lattice site. Entry k belongs to site offset + k.
struct Distribution {
  int offset = 0;
  std::vector<double> probabilities;

  int first_site() const { return offset; }
  int last_site() const { return offset + static_cast<int>(probabilities.size()) - 1; }
  /// Zero for sites outside the stored range.
  double at(int site) const;
  double total() const;

  bool operator==(const Distribution&) const = default;
};

/// Second central moment of the site index. Throws DomainError unless the
/// distribution sums to 1 within 1e-9.
double variance(const Distribution& dist);

/// First moment of the site index; same precondition as variance().
double mean_position(const Distribution& dist);

/// (sum_i sqrt(G_i G'_i))^2 / (sum G * sum G'). Supports are aligned by site,
/// so the inputs may cover different ranges. Scale invariant in either argument.
double similarity(const Distribution& g, const Distribution& h);

/// Binomial distribution of an unbiased classical random walk after `steps` steps,
/// stored over sites -steps..steps.
Distribution crw_reference(int steps);

}  // namespace qwalk
