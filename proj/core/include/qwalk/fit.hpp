#pragma once

#include <span>
#include <string_view>

namespace qwalk {

/// Inclusive step interval, 1-based.
struct FitRange {
  int first = 1;
  int last = 7;

  int size() const { return last - first + 1; }
};

enum class FitMethod {
  /// Least squares of Var = c * n^beta in linear variance space.
  power_law,
  /// Ordinary least squares line through (log n, log Var).
  log_log,
};

std::string_view to_string(FitMethod method);
FitMethod fit_method_from_string(std::string_view text);

struct PowerLawFit {
  double beta = 0.0;
  double beta_stderr = 0.0;
  double prefactor = 0.0;
  FitRange range;
  FitMethod method = FitMethod::power_law;
};

/// Fit Var(n) ~ c * n^beta. `variances[k]` is the variance after step k + 1; the fit
/// uses steps range.first..range.last. Throws DomainError on a range with fewer than
/// two points, a range beyond the data, or a non-positive variance inside the range.
/// The standard error comes from the residuals and is 0 for a two-point fit.
PowerLawFit fit_beta(std::span<const double> variances, FitRange range,
                     FitMethod method = FitMethod::power_law);

}  // namespace qwalk
