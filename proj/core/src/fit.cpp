#include "qwalk/fit.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"

namespace qwalk {
namespace {

struct Samples {
  std::vector<double> steps;
  std::vector<double> values;
};

Samples collect(std::span<const double> variances, FitRange range) {
  if (range.size() < 2) {
    throw DomainError("fit range " + std::to_string(range.first) + ".." + std::to_string(range.last) +
                      " holds fewer than two points");
  }
  if (range.first < 1 || range.last > static_cast<int>(variances.size())) {
    throw DomainError("fit range " + std::to_string(range.first) + ".." + std::to_string(range.last) +
                      " lies outside the " + std::to_string(variances.size()) + " available steps");
  }
  Samples s;
  for (int n = range.first; n <= range.last; ++n) {
    const double v = variances[static_cast<std::size_t>(n - 1)];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("variance at step " + std::to_string(n) + " is not positive");
    }
    s.steps.push_back(n);
    s.values.push_back(v);
  }
  return s;
}

PowerLawFit log_log_fit(const Samples& s, FitRange range) {
  const std::size_t m = s.steps.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += std::log(s.steps[k]);
    my += std::log(s.values[k]);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double dx = std::log(s.steps[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(s.values[k]) - my);
  }
  PowerLawFit fit;
  fit.range = range;
  fit.method = FitMethod::log_log;
  fit.beta = sxy / sxx;
  fit.prefactor = std::exp(my - fit.beta * mx);
  if (m > 2) {
    double rss = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double r = std::log(s.values[k]) - (my + fit.beta * (std::log(s.steps[k]) - mx));
      rss += r * r;
    }
    fit.beta_stderr = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  }
  return fit;
}

double residual_sum(const Samples& s, double c, double beta) {
  double rss = 0.0;
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    const double r = s.values[k] - c * std::pow(s.steps[k], beta);
    rss += r * r;
  }
  return rss;
}

Eigen::Matrix2d normal_matrix(const Samples& s, double c, double beta, Eigen::Vector2d* gradient) {
  Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
  Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    const double power = std::pow(s.steps[k], beta);
    const Eigen::Vector2d j(power, c * power * std::log(s.steps[k]));
    jtj += j * j.transpose();
    jtr += j * (s.values[k] - c * power);
  }
  if (gradient) *gradient = jtr;
  return jtj;
}

// Levenberg-Marquardt on (c, beta), started from the log-log estimate.
PowerLawFit power_law_fit(const Samples& s, FitRange range) {
  const PowerLawFit start = log_log_fit(s, range);
  double c = start.prefactor;
  double beta = start.beta;
  double rss = residual_sum(s, c, beta);
  double lambda = 1e-3;

  for (int iter = 0; iter < 500 && rss > 0.0; ++iter) {
    Eigen::Vector2d gradient;
    const Eigen::Matrix2d jtj = normal_matrix(s, c, beta, &gradient);
    bool improved = false;
    while (lambda < 1e12) {
      Eigen::Matrix2d damped = jtj;
      damped.diagonal() *= (1.0 + lambda);
      const Eigen::Vector2d delta = damped.ldlt().solve(gradient);
      const double c_try = c + delta(0);
      const double beta_try = beta + delta(1);
      const double rss_try = residual_sum(s, c_try, beta_try);
      if (std::isfinite(rss_try) && rss_try < rss) {
        const bool converged = std::abs(delta(1)) <= 1e-15 * std::max(1.0, std::abs(beta)) &&
                               std::abs(delta(0)) <= 1e-15 * std::max(1.0, std::abs(c));
        c = c_try;
        beta = beta_try;
        rss = rss_try;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = !converged;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }

  PowerLawFit fit;
  fit.range = range;
  fit.method = FitMethod::power_law;
  fit.beta = beta;
  fit.prefactor = c;
  const std::size_t m = s.steps.size();
  if (m > 2) {
    const Eigen::Matrix2d cov = normal_matrix(s, c, beta, nullptr).inverse() *
                                (rss / static_cast<double>(m - 2));
    fit.beta_stderr = std::sqrt(std::max(0.0, cov(1, 1)));
  }
  return fit;
}

}  // namespace

std::string_view to_string(FitMethod method) {
  return method == FitMethod::power_law ? "power_law" : "log_log";
}

FitMethod fit_method_from_string(std::string_view text) {
  if (text == "power_law") return FitMethod::power_law;
  if (text == "log_log") return FitMethod::log_log;
  throw DomainError("unknown fit method '" + std::string(text) + "'");
}

PowerLawFit fit_beta(std::span<const double> variances, FitRange range, FitMethod method) {
  const Samples samples = collect(variances, range);
  return method == FitMethod::log_log ? log_log_fit(samples, range) : power_law_fit(samples, range);
}

}  // namespace qwalk
