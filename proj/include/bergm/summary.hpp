#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bergm/exchange.hpp"

namespace bergm {

struct ColumnSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  /// exp(mean(log x)); reported for sigma2_phi, the headline estimate there.
  std::optional<double> geometric_mean;
  double q05 = 0.0;
  double median = 0.0;
  double q95 = 0.0;
  /// Monte Carlo standard error of the mean by non-overlapping batch means.
  double mcse = 0.0;
  /// Autocorrelation at lags 1..K. A constant column has undefined ACF; it is
  /// then reported as 1.0 at every lag with acf_degenerate set.
  std::vector<double> acf;
  bool acf_degenerate = false;
};

struct ChainSummary {
  std::vector<ColumnSummary> columns;
  AcceptanceRates accept;
  long rows = 0;

  const ColumnSummary& at(std::string_view name) const;
};

double sample_mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> x);
double geometric_mean(std::span<const double> x);
/// Linear-interpolated empirical quantile, prob in [0, 1].
double quantile(std::vector<double> x, double prob);
std::vector<double> autocorrelation(std::span<const double> x, int max_lag, bool* degenerate = nullptr);
double batch_means_mcse(std::span<const double> x);

inline constexpr int kDefaultAcfLags = 50;

ChainSummary summarize(const std::vector<std::string>& columns, const Eigen::MatrixXd& draws,
                       const AcceptanceRates& accept = {}, int max_lag = kDefaultAcfLags);
ChainSummary summarize(const ChainOutput& out, int max_lag = kDefaultAcfLags);

/// Posterior mean of one column; for sigma2_phi callers usually want geometric_mean.
double column_mean(const ChainOutput& out, std::string_view name);

}  // namespace bergm
