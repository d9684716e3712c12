#include "bergm/summary.hpp"

#include <algorithm>
#include <cmath>

#include "bergm/error.hpp"

namespace bergm {

const ColumnSummary& ChainSummary::at(std::string_view name) const {
  for (const auto& c : columns)
    if (c.name == name) return c;
  throw DomainError("summary has no column '" + std::string(name) + "'");
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean of an empty sample");
  double total = 0.0;
  for (double v : x) total += v;
  return total / static_cast<double>(x.size());
}

static bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

double sample_sd(std::span<const double> x) {
  // An exactly constant column has sd 0 even when its mean does not round back.
  if (x.size() < 2 || is_constant(x)) return 0.0;
  const double mean = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double geometric_mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("geometric mean of an empty sample");
  double total = 0.0;
  for (double v : x) {
    if (!(v > 0)) throw DomainError("geometric mean needs positive values");
    total += std::log(v);
  }
  return std::exp(total / static_cast<double>(x.size()));
}

double quantile(std::vector<double> x, double prob) {
  if (x.empty()) throw DomainError("quantile of an empty sample");
  std::sort(x.begin(), x.end());
  const double pos = prob * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, x.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return x[lo] + frac * (x[hi] - x[lo]);
}

std::vector<double> autocorrelation(std::span<const double> x, int max_lag, bool* degenerate) {
  const int lags = std::max(0, std::min<int>(max_lag, static_cast<int>(x.size()) - 1));
  const double mean = x.empty() ? 0.0 : sample_mean(x);
  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);
  const bool flat = x.empty() || is_constant(x) || !(denom > 0.0);
  if (degenerate) *degenerate = flat;
  if (flat) return std::vector<double>(lags, 1.0);
  std::vector<double> acf(lags);
  for (int k = 1; k <= lags; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < x.size(); ++t) num += (x[t] - mean) * (x[t + k] - mean);
    acf[k - 1] = num / denom;
  }
  return acf;
}

double batch_means_mcse(std::span<const double> x) {
  const auto n = x.size();
  if (n < 4) return sample_sd(x) / std::sqrt(std::max<double>(1.0, static_cast<double>(n)));
  const auto batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::size_t size = n / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) means[b] = sample_mean(x.subspan(b * size, size));
  return sample_sd(means) / std::sqrt(static_cast<double>(batches));
}

ChainSummary summarize(const std::vector<std::string>& columns, const Eigen::MatrixXd& draws,
                       const AcceptanceRates& accept, int max_lag) {
  if (draws.rows() == 0) throw DomainError("no draws to summarize");
  if (static_cast<std::size_t>(draws.cols()) != columns.size())
    throw DomainError("column names do not match the draw matrix");
  ChainSummary out;
  out.accept = accept;
  out.rows = static_cast<long>(draws.rows());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::vector<double> x(draws.rows());
    for (Eigen::Index r = 0; r < draws.rows(); ++r) x[r] = draws(r, static_cast<Eigen::Index>(c));
    ColumnSummary s;
    s.name = columns[c];
    s.mean = sample_mean(x);
    s.sd = sample_sd(x);
    if (s.name == "sigma2_phi") s.geometric_mean = geometric_mean(x);
    s.q05 = quantile(x, 0.05);
    s.median = quantile(x, 0.5);
    s.q95 = quantile(x, 0.95);
    s.mcse = batch_means_mcse(x);
    s.acf = autocorrelation(x, max_lag, &s.acf_degenerate);
    out.columns.push_back(std::move(s));
  }
  return out;
}

ChainSummary summarize(const ChainOutput& out, int max_lag) {
  return summarize(out.columns, out.draws, out.accept, max_lag);
}

double column_mean(const ChainOutput& out, std::string_view name) { return out.draws.col(out.column(name)).mean(); }

}  // namespace bergm
