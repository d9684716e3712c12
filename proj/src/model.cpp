#include "bergm/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "bergm/error.hpp"

namespace bergm {

void PriorHyper::validate() const {
  if (!(rho2 > 0)) throw DomainError("rho2 must be > 0");
  if (!(tau2 > 0)) throw DomainError("tau2 must be > 0");
  if (!(ig_a > 0)) throw DomainError("ig_a must be > 0");
  if (!(ig_b > 0)) throw DomainError("ig_b must be > 0");
}

ModelSpec::ModelSpec(std::vector<StatisticKind> stats, bool random_effects, PriorHyper hyper)
    : stats_(std::move(stats)), random_effects_(random_effects), hyper_(hyper) {
  hyper_.validate();
  for (std::size_t k = 0; k < stats_.size(); ++k)
    if (std::find(stats_.begin() + k + 1, stats_.end(), stats_[k]) != stats_.end())
      throw DomainError("statistic '" + std::string(statistic_name(stats_[k])) + "' listed twice");
  if (random_effects_ && index_of(StatisticKind::Edges) >= 0)
    throw DomainError(
        "a random-effects model cannot include the edges statistic (mu_phi carries the edge effect)");
  if (!random_effects_ && stats_.empty())
    throw DomainError("a fixed-effects model needs at least one statistic");
}

ModelSpec ModelSpec::interpolating(std::vector<StatisticKind> stats) {
  ModelSpec m;
  m.stats_ = std::move(stats);
  m.random_effects_ = true;
  return m;
}

int ModelSpec::index_of(StatisticKind kind) const noexcept {
  for (std::size_t k = 0; k < stats_.size(); ++k)
    if (stats_[k] == kind) return static_cast<int>(k);
  return -1;
}

std::string ModelSpec::describe() const {
  std::string out;
  for (auto kind : stats_) {
    if (!out.empty()) out += ",";
    out += statistic_name(kind);
  }
  if (random_effects_) out += out.empty() ? "random-effects" : "+random-effects";
  return out;
}

ParamState ParamState::initial(const ModelSpec& m, int n) {
  ParamState p;
  p.theta.assign(m.dim_theta(), 0.0);
  if (m.random_effects()) p.phi.assign(n, 0.0);
  return p;
}

void check_consistent(const ParamState& p, const ModelSpec& m, int n) {
  if (p.theta.size() != m.dim_theta())
    throw DomainError("theta has " + std::to_string(p.theta.size()) + " entries, model has " +
                      std::to_string(m.dim_theta()) + " statistics");
  if (m.random_effects()) {
    if (static_cast<int>(p.phi.size()) != n)
      throw DomainError("phi has " + std::to_string(p.phi.size()) + " entries, graph has " +
                        std::to_string(n) + " vertices");
  } else if (!p.phi.empty()) {
    throw DomainError("phi given for a model without random effects");
  }
}

double log_potential(const ParamState& p, const Graph& g, const ModelSpec& m) {
  check_consistent(p, m, g.n());
  const auto s = sufficient_stats(g, m.stats());
  double value = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) value += p.theta[k] * s[k];
  if (m.random_effects())
    for (Vertex i = 0; i < g.n(); ++i) value += p.phi[i] * g.degree(i);
  return value;
}

double conditional_logit(const ParamState& p, const Graph& g, Vertex i, Vertex j, const ModelSpec& m) {
  check_consistent(p, m, g.n());
  const auto ds = change_stats(g, i, j, m.stats());
  double eta = 0.0;
  for (std::size_t k = 0; k < ds.size(); ++k) eta += p.theta[k] * ds[k];
  if (m.random_effects()) eta += p.phi[i] + p.phi[j];
  return eta;
}

LogitKernel::LogitKernel(const ParamState& p, const ModelSpec& m) {
  if (p.theta.size() != m.dim_theta()) throw DomainError("theta does not match the model");
  for (std::size_t k = 0; k < m.stats().size(); ++k) {
    switch (m.stats()[k]) {
      case StatisticKind::Edges: edge_coef_ = p.theta[k]; break;
      case StatisticKind::TwoStars: two_star_coef_ = p.theta[k]; break;
      case StatisticKind::Triangles: triangle_coef_ = p.theta[k]; break;
    }
  }
  if (m.random_effects()) phi_ = p.phi.data();
}

double normal_logpdf(double x, double mean, double var) noexcept {
  const double d = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * d * d / var;
}

double inv_gamma_logpdf(double x, double a, double b) noexcept {
  if (!(x > 0)) return -std::numeric_limits<double>::infinity();
  return a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(x) - b / x;
}

double log_prior_theta(std::span<const double> theta, const PriorHyper& h) {
  double total = 0.0;
  for (double t : theta) total += normal_logpdf(t, 0.0, h.rho2);
  return total;
}

double log_prior_phi(std::span<const double> phi, double mu_phi, double sigma2_phi) {
  if (!(sigma2_phi > 0)) throw DomainError("sigma2_phi must be > 0");
  double total = 0.0;
  for (double v : phi) total += normal_logpdf(v, mu_phi, sigma2_phi);
  return total;
}

double log_hyperprior_mu(double mu_phi, const PriorHyper& h) { return normal_logpdf(mu_phi, 0.0, h.tau2); }

double log_hyperprior_sigma2(double sigma2_phi, const PriorHyper& h) {
  if (!(sigma2_phi > 0)) throw DomainError("sigma2_phi must be > 0");
  return inv_gamma_logpdf(sigma2_phi, h.ig_a, h.ig_b);
}

double log_prior(const ParamState& p, const ModelSpec& m) {
  if (p.theta.size() != m.dim_theta()) throw DomainError("theta does not match the model");
  double total = log_prior_theta(p.theta, m.hyper());
  if (m.random_effects()) {
    total += log_prior_phi(p.phi, p.mu_phi, p.sigma2_phi);
    total += log_hyperprior_mu(p.mu_phi, m.hyper());
    total += log_hyperprior_sigma2(p.sigma2_phi, m.hyper());
  }
  return total;
}

double exact_log_kappa(const ParamState& p, const ModelSpec& m, int n) {
  if (n < 1) throw DomainError("n must be >= 1");
  const long dyads = static_cast<long>(n) * (n - 1) / 2;
  if (dyads > kMaxEnumeratedDyads)
    throw DomainError("exact_log_kappa refuses n=" + std::to_string(n) + " (" + std::to_string(dyads) +
                      " dyads > " + std::to_string(kMaxEnumeratedDyads) + "); it is a test oracle");
  check_consistent(p, m, n);

  std::vector<std::pair<Vertex, Vertex>> dyad_list;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) dyad_list.emplace_back(i, j);

  // Walk all graphs in Gray-code order; each step flips one dyad, so the
  // potential moves by +-(conditional logit).
  Graph g(n);
  const LogitKernel logit(p, m);
  double potential = 0.0;
  double max_seen = potential;
  double scaled_sum = 1.0;
  const std::uint64_t total = std::uint64_t{1} << dyads;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int bit = std::countr_zero(step);
    const auto [i, j] = dyad_list[bit];
    const double eta = logit(g, i, j);
    potential += g.has_edge(i, j) ? -eta : eta;
    g.toggle(i, j);
    if (potential > max_seen) {
      scaled_sum = scaled_sum * std::exp(max_seen - potential) + 1.0;
      max_seen = potential;
    } else {
      scaled_sum += std::exp(potential - max_seen);
    }
  }
  return max_seen + std::log(scaled_sum);
}

}  // namespace bergm
