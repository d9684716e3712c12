#pragma once

#include <span>
#include <string>
#include <vector>

#include "bergm/graph.hpp"

namespace bergm {

/// Prior hyperparameters.
///   theta_k ~ N(0, rho2), mu_phi ~ N(0, tau2), sigma2_phi ~ IG(ig_a, ig_b)
/// with the inverse-gamma density proportional to x^(-a-1) exp(-b/x).
struct PriorHyper {
  double rho2 = 100.0;
  double tau2 = 100.0;
  double ig_a = 0.001;
  double ig_b = 0.001;

  void validate() const;
};

/// Which structural statistics enter the model, and whether nodal random
/// effects are present. With random effects the edge count is not a separate
/// statistic: the common tie propensity lives in mu_phi.
class ModelSpec {
 public:
  ModelSpec(std::vector<StatisticKind> stats, bool random_effects, PriorHyper hyper = {});

  /// Model used along the path between a fixed and a mixed model: it may carry
  /// both an Edges term and nodal effects. Only for simulation, never fitted.
  static ModelSpec interpolating(std::vector<StatisticKind> stats);

  const std::vector<StatisticKind>& stats() const noexcept { return stats_; }
  bool random_effects() const noexcept { return random_effects_; }
  const PriorHyper& hyper() const noexcept { return hyper_; }
  std::size_t dim_theta() const noexcept { return stats_.size(); }

  /// Index of `kind` in stats(), or -1.
  int index_of(StatisticKind kind) const noexcept;

  std::string describe() const;

 private:
  ModelSpec() = default;

  std::vector<StatisticKind> stats_;
  bool random_effects_ = false;
  PriorHyper hyper_;
};

/// One point in the joint parameter space (theta, phi, mu_phi, sigma2_phi).
struct ParamState {
  std::vector<double> theta;
  std::vector<double> phi;  // empty for fixed-effects models
  double mu_phi = 0.0;
  double sigma2_phi = 1.0;

  /// theta = 0, phi = 0, mu_phi = 0, sigma2_phi = 1, sized for the model.
  static ParamState initial(const ModelSpec& m, int n);

  bool operator==(const ParamState&) const = default;
};

/// Throws DomainError when p does not match m (and n, when phi is present).
void check_consistent(const ParamState& p, const ModelSpec& m, int n);

/// log q(y) = theta . s(y) + phi . t(y).
double log_potential(const ParamState& p, const Graph& g, const ModelSpec& m);

/// Log-odds of y_ij = 1 given the rest of the graph:
/// theta . s_ij(y) + phi_i + phi_j.
double conditional_logit(const ParamState& p, const Graph& g, Vertex i, Vertex j, const ModelSpec& m);

/**
 * Allocation-free conditional logit for the samplers' inner loop.
 *
 * Holds a view of the parameters; the ParamState must outlive it and not
 * be resized while in use.
 */
class LogitKernel {
 public:
  LogitKernel(const ParamState& p, const ModelSpec& m);

  double operator()(const Graph& g, Vertex i, Vertex j) const noexcept {
    double eta = edge_coef_;
    if (two_star_coef_ != 0.0) {
      const int present = g.has_edge(i, j) ? 1 : 0;
      eta += two_star_coef_ * (g.degree(i) + g.degree(j) - 2 * present);
    }
    if (triangle_coef_ != 0.0) eta += triangle_coef_ * g.common_neighbors(i, j);
    if (phi_ != nullptr) eta += phi_[i] + phi_[j];
    return eta;
  }

 private:
  double edge_coef_ = 0.0;
  double two_star_coef_ = 0.0;
  double triangle_coef_ = 0.0;
  const double* phi_ = nullptr;
};

double normal_logpdf(double x, double mean, double var) noexcept;
/// Inverse-gamma log density with shape a and rate b; -inf for x <= 0.
double inv_gamma_logpdf(double x, double a, double b) noexcept;

double log_prior_theta(std::span<const double> theta, const PriorHyper& h);
double log_prior_phi(std::span<const double> phi, double mu_phi, double sigma2_phi);
double log_hyperprior_mu(double mu_phi, const PriorHyper& h);
double log_hyperprior_sigma2(double sigma2_phi, const PriorHyper& h);

/// Sum of all prior terms; the phi/mu/sigma2 terms are dropped for fixed models.
double log_prior(const ParamState& p, const ModelSpec& m);

/// log of the normalizing constant by enumerating all 2^(n(n-1)/2) graphs.
/// Test oracle only: refuses when n(n-1)/2 > 24.
double exact_log_kappa(const ParamState& p, const ModelSpec& m, int n);

inline constexpr int kMaxEnumeratedDyads = 24;

}  // namespace bergm
