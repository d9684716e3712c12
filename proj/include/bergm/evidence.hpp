#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bergm/exchange.hpp"
#include "bergm/graph.hpp"
#include "bergm/model.hpp"
#include "bergm/netsim.hpp"

namespace bergm {

/// Path-sampling settings. Grid g_i = i / grid_points, i = 0..grid_points.
struct PathConfig {
  int grid_points = 1000;
  int draws_per_point = 1000;
  /// Each grid point burns in for aux_iters steps from sim.init, then keeps one
  /// network every aux_iters steps.
  SimConfig sim{.aux_iters = std::nullopt, .sampler = SamplerKind::Tnt, .init = InitKind::Empty, .init_density = 0.1, .observed = nullptr};
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

/// Degree-covariance settings for the Laplace approximation.
struct LaplaceConfig {
  int cov_sims = 10000;
  /// One chain from sim.init: aux_iters burn-in, then a network every aux_iters steps.
  SimConfig sim;
  std::uint64_t seed = 1;

  void validate(int n) const;
};

/// Posterior summaries plugged into the Bayes-factor formula.
struct PluginPoint {
  std::vector<double> theta_fixed;  // fixed model, aligned with m1.stats()
  std::vector<double> theta_mixed;  // mixed model, aligned with m2.stats()
  std::vector<double> phi_hat;
  double mu_hat = 0.0;
  double log_sigma2_hat = 0.0;  // mean of log sigma2_phi draws

  double sigma2_hat() const;
  /// Mixed-model state at the plug-in values.
  ParamState mixed_state() const;
  ParamState fixed_state() const;

  /// Posterior means (mean of logs for sigma2_phi) from the two fits.
  static PluginPoint from_fits(const ChainOutput& fixed_fit, const ChainOutput& mixed_fit, const ModelSpec& m1,
                               const ModelSpec& m2, int n);
};

/// Throws DomainError unless m1 is a fixed model on {Edges} + S and m2 a
/// random-effects model on S.
void check_nested(const ModelSpec& m1, const ModelSpec& m2);
void check_plugin(const PluginPoint& pt, const ModelSpec& m1, const ModelSpec& m2, int n);

/// Sample covariance of the degree vector over cov_sims simulated networks at p.
Eigen::MatrixXd degree_cov(const ParamState& p, const ModelSpec& m, int n, const LaplaceConfig& c, Rng& rng);

struct LaplaceResult {
  double theta_dot_s = 0.0;            // theta . s(y)
  double log_f_laplace = 0.0;          // log f_Laplace(y | phi_hat, mu, sigma2)
  double log_det_neg_hessian = 0.0;    // log |(1/sigma2) I + Cov(t(Y))|

  /// log marginal likelihood plus log kappa(theta, phi_hat).
  double value() const { return theta_dot_s + log_f_laplace; }
};

/// Laplace approximation of the random-effects-marginalized likelihood with a
/// supplied degree covariance; log kappa(theta, phi_hat) is left out.
LaplaceResult laplace_log_marginal(const PluginPoint& pt, const ModelSpec& m2, const Graph& g,
                                   const Eigen::MatrixXd& degree_covariance);
/// Same, estimating the covariance by simulation at (theta_mixed, phi_hat).
LaplaceResult laplace_log_marginal(const PluginPoint& pt, const ModelSpec& m2, const Graph& g,
                                   const LaplaceConfig& c);

struct PathResult {
  double log_kappa_ratio = 0.0;  // log kappa(theta') - log kappa(theta, phi_hat)
  std::vector<double> grid;
  std::vector<double> expectations;  // E_i
  std::vector<double> std_errors;    // naive sd / sqrt(N) per grid point
};

/// Thermodynamic integration of log kappa(theta') / kappa(theta, phi_hat)
/// along theta(g) = (1-g) theta' + g [0; theta], phi(g) = g phi_hat, using
/// the trapezoidal rule over all grid intervals. Grid points are independent
/// tasks with their own seeds, so the result does not depend on threads.
PathResult path_log_kappa_ratio(const PluginPoint& pt, const ModelSpec& m1, const ModelSpec& m2, int n,
                                const PathConfig& c);

/// Fits a multivariate normal (sample mean, sample covariance) to the rows of
/// draws and returns its log density at point.
double normal_logpdf_fit(const Eigen::MatrixXd& draws, const Eigen::VectorXd& point);

struct EvidenceComponents {
  double log_likelihood_ratio_term = 0.0;     // theta . s(y) - theta' . s'(y)
  double log_laplace_term = 0.0;              // log f_Laplace
  double log_kappa_ratio = 0.0;               // path sampling
  double log_prior_ratio = 0.0;               // log p(theta) p(mu) p(sigma2) - log p(theta')
  double log_posterior_density_ratio = 0.0;   // log p^(theta'|y) - log p^(theta, mu, sigma2|y)

  double sum() const {
    return log_likelihood_ratio_term + log_laplace_term + log_kappa_ratio + log_prior_ratio +
           log_posterior_density_ratio;
  }
};

struct EvidenceReport {
  double log_bf_21 = 0.0;
  EvidenceComponents components;
  PluginPoint plugin;
  PathResult path;
  LaplaceResult laplace;
  double log_posterior_fixed = 0.0;
  double log_posterior_mixed = 0.0;
};

/// Log Bayes factor of the mixed model m2 against the fixed model m1.
EvidenceReport log_bayes_factor(const ChainOutput& fixed_fit, const ChainOutput& mixed_fit, const Graph& g,
                                const ModelSpec& m1, const ModelSpec& m2, const PathConfig& pc,
                                const LaplaceConfig& lc);

}  // namespace bergm
