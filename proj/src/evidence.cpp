#include "bergm/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bergm/error.hpp"
#include "bergm/parallel.hpp"
#include "bergm/summary.hpp"

namespace bergm {

void PathConfig::validate() const {
  if (grid_points < 2) throw DomainError("path sampling needs at least 2 grid intervals");
  if (draws_per_point < 1) throw DomainError("draws_per_point must be >= 1");
  if (threads < 1) throw DomainError("threads must be >= 1");
  if (sim.aux_iters && *sim.aux_iters < 1) throw DomainError("aux_iters must be >= 1");
}

void LaplaceConfig::validate(int n) const {
  if (cov_sims < n + 1)
    throw DomainError("cov_sims must be >= n + 1 (" + std::to_string(n + 1) + ") for a full-rank covariance");
  sim.validate();
}

double PluginPoint::sigma2_hat() const { return std::exp(log_sigma2_hat); }

ParamState PluginPoint::mixed_state() const {
  ParamState p;
  p.theta = theta_mixed;
  p.phi = phi_hat;
  p.mu_phi = mu_hat;
  p.sigma2_phi = sigma2_hat();
  return p;
}

ParamState PluginPoint::fixed_state() const {
  ParamState p;
  p.theta = theta_fixed;
  return p;
}

void check_nested(const ModelSpec& m1, const ModelSpec& m2) {
  if (m1.random_effects()) throw DomainError("the first (fixed) model must not have random effects");
  if (!m2.random_effects()) throw DomainError("the second (mixed) model must have random effects");
  if (m1.index_of(StatisticKind::Edges) < 0) throw DomainError("the fixed model must include edges");
  if (m1.dim_theta() != m2.dim_theta() + 1)
    throw DomainError("models are not nested: fixed model must be the mixed model's statistics plus edges");
  for (auto kind : m2.stats())
    if (m1.index_of(kind) < 0)
      throw DomainError("models are not nested: '" + std::string(statistic_name(kind)) +
                        "' is missing from the fixed model");
}

void check_plugin(const PluginPoint& pt, const ModelSpec& m1, const ModelSpec& m2, int n) {
  check_nested(m1, m2);
  if (pt.theta_fixed.size() != m1.dim_theta()) throw DomainError("plug-in theta' has the wrong length");
  if (pt.theta_mixed.size() != m2.dim_theta()) throw DomainError("plug-in theta has the wrong length");
  if (static_cast<int>(pt.phi_hat.size()) != n) throw DomainError("plug-in phi has the wrong length");
}

PluginPoint PluginPoint::from_fits(const ChainOutput& fixed_fit, const ChainOutput& mixed_fit, const ModelSpec& m1,
                                   const ModelSpec& m2, int n) {
  check_nested(m1, m2);
  if (fixed_fit.draws.rows() == 0 || mixed_fit.draws.rows() == 0) throw DomainError("empty fit");
  PluginPoint pt;
  for (auto kind : m1.stats())
    pt.theta_fixed.push_back(column_mean(fixed_fit, "theta." + std::string(statistic_name(kind))));
  for (auto kind : m2.stats())
    pt.theta_mixed.push_back(column_mean(mixed_fit, "theta." + std::string(statistic_name(kind))));
  for (int i = 1; i <= n; ++i) pt.phi_hat.push_back(column_mean(mixed_fit, "phi." + std::to_string(i)));
  pt.mu_hat = column_mean(mixed_fit, "mu_phi");
  const auto sigma = mixed_fit.draws.col(mixed_fit.column("sigma2_phi"));
  if ((sigma.array() <= 0.0).any()) throw DomainError("sigma2_phi draws must be positive");
  pt.log_sigma2_hat = sigma.array().log().mean();
  return pt;
}

Eigen::MatrixXd degree_cov(const ParamState& p, const ModelSpec& m, int n, const LaplaceConfig& c, Rng& rng) {
  c.validate(n);
  check_consistent(p, m, n);
  const long spacing = c.sim.resolved_aux_iters(n);
  const LogitKernel logit(p, m);
  Graph g = initial_graph(n, c.sim, rng);
  run_sampler(g, logit, spacing, c.sim.sampler, rng);

  Eigen::MatrixXd t(c.cov_sims, n);
  for (int s = 0; s < c.cov_sims; ++s) {
    run_sampler(g, logit, spacing, c.sim.sampler, rng);
    for (Vertex i = 0; i < n; ++i) t(s, i) = g.degree(i);
  }
  const Eigen::RowVectorXd mean = t.colwise().mean();
  const Eigen::MatrixXd centered = t.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(c.cov_sims - 1);
  // Mirror the upper triangle so symmetry is exact.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) cov(j, i) = cov(i, j);
  return cov;
}

LaplaceResult laplace_log_marginal(const PluginPoint& pt, const ModelSpec& m2, const Graph& g,
                                   const Eigen::MatrixXd& degree_covariance) {
  if (!m2.random_effects()) throw DomainError("the Laplace term needs a random-effects model");
  const int n = g.n();
  if (static_cast<int>(pt.phi_hat.size()) != n) throw DomainError("plug-in phi has the wrong length");
  if (pt.theta_mixed.size() != m2.dim_theta()) throw DomainError("plug-in theta has the wrong length");
  if (degree_covariance.rows() != n || degree_covariance.cols() != n)
    throw DomainError("degree covariance must be n x n");

  const double sigma2 = pt.sigma2_hat();
  LaplaceResult r;
  const auto s = sufficient_stats(g, m2.stats());
  for (std::size_t k = 0; k < s.size(); ++k) r.theta_dot_s += pt.theta_mixed[k] * s[k];

  double phi_dot_t = 0.0;
  double deviation = 0.0;
  for (Vertex i = 0; i < n; ++i) {
    phi_dot_t += pt.phi_hat[i] * g.degree(i);
    const double d = pt.phi_hat[i] - pt.mu_hat;
    deviation += d * d;
  }

  // The Hessian of the log integrand is -(1/sigma2) I - Cov(t); its negation
  // is positive definite and supplies |.|^(-1/2).
  Eigen::MatrixXd neg_hessian = degree_covariance;
  neg_hessian.diagonal().array() += 1.0 / sigma2;
  const Eigen::LLT<Eigen::MatrixXd> llt(neg_hessian);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Laplace Hessian is not negative definite; increase cov_sims");
  r.log_det_neg_hessian = 2.0 * llt.matrixLLT().diagonal().array().log().sum();

  r.log_f_laplace = -0.5 * n * std::log(sigma2) + phi_dot_t - deviation / (2.0 * sigma2) -
                    0.5 * r.log_det_neg_hessian;
  if (!std::isfinite(r.log_f_laplace)) throw NumericalError("Laplace term is not finite");
  return r;
}

LaplaceResult laplace_log_marginal(const PluginPoint& pt, const ModelSpec& m2, const Graph& g,
                                   const LaplaceConfig& c) {
  Rng rng(c.seed);
  const auto cov = degree_cov(pt.mixed_state(), m2, g.n(), c, rng);
  return laplace_log_marginal(pt, m2, g, cov);
}

PathResult path_log_kappa_ratio(const PluginPoint& pt, const ModelSpec& m1, const ModelSpec& m2, int n,
                                const PathConfig& c) {
  c.validate();
  check_plugin(pt, m1, m2, n);

  // Mixed-model theta embedded in the fixed model's coordinates (0 for edges).
  std::vector<double> embedded(m1.dim_theta(), 0.0);
  for (std::size_t k = 0; k < m1.dim_theta(); ++k) {
    const int idx = m2.index_of(m1.stats()[k]);
    if (idx >= 0) embedded[k] = pt.theta_mixed[idx];
  }
  std::vector<double> coef(m1.dim_theta());
  for (std::size_t k = 0; k < coef.size(); ++k) coef[k] = pt.theta_fixed[k] - embedded[k];

  const ModelSpec path_model = ModelSpec::interpolating(m1.stats());
  const int points = c.grid_points + 1;
  const long spacing = c.sim.resolved_aux_iters(n);

  PathResult out;
  out.grid.resize(points);
  out.expectations.resize(points);
  out.std_errors.resize(points);

  parallel_for(static_cast<std::size_t>(points), c.threads, [&](std::size_t i) {
    const double gval = static_cast<double>(i) / static_cast<double>(c.grid_points);
    ParamState p;
    p.theta.resize(m1.dim_theta());
    for (std::size_t k = 0; k < p.theta.size(); ++k)
      p.theta[k] = (1.0 - gval) * pt.theta_fixed[k] + gval * embedded[k];
    p.phi.resize(n);
    for (int v = 0; v < n; ++v) p.phi[v] = gval * pt.phi_hat[v];

    Rng rng(hash_seed(c.seed, i));
    const LogitKernel logit(p, path_model);
    Graph g = initial_graph(n, c.sim, rng);
    run_sampler(g, logit, spacing, c.sim.sampler, rng);

    double sum = 0.0, sum_sq = 0.0;
    for (int d = 0; d < c.draws_per_point; ++d) {
      run_sampler(g, logit, spacing, c.sim.sampler, rng);
      const auto s = sufficient_stats(g, m1.stats());
      double value = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) value += coef[k] * s[k];
      for (int v = 0; v < n; ++v) value -= pt.phi_hat[v] * g.degree(v);
      sum += value;
      sum_sq += value * value;
    }
    const double N = c.draws_per_point;
    const double mean = sum / N;
    const double var = N > 1 ? std::max(0.0, (sum_sq - N * mean * mean) / (N - 1)) : 0.0;
    out.grid[i] = gval;
    out.expectations[i] = mean;
    out.std_errors[i] = std::sqrt(var / N);
  });

  double total = 0.0;
  for (int i = 0; i + 1 < points; ++i)
    total += (out.grid[i + 1] - out.grid[i]) * 0.5 * (out.expectations[i + 1] + out.expectations[i]);
  out.log_kappa_ratio = total;
  return out;
}

double normal_logpdf_fit(const Eigen::MatrixXd& draws, const Eigen::VectorXd& point) {
  const Eigen::Index dim = draws.cols();
  if (point.size() != dim) throw DomainError("point dimension does not match the draws");
  if (draws.rows() < dim + 1) throw DomainError("need at least dim + 1 draws to fit a normal");
  const Eigen::RowVectorXd mean = draws.colwise().mean();
  const Eigen::MatrixXd centered = draws.rowwise() - mean;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(draws.rows() - 1);
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::VectorXd pivots = llt.matrixLLT().diagonal();
  // A rank-deficient covariance can still factor with a rounding-level pivot.
  if (llt.info() != Eigen::Success || pivots.minCoeff() <= 1e-7 * pivots.maxCoeff())
    throw NumericalError("sample covariance of the draws is singular");
  const Eigen::VectorXd diff = point - mean.transpose();
  const Eigen::VectorXd z = llt.matrixL().solve(diff);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  if (!std::isfinite(log_det)) throw NumericalError("sample covariance of the draws is singular");
  return -0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det - 0.5 * z.squaredNorm();
}

EvidenceReport log_bayes_factor(const ChainOutput& fixed_fit, const ChainOutput& mixed_fit, const Graph& g,
                                const ModelSpec& m1, const ModelSpec& m2, const PathConfig& pc,
                                const LaplaceConfig& lc) {
  const int n = g.n();
  check_nested(m1, m2);
  EvidenceReport report;
  report.plugin = PluginPoint::from_fits(fixed_fit, mixed_fit, m1, m2, n);
  const PluginPoint& pt = report.plugin;

  LaplaceConfig laplace_cfg = lc;
  if (laplace_cfg.sim.init == InitKind::Observed && !laplace_cfg.sim.observed)
    laplace_cfg.sim.observed = std::make_shared<const Graph>(g);
  report.laplace = laplace_log_marginal(pt, m2, g, laplace_cfg);

  PathConfig path_cfg = pc;
  if (path_cfg.sim.init == InitKind::Observed && !path_cfg.sim.observed)
    path_cfg.sim.observed = std::make_shared<const Graph>(g);
  report.path = path_log_kappa_ratio(pt, m1, m2, n, path_cfg);

  const auto s_fixed = sufficient_stats(g, m1.stats());
  double theta_fixed_dot_s = 0.0;
  for (std::size_t k = 0; k < s_fixed.size(); ++k) theta_fixed_dot_s += pt.theta_fixed[k] * s_fixed[k];

  const double sigma2 = pt.sigma2_hat();
  const double log_prior_mixed = log_prior_theta(pt.theta_mixed, m2.hyper()) +
                                 log_hyperprior_mu(pt.mu_hat, m2.hyper()) +
                                 log_hyperprior_sigma2(sigma2, m2.hyper());
  const double log_prior_fixed = log_prior_theta(pt.theta_fixed, m1.hyper());

  // Posterior density of the fixed model at theta'.
  {
    Eigen::MatrixXd cols(fixed_fit.draws.rows(), static_cast<Eigen::Index>(m1.dim_theta()));
    Eigen::VectorXd point(static_cast<Eigen::Index>(m1.dim_theta()));
    for (std::size_t k = 0; k < m1.dim_theta(); ++k) {
      const auto name = "theta." + std::string(statistic_name(m1.stats()[k]));
      cols.col(static_cast<Eigen::Index>(k)) = fixed_fit.draws.col(fixed_fit.column(name));
      point(static_cast<Eigen::Index>(k)) = pt.theta_fixed[k];
    }
    report.log_posterior_fixed = normal_logpdf_fit(cols, point);
  }
  // Mixed model on (theta, mu_phi, log sigma2_phi); phi is integrated out. The
  // normal is fitted on the log scale, so the density on the sigma2 scale
  // picks up the Jacobian 1/sigma2.
  {
    const auto dim = static_cast<Eigen::Index>(m2.dim_theta() + 2);
    Eigen::MatrixXd cols(mixed_fit.draws.rows(), dim);
    Eigen::VectorXd point(dim);
    Eigen::Index c = 0;
    for (std::size_t k = 0; k < m2.dim_theta(); ++k, ++c) {
      const auto name = "theta." + std::string(statistic_name(m2.stats()[k]));
      cols.col(c) = mixed_fit.draws.col(mixed_fit.column(name));
      point(c) = pt.theta_mixed[k];
    }
    cols.col(c) = mixed_fit.draws.col(mixed_fit.column("mu_phi"));
    point(c++) = pt.mu_hat;
    cols.col(c) = mixed_fit.draws.col(mixed_fit.column("sigma2_phi")).array().log().matrix();
    point(c++) = pt.log_sigma2_hat;
    report.log_posterior_mixed = normal_logpdf_fit(cols, point) - pt.log_sigma2_hat;
  }

  auto& comp = report.components;
  comp.log_likelihood_ratio_term = report.laplace.theta_dot_s - theta_fixed_dot_s;
  comp.log_laplace_term = report.laplace.log_f_laplace;
  comp.log_kappa_ratio = report.path.log_kappa_ratio;
  comp.log_prior_ratio = log_prior_mixed - log_prior_fixed;
  comp.log_posterior_density_ratio = report.log_posterior_fixed - report.log_posterior_mixed;
  report.log_bf_21 = comp.sum();
  if (!std::isfinite(report.log_bf_21)) throw NumericalError("log Bayes factor is not finite");
  return report;
}

}  // namespace bergm
