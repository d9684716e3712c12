#include "bergm/exchange.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "bergm/error.hpp"

namespace bergm {

PhiScan parse_phi_scan(std::string_view name) {
  if (name == "sequential") return PhiScan::Sequential;
  if (name == "random") return PhiScan::RandomPermutation;
  throw DomainError("unknown phi scan '" + std::string(name) + "' (expected sequential or random)");
}

std::string_view phi_scan_name(PhiScan scan) noexcept {
  return scan == PhiScan::Sequential ? "sequential" : "random";
}

void ChainConfig::validate(const ModelSpec& m) const {
  if (burnin < 0) throw DomainError("burnin must be >= 0");
  if (main_iters < 1) throw DomainError("iters must be >= 1");
  if (thin < 1) throw DomainError("thin must be >= 1");
  if (prop_sd_theta.empty() || (prop_sd_theta.size() != 1 && prop_sd_theta.size() != m.dim_theta()))
    throw DomainError("prop_sd_theta needs one entry or one per statistic");
  for (double sd : prop_sd_theta)
    if (!(sd > 0)) throw DomainError("prop_sd_theta entries must be > 0");
  if (!(prop_sd_phi > 0)) throw DomainError("prop_sd_phi must be > 0");
  if (!(prop_sd_mu > 0)) throw DomainError("prop_sd_mu must be > 0");
  if (!(prop_halfwidth_sigma2 > 0)) throw DomainError("prop_halfwidth_sigma2 must be > 0");
  if (aux.aux_iters && *aux.aux_iters < 1) throw DomainError("aux_iters must be >= 1");
}

Eigen::Index ChainOutput::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return static_cast<Eigen::Index>(c);
  throw DomainError("draws have no column '" + std::string(name) + "'");
}

bool ChainOutput::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::vector<std::string> draw_columns(const ModelSpec& m, int n) {
  std::vector<std::string> cols;
  for (auto kind : m.stats()) cols.push_back("theta." + std::string(statistic_name(kind)));
  if (m.random_effects()) {
    for (int i = 1; i <= n; ++i) cols.push_back("phi." + std::to_string(i));
    cols.emplace_back("mu_phi");
    cols.emplace_back("sigma2_phi");
  }
  return cols;
}

Graph draw_auxiliary(const ParamState& p, const ModelSpec& m, const Graph& observed, const SimConfig& aux,
                     Rng& rng) {
  const int n = observed.n();
  Graph g = aux.init == InitKind::Observed ? observed : initial_graph(n, aux, rng);
  run_sampler(g, LogitKernel(p, m), aux.resolved_aux_iters(n), aux.sampler, rng);
  return g;
}

double theta_exchange_log_ratio(const ParamState& current, std::span<const double> theta_new, const Graph& observed,
                                const Graph& auxiliary, const ModelSpec& m) {
  ParamState proposed = current;
  proposed.theta.assign(theta_new.begin(), theta_new.end());
  // q_cur(y') p(theta') q_new(y) / (q_cur(y) p(theta) q_new(y')); the normalizing
  // constants of the two likelihoods cancel and never appear.
  const double numerator = log_potential(current, auxiliary, m) + log_prior_theta(proposed.theta, m.hyper()) +
                           log_potential(proposed, observed, m);
  const double denominator = log_potential(current, observed, m) + log_prior_theta(current.theta, m.hyper()) +
                             log_potential(proposed, auxiliary, m);
  return numerator - denominator;
}

double phi_exchange_log_ratio(const ParamState& current, Vertex i, double phi_new, const Graph& observed,
                              const Graph& auxiliary) {
  // All potential terms other than phi_i * t_i cancel between y and y'.
  const double delta = phi_new - current.phi[i];
  const double potential_part = delta * (observed.degree(i) - auxiliary.degree(i));
  const double prior_part = normal_logpdf(phi_new, current.mu_phi, current.sigma2_phi) -
                            normal_logpdf(current.phi[i], current.mu_phi, current.sigma2_phi);
  return potential_part + prior_part;
}

double mu_log_ratio(const ParamState& current, double mu_new, const ModelSpec& m) {
  return log_prior_phi(current.phi, mu_new, current.sigma2_phi) + log_hyperprior_mu(mu_new, m.hyper()) -
         log_prior_phi(current.phi, current.mu_phi, current.sigma2_phi) -
         log_hyperprior_mu(current.mu_phi, m.hyper());
}

double sigma2_log_ratio(const ParamState& current, double sigma2_new, const ModelSpec& m) {
  if (!(sigma2_new > 0)) return -std::numeric_limits<double>::infinity();
  // Differences of like terms, so an unchanged value gives exactly 0.
  double ss = 0.0;
  for (double v : current.phi) ss += (v - current.mu_phi) * (v - current.mu_phi);
  const double n = static_cast<double>(current.phi.size());
  const double dlog = std::log(sigma2_new) - std::log(current.sigma2_phi);
  const double dinv = 1.0 / sigma2_new - 1.0 / current.sigma2_phi;
  const auto& h = m.hyper();
  return -0.5 * n * dlog - 0.5 * ss * dinv - (h.ig_a + 1.0) * dlog - h.ig_b * dinv;
}

namespace {

bool metropolis_accept(double log_ratio, Rng& rng) {
  if (log_ratio >= 0.0) return true;
  if (std::isnan(log_ratio)) return false;
  return std::log(rng.uniform_pos()) < log_ratio;
}

}  // namespace

bool update_theta(ParamState& state, const Graph& observed, const ModelSpec& m, const ChainConfig& cfg, Rng& rng) {
  if (m.dim_theta() == 0) throw DomainError("update_theta needs at least one structural statistic");
  std::vector<double> theta_new(state.theta.size());
  for (std::size_t k = 0; k < theta_new.size(); ++k) theta_new[k] = rng.normal(state.theta[k], cfg.theta_sd(k));

  ParamState proposed = state;
  proposed.theta = theta_new;
  const Graph auxiliary = draw_auxiliary(proposed, m, observed, cfg.aux, rng);
  if (metropolis_accept(theta_exchange_log_ratio(state, theta_new, observed, auxiliary, m), rng)) {
    state.theta = std::move(theta_new);
    return true;
  }
  return false;
}

bool update_phi_site(ParamState& state, Vertex i, const Graph& observed, const ModelSpec& m, const ChainConfig& cfg,
                     Rng& rng) {
  if (!m.random_effects()) throw DomainError("update_phi_site needs a random-effects model");
  const double phi_new = rng.normal(state.phi[i], cfg.prop_sd_phi);
  const double phi_old = state.phi[i];
  state.phi[i] = phi_new;
  const Graph auxiliary = draw_auxiliary(state, m, observed, cfg.aux, rng);
  state.phi[i] = phi_old;
  if (metropolis_accept(phi_exchange_log_ratio(state, i, phi_new, observed, auxiliary), rng)) {
    state.phi[i] = phi_new;
    return true;
  }
  return false;
}

bool update_mu(ParamState& state, const ModelSpec& m, const ChainConfig& cfg, Rng& rng) {
  if (!m.random_effects()) throw DomainError("update_mu needs a random-effects model");
  const double mu_new = rng.normal(state.mu_phi, cfg.prop_sd_mu);
  if (metropolis_accept(mu_log_ratio(state, mu_new, m), rng)) {
    state.mu_phi = mu_new;
    return true;
  }
  return false;
}

bool update_sigma2(ParamState& state, const ModelSpec& m, const ChainConfig& cfg, Rng& rng) {
  if (!m.random_effects()) throw DomainError("update_sigma2 needs a random-effects model");
  const double w = cfg.prop_halfwidth_sigma2;
  const double sigma2_new = state.sigma2_phi + w * (2.0 * rng.uniform() - 1.0);
  if (!(sigma2_new > 0)) return false;
  if (metropolis_accept(sigma2_log_ratio(state, sigma2_new, m), rng)) {
    state.sigma2_phi = sigma2_new;
    return true;
  }
  return false;
}

ChainOutput run_chain(const Graph& observed, const ModelSpec& m, const ChainConfig& cfg) {
  return run_chain(observed, m, cfg, ParamState::initial(m, observed.n()));
}

ChainOutput run_chain(const Graph& observed, const ModelSpec& m, const ChainConfig& cfg, ParamState state) {
  cfg.validate(m);
  const int n = observed.n();
  check_consistent(state, m, n);
  if (m.random_effects() && !(state.sigma2_phi > 0)) throw DomainError("initial sigma2_phi must be > 0");

  const auto started = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);

  ChainOutput out;
  out.columns = draw_columns(m, n);
  out.model = m.describe();
  out.config = cfg;
  const long stored_rows = cfg.main_iters / cfg.thin;
  out.draws.resize(stored_rows, static_cast<Eigen::Index>(out.columns.size()));

  long theta_acc = 0, phi_acc = 0, mu_acc = 0, sigma_acc = 0;
  long theta_tries = 0, phi_tries = 0, hyper_tries = 0;
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);

  const long total = cfg.burnin + cfg.main_iters;
  long row = 0;
  for (long it = 0; it < total; ++it) {
    const bool counting = it >= cfg.burnin;
    if (m.dim_theta() > 0) {
      const bool acc = update_theta(state, observed, m, cfg, rng);
      if (counting) {
        theta_acc += acc;
        ++theta_tries;
      }
    }
    if (m.random_effects()) {
      if (cfg.phi_scan == PhiScan::RandomPermutation)
        for (int k = n - 1; k > 0; --k) std::swap(order[k], order[rng.below(k + 1)]);
      for (Vertex i : order) {
        const bool acc = update_phi_site(state, i, observed, m, cfg, rng);
        if (counting) {
          phi_acc += acc;
          ++phi_tries;
        }
      }
      const bool acc_mu = update_mu(state, m, cfg, rng);
      const bool acc_sigma = update_sigma2(state, m, cfg, rng);
      if (counting) {
        mu_acc += acc_mu;
        sigma_acc += acc_sigma;
        ++hyper_tries;
      }
    }
    if (counting && (it - cfg.burnin + 1) % cfg.thin == 0 && row < stored_rows) {
      Eigen::Index c = 0;
      for (double t : state.theta) out.draws(row, c++) = t;
      if (m.random_effects()) {
        for (double v : state.phi) out.draws(row, c++) = v;
        out.draws(row, c++) = state.mu_phi;
        out.draws(row, c++) = state.sigma2_phi;
      }
      ++row;
    }
  }

  const auto rate = [](long acc, long tries) -> std::optional<double> {
    if (tries == 0) return std::nullopt;
    return static_cast<double>(acc) / static_cast<double>(tries);
  };
  out.accept.theta = rate(theta_acc, theta_tries);
  out.accept.phi = rate(phi_acc, phi_tries);
  out.accept.mu_phi = rate(mu_acc, hyper_tries);
  out.accept.sigma2_phi = rate(sigma_acc, hyper_tries);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace bergm
