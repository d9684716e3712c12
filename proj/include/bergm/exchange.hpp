#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bergm/graph.hpp"
#include "bergm/model.hpp"
#include "bergm/netsim.hpp"
#include "bergm/rng.hpp"

namespace bergm {

enum class PhiScan { Sequential, RandomPermutation };

PhiScan parse_phi_scan(std::string_view name);
std::string_view phi_scan_name(PhiScan scan) noexcept;

struct ChainConfig {
  long burnin = 1000;
  long main_iters = 30000;
  long thin = 1;
  /// Auxiliary simulation. With InitKind::Observed (the default) each auxiliary
  /// chain starts at the observed network.
  SimConfig aux;
  /// Per-component sd of the normal random-walk proposal for theta; a single
  /// entry is broadcast to every component.
  std::vector<double> prop_sd_theta{0.1};
  double prop_sd_phi = 0.5;
  double prop_sd_mu = 0.1;
  /// sigma2' ~ U(sigma2 - w, sigma2 + w); proposals <= 0 are rejected.
  double prop_halfwidth_sigma2 = 0.5;
  std::uint64_t seed = 1;
  PhiScan phi_scan = PhiScan::Sequential;

  double theta_sd(std::size_t k) const {
    return prop_sd_theta.size() == 1 ? prop_sd_theta.front() : prop_sd_theta.at(k);
  }
  void validate(const ModelSpec& m) const;
};

/// Fraction of accepted proposals per block; empty for blocks the model lacks.
struct AcceptanceRates {
  std::optional<double> theta;
  std::optional<double> phi;
  std::optional<double> mu_phi;
  std::optional<double> sigma2_phi;
};

struct ChainOutput {
  std::vector<std::string> columns;
  /// One row per stored iteration.
  Eigen::MatrixXd draws;
  AcceptanceRates accept;
  std::string model;
  ChainConfig config;
  double wall_seconds = 0.0;

  /// Column index by name; throws DomainError when absent.
  Eigen::Index column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

/// Draw column names: theta.<stat>, phi.<i> (1-based), mu_phi, sigma2_phi.
std::vector<std::string> draw_columns(const ModelSpec& m, int n);

/// Auxiliary network at p. Starts at `observed` when aux.init is Observed.
Graph draw_auxiliary(const ParamState& p, const ModelSpec& m, const Graph& observed, const SimConfig& aux,
                     Rng& rng);

/// Log acceptance ratio of the exchange move theta -> theta_new given the
/// auxiliary network drawn at theta_new. Only unnormalized potentials appear.
double theta_exchange_log_ratio(const ParamState& current, std::span<const double> theta_new, const Graph& observed,
                                const Graph& auxiliary, const ModelSpec& m);

/// Log acceptance ratio of the exchange move phi_i -> phi_new.
double phi_exchange_log_ratio(const ParamState& current, Vertex i, double phi_new, const Graph& observed,
                              const Graph& auxiliary);

double mu_log_ratio(const ParamState& current, double mu_new, const ModelSpec& m);
/// -inf for sigma2_new <= 0.
double sigma2_log_ratio(const ParamState& current, double sigma2_new, const ModelSpec& m);

bool update_theta(ParamState& state, const Graph& observed, const ModelSpec& m, const ChainConfig& cfg, Rng& rng);
bool update_phi_site(ParamState& state, Vertex i, const Graph& observed, const ModelSpec& m, const ChainConfig& cfg,
                     Rng& rng);
bool update_mu(ParamState& state, const ModelSpec& m, const ChainConfig& cfg, Rng& rng);
bool update_sigma2(ParamState& state, const ModelSpec& m, const ChainConfig& cfg, Rng& rng);

/// Exchange-algorithm posterior sampler. Each iteration runs a block theta
/// move, then (for mixed models) single-site phi moves, then mu_phi and
/// sigma2_phi Metropolis-Hastings moves. Deterministic given cfg.seed.
ChainOutput run_chain(const Graph& observed, const ModelSpec& m, const ChainConfig& cfg);

/// As run_chain, from an explicit starting state.
ChainOutput run_chain(const Graph& observed, const ModelSpec& m, const ChainConfig& cfg, ParamState start);

}  // namespace bergm
