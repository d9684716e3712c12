#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bergm/evidence.hpp"
#include "bergm/exchange.hpp"

namespace bergm {

/// A: per-vertex degree effects only, phi_i ~ N(mu_phi, sigma2), cells are sigma2 values.
/// B: edges + 2-star ERGM with theta_edges fixed, cells are theta_2star values.
/// Bernoulli: the common null of both (sigma2 = theta_2star = 0).
enum class StudySetting { A, B, Bernoulli };

StudySetting parse_setting(std::string_view name);
std::string_view setting_name(StudySetting s) noexcept;

struct StudyGrid {
  StudySetting setting = StudySetting::A;
  std::vector<double> cells;
  int n = 40;
  int replicates = 10;
  double mu_phi = -1.0;
  double theta_edges = -2.0;
  std::uint64_t seed = 1;

  /// Cells used when none are given: the rows of the published table.
  static std::vector<double> default_cells(StudySetting s);
  void validate() const;
};

struct StudyConfig {
  PriorHyper hyper;
  ChainConfig fixed_chain;
  ChainConfig mixed_chain;
  PathConfig path;
  LaplaceConfig laplace;
  /// TNT steps from the empty graph when simulating setting B. Unset: 20 n(n-1)/2.
  std::optional<long> sim_iters;
  int threads = 1;
};

/// Study-sized defaults: shorter chains and path grids than a single-network analysis.
StudyConfig default_study_config();

/// Draws one synthetic network. Setting A (and Bernoulli) samples dyads
/// independently given phi, which is exact because the model has no
/// structural term; setting B runs the tie-no-tie sampler.
Graph generate_replicate(const StudyGrid& grid, double cell, int rep_index, Rng& rng,
                         std::optional<long> sim_iters = std::nullopt);

struct ReplicateResult {
  double cell = 0.0;
  int replicate = 0;
  double density = 0.0;
  std::optional<double> log_bf;
  std::optional<EvidenceComponents> components;
  std::string error;
};

struct CellRow {
  double cell = 0.0;
  double mean_density = 0.0;
  int succeeded = 0;
  int failed = 0;
  double min = 0.0;
  double max = 0.0;
  double pct_below_minus5 = 0.0;
  double pct_below_0 = 0.0;
  double pct_above_0 = 0.0;  // ties at exactly 0 count here
  double pct_above_5 = 0.0;
};

struct StudyResult {
  StudyGrid grid;
  std::vector<ReplicateResult> replicates;  // cell-major, replicate order
  std::vector<CellRow> rows;
};

/// Per-cell aggregate in the published table's column layout.
CellRow aggregate_cell(double cell, const std::vector<ReplicateResult>& reps);

/// Random seed stream for replicate `rep` of cell index `cell_index`.
Rng replicate_rng(const StudyGrid& grid, std::size_t cell_index, int rep);

/// Generate, fit both models, and compute log BF for one replicate.
ReplicateResult run_replicate(const StudyGrid& grid, std::size_t cell_index, int rep, const StudyConfig& cfg);

StudyResult run_study(const StudyGrid& grid, const StudyConfig& cfg);

/// Table CSV: setting,cell,mean_density,n_ok,n_failed,min,max,pct_lt_-5,pct_lt_0,pct_gt_0,pct_gt_5
std::string study_table_csv(const StudyResult& r);
/// Per-replicate values clamped to [-5, 5] for plotting.
std::string study_plot_csv(const StudyResult& r);

}  // namespace bergm
