#include "bergm/study.hpp"

#include <algorithm>
#include <cmath>

#include "bergm/error.hpp"
#include "bergm/io.hpp"
#include "bergm/parallel.hpp"

namespace bergm {

StudySetting parse_setting(std::string_view name) {
  if (name == "A" || name == "a") return StudySetting::A;
  if (name == "B" || name == "b") return StudySetting::B;
  if (name == "bernoulli") return StudySetting::Bernoulli;
  throw DomainError("unknown setting '" + std::string(name) + "' (expected A, B or bernoulli)");
}

std::string_view setting_name(StudySetting s) noexcept {
  switch (s) {
    case StudySetting::A: return "A";
    case StudySetting::B: return "B";
    case StudySetting::Bernoulli: return "bernoulli";
  }
  return "?";
}

std::vector<double> StudyGrid::default_cells(StudySetting s) {
  switch (s) {
    case StudySetting::A: return {1.0, 0.75, 0.5, 0.25};
    case StudySetting::B: return {0.01, 0.02, 0.03, 0.04, 0.05};
    case StudySetting::Bernoulli: return {0.0};
  }
  return {};
}

void StudyGrid::validate() const {
  if (n < 3) throw DomainError("study networks need n >= 3");
  if (replicates < 1) throw DomainError("replicates must be >= 1");
  if (cells.empty()) throw DomainError("no study cells given");
  for (double c : cells) {
    if (setting == StudySetting::A && !(c > 0.0 && c <= 1.0))
      throw DomainError("setting A sigma2 values must lie in (0, 1]");
    if (setting == StudySetting::B && !(c >= 0.0 && c <= 0.05))
      throw DomainError("setting B theta_2star values must lie in [0, 0.05]");
    if (setting == StudySetting::Bernoulli && c != 0.0)
      throw DomainError("the Bernoulli setting has the single cell 0");
  }
}

StudyConfig default_study_config() {
  StudyConfig cfg;
  cfg.fixed_chain.burnin = 500;
  cfg.fixed_chain.main_iters = 3000;
  cfg.mixed_chain.burnin = 500;
  cfg.mixed_chain.main_iters = 3000;
  cfg.path.grid_points = 50;
  cfg.path.draws_per_point = 100;
  cfg.laplace.cov_sims = 2000;
  cfg.laplace.sim.init = InitKind::Observed;
  return cfg;
}

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Graph generate_replicate(const StudyGrid& grid, double cell, int rep_index, Rng& rng, std::optional<long> sim_iters) {
  (void)rep_index;
  const int n = grid.n;
  Graph g(n);
  if (grid.setting == StudySetting::B && cell != 0.0) {
    const ModelSpec m({StatisticKind::Edges, StatisticKind::TwoStars}, false);
    ParamState p;
    p.theta = {grid.theta_edges, cell};
    const long steps = sim_iters ? *sim_iters : 20L * g.dyad_count();
    run_sampler(g, LogitKernel(p, m), steps, SamplerKind::Tnt, rng);
    return g;
  }
  // Setting A, the Bernoulli null, and setting B at theta_2star = 0 are all
  // dyad-independent given phi.
  std::vector<double> phi(n);
  if (grid.setting == StudySetting::A) {
    const double sd = std::sqrt(cell);
    for (auto& v : phi) v = rng.normal(grid.mu_phi, sd);
  } else {
    std::fill(phi.begin(), phi.end(), 0.5 * grid.theta_edges);
  }
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (rng.uniform() < logistic(phi[i] + phi[j])) g.toggle(i, j);
  return g;
}

CellRow aggregate_cell(double cell, const std::vector<ReplicateResult>& reps) {
  CellRow row;
  row.cell = cell;
  double density_total = 0.0;
  int counted = 0;
  std::vector<double> values;
  for (const auto& r : reps) {
    if (r.cell != cell) continue;
    density_total += r.density;
    ++counted;
    if (r.log_bf) {
      values.push_back(*r.log_bf);
    } else {
      ++row.failed;
    }
  }
  row.mean_density = counted ? density_total / counted : 0.0;
  row.succeeded = static_cast<int>(values.size());
  if (!values.empty()) {
    row.min = *std::min_element(values.begin(), values.end());
    row.max = *std::max_element(values.begin(), values.end());
    const double total = static_cast<double>(values.size());
    const auto pct = [&](auto pred) {
      return 100.0 * static_cast<double>(std::count_if(values.begin(), values.end(), pred)) / total;
    };
    row.pct_below_minus5 = pct([](double v) { return v < -5.0; });
    row.pct_below_0 = pct([](double v) { return v < 0.0; });
    row.pct_above_0 = pct([](double v) { return v >= 0.0; });
    row.pct_above_5 = pct([](double v) { return v > 5.0; });
  }
  return row;
}

Rng replicate_rng(const StudyGrid& grid, std::size_t cell_index, int rep) {
  return Rng(hash_seed(hash_seed(grid.seed, cell_index), static_cast<std::uint64_t>(rep)));
}

ReplicateResult run_replicate(const StudyGrid& grid, std::size_t cell_index, int rep, const StudyConfig& cfg) {
  ReplicateResult res;
  res.cell = grid.cells.at(cell_index);
  res.replicate = rep;
  Rng rng = replicate_rng(grid, cell_index, rep);
  const Graph g = generate_replicate(grid, res.cell, rep, rng, cfg.sim_iters);
  res.density = density(g);
  try {
    const ModelSpec fixed({StatisticKind::Edges, StatisticKind::TwoStars}, false, cfg.hyper);
    const ModelSpec mixed({StatisticKind::TwoStars}, true, cfg.hyper);
    ChainConfig fc = cfg.fixed_chain;
    ChainConfig mc = cfg.mixed_chain;
    fc.seed = rng();
    mc.seed = rng();
    const auto fit_fixed = run_chain(g, fixed, fc);
    const auto fit_mixed = run_chain(g, mixed, mc);
    PathConfig pc = cfg.path;
    pc.seed = rng();
    pc.threads = 1;
    LaplaceConfig lc = cfg.laplace;
    lc.seed = rng();
    const auto report = log_bayes_factor(fit_fixed, fit_mixed, g, fixed, mixed, pc, lc);
    res.log_bf = report.log_bf_21;
    res.components = report.components;
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  return res;
}

StudyResult run_study(const StudyGrid& grid, const StudyConfig& cfg) {
  grid.validate();
  StudyResult out;
  out.grid = grid;
  const std::size_t jobs = grid.cells.size() * static_cast<std::size_t>(grid.replicates);
  out.replicates.resize(jobs);
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t cell_index = job / grid.replicates;
    const int rep = static_cast<int>(job % grid.replicates);
    out.replicates[job] = run_replicate(grid, cell_index, rep, cfg);
  });
  for (double cell : grid.cells) out.rows.push_back(aggregate_cell(cell, out.replicates));
  return out;
}

std::string study_table_csv(const StudyResult& r) {
  std::string out = "setting,cell,mean_density,n_ok,n_failed,min,max,pct_lt_-5,pct_lt_0,pct_gt_0,pct_gt_5\n";
  for (const auto& row : r.rows) {
    out += std::string(setting_name(r.grid.setting)) + ',' + format_double(row.cell) + ',' +
           format_double(row.mean_density) + ',' + std::to_string(row.succeeded) + ',' +
           std::to_string(row.failed) + ',' + format_double(row.min) + ',' + format_double(row.max) + ',' +
           format_double(row.pct_below_minus5) + ',' + format_double(row.pct_below_0) + ',' +
           format_double(row.pct_above_0) + ',' + format_double(row.pct_above_5) + '\n';
  }
  return out;
}

std::string study_plot_csv(const StudyResult& r) {
  std::string out = "setting,cell,replicate,log_bf_clamped\n";
  for (const auto& rep : r.replicates) {
    if (!rep.log_bf) continue;
    const double v = std::clamp(*rep.log_bf, -5.0, 5.0);
    out += std::string(setting_name(r.grid.setting)) + ',' + format_double(rep.cell) + ',' +
           std::to_string(rep.replicate) + ',' + format_double(v) + '\n';
  }
  return out;
}

}  // namespace bergm
