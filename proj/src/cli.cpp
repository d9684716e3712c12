#include "bergm/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "bergm/error.hpp"
#include "bergm/evidence.hpp"
#include "bergm/exchange.hpp"
#include "bergm/io.hpp"
#include "bergm/parallel.hpp"
#include "bergm/study.hpp"
#include "bergm/summary.hpp"
#include "bergm/version.hpp"

namespace bergm {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct ModelOptions {
  std::string stats;
  bool random_effects = false;
  PriorHyper hyper;

  void add(CLI::App* app, const std::string& default_stats) {
    stats = default_stats;
    app->add_option("--stats", stats, "Comma-separated statistics: edges,twostars,triangles")
        ->capture_default_str();
    app->add_flag("--random-effects", random_effects, "Add a per-vertex degree effect phi_i ~ N(mu_phi, sigma2_phi)");
    app->add_option("--rho2", hyper.rho2, "Prior variance of theta")->capture_default_str();
    app->add_option("--tau2", hyper.tau2, "Prior variance of mu_phi")->capture_default_str();
    app->add_option("--ig-a", hyper.ig_a, "Inverse-gamma shape for sigma2_phi")->capture_default_str();
    app->add_option("--ig-b", hyper.ig_b, "Inverse-gamma rate for sigma2_phi")->capture_default_str();
  }

  ModelSpec build() const { return ModelSpec(parse_statistic_list(stats), random_effects, hyper); }
};

struct ChainOptions {
  long burnin = 1000;
  long iters = 30000;
  long thin = 1;
  long aux_iters = 0;
  std::string sampler = "tnt";
  std::vector<double> prop_sd_theta{0.1};
  double prop_sd_phi = 0.5;
  double prop_sd_mu = 0.1;
  double prop_halfwidth_sigma2 = 0.5;
  std::string phi_scan = "sequential";

  void add(CLI::App* app) {
    app->add_option("--burnin", burnin, "Burn-in iterations")->capture_default_str();
    app->add_option("--iters", iters, "Stored main iterations")->capture_default_str();
    app->add_option("--thin", thin, "Keep every k-th main iteration")->capture_default_str();
    app->add_option("--aux-iters", aux_iters, "Auxiliary sampler steps (0: n(n-1)/2)")->capture_default_str();
    app->add_option("--sampler", sampler, "Auxiliary sampler: tnt or gibbs")->capture_default_str();
    app->add_option("--prop-sd-theta", prop_sd_theta, "Proposal sd for theta (one value or one per statistic)")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--prop-sd-phi", prop_sd_phi, "Proposal sd for each phi_i")->capture_default_str();
    app->add_option("--prop-sd-mu", prop_sd_mu, "Proposal sd for mu_phi")->capture_default_str();
    app->add_option("--prop-halfwidth-sigma2", prop_halfwidth_sigma2, "Half-width of the sigma2_phi proposal")
        ->capture_default_str();
    app->add_option("--phi-scan", phi_scan, "phi update order: sequential or random")->capture_default_str();
  }

  ChainConfig build(std::uint64_t seed) const {
    ChainConfig c;
    c.burnin = burnin;
    c.main_iters = iters;
    c.thin = thin;
    if (aux_iters < 0) throw DomainError("aux-iters must be >= 0");
    if (aux_iters > 0) c.aux.aux_iters = aux_iters;
    c.aux.sampler = parse_sampler(sampler);
    c.aux.init = InitKind::Observed;
    c.prop_sd_theta = prop_sd_theta;
    c.prop_sd_phi = prop_sd_phi;
    c.prop_sd_mu = prop_sd_mu;
    c.prop_halfwidth_sigma2 = prop_halfwidth_sigma2;
    c.phi_scan = parse_phi_scan(phi_scan);
    c.seed = seed;
    return c;
  }
};

struct EvidenceOptions {
  int grid = 1000;
  int draws_per_point = 1000;
  int cov_sims = 10000;
  long path_aux_iters = 0;

  void add(CLI::App* app) {
    app->add_option("--grid", grid, "Path-sampling grid intervals")->capture_default_str();
    app->add_option("--draws-per-point", draws_per_point, "Networks per grid point")->capture_default_str();
    app->add_option("--cov-sims", cov_sims, "Networks for the Laplace degree covariance")->capture_default_str();
    app->add_option("--path-aux-iters", path_aux_iters,
                    "Sampler steps between kept networks in path sampling and the covariance (0: n(n-1)/2)")
        ->capture_default_str();
  }

  PathConfig path(std::uint64_t seed, int threads) const {
    PathConfig c;
    c.grid_points = grid;
    c.draws_per_point = draws_per_point;
    if (path_aux_iters > 0) c.sim.aux_iters = path_aux_iters;
    c.seed = hash_seed(seed, 101);
    c.threads = threads;
    c.validate();
    return c;
  }

  LaplaceConfig laplace(std::uint64_t seed) const {
    LaplaceConfig c;
    c.cov_sims = cov_sims;
    if (path_aux_iters > 0) c.sim.aux_iters = path_aux_iters;
    c.sim.init = InitKind::Observed;
    c.seed = hash_seed(seed, 202);
    return c;
  }
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DomainError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

void write_meta(const std::string& dir, const std::string& subcommand, ordered_json config) {
  ordered_json meta{{"tool", "bergm"}, {"version", kVersion}, {"subcommand", subcommand},
                    {"config", std::move(config)}};
  write_text_file(join(dir, "meta.json"), dump_json(meta));
}

std::string phi_means_csv(const ChainSummary& s) {
  std::string out = "vertex,phi_mean,phi_sd\n";
  for (const auto& c : s.columns)
    if (c.name.starts_with("phi."))
      out += c.name.substr(4) + ',' + format_double(c.mean) + ',' + format_double(c.sd) + '\n';
  return out;
}

void write_fit_outputs(const std::string& dir, const ChainOutput& out) {
  const auto summary = summarize(out);
  write_text_file(join(dir, "draws.csv"), draws_to_csv(out.columns, out.draws));
  write_text_file(join(dir, "summary.json"), dump_json(to_json(summary)));
  write_text_file(join(dir, "acf.csv"), acf_to_csv(summary));
  if (out.has_column("mu_phi")) write_text_file(join(dir, "phi_means.csv"), phi_means_csv(summary));
}

std::shared_ptr<const Graph> load_network(const std::string& path) {
  return std::make_shared<const Graph>(load_graph(path));
}

// ---------------------------------------------------------------------------

struct FitCommand {
  std::string network;
  std::string out = ".";
  std::uint64_t seed = 1;
  ModelOptions model;
  ChainOptions chain;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("fit", "Sample the posterior with the exchange algorithm");
    app->add_option("--network", network, "Edge list or adjacency CSV")->required();
    app->add_option("--out", out, "Output directory")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    model.add(app, "edges,triangles");
    chain.add(app);
    app->callback([this] { run(); });
  }

  void run() {
    const ModelSpec m = model.build();
    const ChainConfig cfg = chain.build(seed);
    cfg.validate(m);
    const auto g = load_network(network);
    ensure_dir(out);
    const auto result = run_chain(*g, m, cfg);
    write_fit_outputs(out, result);
    write_meta(out, "fit",
               ordered_json{{"network", network},
                            {"model", m.describe()},
                            {"hyper", to_json(m.hyper())},
                            {"chain", to_json(cfg)}});
    std::cerr << "fit: " << result.draws.rows() << " draws in " << result.wall_seconds << " s\n";
  }
};

struct SimulateCommand {
  int n = 0;
  std::string out = ".";
  std::uint64_t seed = 1;
  int reps = 1;
  long aux_iters = 0;
  std::string sampler = "tnt";
  std::string init = "empty";
  std::string network;
  double init_density = 0.1;
  std::vector<double> theta;
  std::vector<double> phi;
  double mu_phi = 0.0;
  double sigma2_phi = 1.0;
  ModelOptions model;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("simulate", "Simulate networks from a model at fixed parameters");
    app->add_option("--n", n, "Vertex count")->required();
    app->add_option("--out", out, "Output directory")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--reps", reps, "Number of networks")->capture_default_str();
    app->add_option("--aux-iters", aux_iters, "Sampler steps per network (0: n(n-1)/2)")->capture_default_str();
    app->add_option("--sampler", sampler, "tnt or gibbs")->capture_default_str();
    app->add_option("--init", init, "empty, random or observed")->capture_default_str();
    app->add_option("--network", network, "Start graph for --init observed");
    app->add_option("--init-density", init_density, "Edge probability for --init random")->capture_default_str();
    app->add_option("--theta", theta, "Structural parameters, one per statistic")->delimiter(',');
    app->add_option("--phi", phi, "Nodal effects, one per vertex (default: drawn from N(mu, sigma2))")
        ->delimiter(',');
    app->add_option("--mu-phi", mu_phi, "Mean of the nodal effects")->capture_default_str();
    app->add_option("--sigma2-phi", sigma2_phi, "Variance of the nodal effects")->capture_default_str();
    model.add(app, "edges");
    app->callback([this] { run(); });
  }

  void run() {
    const ModelSpec m = model.build();
    if (n < 2) throw DomainError("--n must be >= 2");
    if (reps < 1) throw DomainError("--reps must be >= 1");
    if (theta.size() != m.dim_theta())
      throw DomainError("--theta needs " + std::to_string(m.dim_theta()) + " values");
    SimConfig sim;
    if (aux_iters < 0) throw DomainError("--aux-iters must be >= 0");
    if (aux_iters > 0) sim.aux_iters = aux_iters;
    sim.sampler = parse_sampler(sampler);
    if (init == "empty") {
      sim.init = InitKind::Empty;
    } else if (init == "random") {
      sim.init = InitKind::Random;
      sim.init_density = init_density;
    } else if (init == "observed") {
      sim.init = InitKind::Observed;
      if (network.empty()) throw DomainError("--init observed needs --network");
      sim.observed = load_network(network);
    } else {
      throw DomainError("unknown --init '" + init + "'");
    }
    sim.validate();

    Rng rng(seed);
    ParamState p;
    p.theta = theta;
    if (m.random_effects()) {
      if (!phi.empty()) {
        if (static_cast<int>(phi.size()) != n) throw DomainError("--phi needs one value per vertex");
        p.phi = phi;
      } else {
        if (!(sigma2_phi >= 0)) throw DomainError("--sigma2-phi must be >= 0");
        Rng phi_rng = rng.split(0);
        for (int i = 0; i < n; ++i) p.phi.push_back(phi_rng.normal(mu_phi, std::sqrt(sigma2_phi)));
      }
      p.mu_phi = mu_phi;
      p.sigma2_phi = sigma2_phi > 0 ? sigma2_phi : 1.0;
    } else if (!phi.empty()) {
      throw DomainError("--phi needs --random-effects");
    }

    ensure_dir(out);
    std::vector<StatisticKind> report_stats = m.stats();
    for (auto kind : {StatisticKind::Edges, StatisticKind::TwoStars, StatisticKind::Triangles})
      if (std::find(report_stats.begin(), report_stats.end(), kind) == report_stats.end())
        report_stats.push_back(kind);
    std::string stats_csv = "replicate,file";
    for (auto kind : report_stats) stats_csv += "," + std::string(statistic_name(kind));
    stats_csv += ",density\n";
    for (int r = 0; r < reps; ++r) {
      Rng rep_rng = rng.split(static_cast<std::uint64_t>(r) + 1);
      const Graph g = simulate_network(p, m, n, sim, rep_rng);
      const std::string file = "sim_" + std::to_string(r + 1) + ".edges";
      write_text_file(join(out, file), format_edge_list(g));
      stats_csv += std::to_string(r + 1) + "," + file;
      for (double v : sufficient_stats(g, report_stats)) stats_csv += "," + format_double(v);
      stats_csv += "," + format_double(density(g)) + "\n";
    }
    write_text_file(join(out, "stats.csv"), stats_csv);
    ordered_json params{{"theta", p.theta}};
    if (m.random_effects()) params["phi"] = p.phi;
    write_meta(out, "simulate",
               ordered_json{{"n", n},
                            {"model", m.describe()},
                            {"parameters", params},
                            {"sim", to_json(sim)},
                            {"reps", reps},
                            {"seed", seed}});
  }
};

struct BfCommand {
  std::string network;
  std::string out = ".";
  std::uint64_t seed = 1;
  int threads = default_threads();
  std::string fit_fixed;
  std::string fit_mixed;
  bool refit = false;
  std::string structural = "triangles";
  PriorHyper hyper;
  ChainOptions chain;
  EvidenceOptions evidence;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("bf", "Log Bayes factor of the random-effects model against the fixed model");
    app->add_option("--network", network, "Edge list or adjacency CSV")->required();
    app->add_option("--out", out, "Output directory")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (default: BERGM_THREADS or 1)")->capture_default_str();
    auto* ff = app->add_option("--fit-fixed", fit_fixed, "draws.csv of the fixed (edges + S) model");
    auto* fm = app->add_option("--fit-mixed", fit_mixed, "draws.csv of the random-effects (S) model");
    auto* rf = app->add_flag("--refit", refit, "Fit both models before computing the Bayes factor");
    ff->needs(fm);
    fm->needs(ff);
    rf->excludes(ff)->excludes(fm);
    app->add_option("--stats", structural, "Structural statistics S shared by both models (used with --refit)")
        ->capture_default_str();
    app->add_option("--rho2", hyper.rho2)->capture_default_str();
    app->add_option("--tau2", hyper.tau2)->capture_default_str();
    app->add_option("--ig-a", hyper.ig_a)->capture_default_str();
    app->add_option("--ig-b", hyper.ig_b)->capture_default_str();
    chain.add(app);
    evidence.add(app);
    app->callback([this] { run(); });
  }

  void run() {
    if (!refit && fit_fixed.empty()) throw DomainError("bf needs --fit-fixed and --fit-mixed, or --refit");
    if (threads < 1) throw DomainError("--threads must be >= 1");
    hyper.validate();
    const PathConfig pc = evidence.path(seed, threads);
    const auto g = load_network(network);
    const LaplaceConfig lc = evidence.laplace(seed);
    lc.validate(g->n());

    ChainOutput fixed_fit, mixed_fit;
    std::optional<ModelSpec> m1, m2;
    ordered_json fit_meta;
    if (refit) {
      auto s = parse_statistic_list(structural);
      std::vector<StatisticKind> with_edges{StatisticKind::Edges};
      for (auto k : s)
        if (k != StatisticKind::Edges) with_edges.push_back(k);
      if (std::find(s.begin(), s.end(), StatisticKind::Edges) != s.end())
        throw DomainError("--stats lists the structural statistics S; edges is added to the fixed model itself");
      m1.emplace(with_edges, false, hyper);
      m2.emplace(s, true, hyper);
      const ChainConfig fc = chain.build(hash_seed(seed, 1));
      const ChainConfig mc = chain.build(hash_seed(seed, 2));
      fc.validate(*m1);
      mc.validate(*m2);
      fixed_fit = run_chain(*g, *m1, fc);
      mixed_fit = run_chain(*g, *m2, mc);
      ensure_dir(out);
      ensure_dir(join(out, "fixed"));
      ensure_dir(join(out, "mixed"));
      write_fit_outputs(join(out, "fixed"), fixed_fit);
      write_fit_outputs(join(out, "mixed"), mixed_fit);
      fit_meta = ordered_json{{"refit", true}, {"fixed_chain", to_json(fc)}, {"mixed_chain", to_json(mc)}};
    } else {
      fixed_fit = load_draws_csv(fit_fixed);
      mixed_fit = load_draws_csv(fit_mixed);
      m1.emplace(model_from_columns(fixed_fit.columns, hyper));
      m2.emplace(model_from_columns(mixed_fit.columns, hyper));
      fit_meta = ordered_json{{"refit", false}, {"fit_fixed", fit_fixed}, {"fit_mixed", fit_mixed}};
    }
    check_nested(*m1, *m2);

    const auto report = log_bayes_factor(fixed_fit, mixed_fit, *g, *m1, *m2, pc, lc);
    ensure_dir(out);
    write_text_file(join(out, "report.json"), dump_json(to_json(report)));
    write_meta(out, "bf",
               ordered_json{{"network", network},
                            {"fixed_model", m1->describe()},
                            {"mixed_model", m2->describe()},
                            {"hyper", to_json(hyper)},
                            {"fits", fit_meta},
                            {"path", to_json(pc)},
                            {"laplace", to_json(lc)},
                            {"seed", seed}});
    std::cout << "log BF_21 = " << format_double(report.log_bf_21) << "\n";
  }
};

struct StudyCommand {
  std::string setting = "A";
  std::vector<double> cells;
  int reps = 10;
  int n = 40;
  std::uint64_t seed = 1;
  int threads = default_threads();
  std::string out = "study_out";
  long burnin = 500;
  long iters = 3000;
  EvidenceOptions evidence;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("study", "Simulation study: generate, fit both models, compute log BF");
    app->add_option("--setting", setting, "A, B or bernoulli")->capture_default_str();
    app->add_option("--cells", cells, "Cell values (sigma2 for A, theta_2star for B)")->delimiter(',');
    app->add_option("--reps", reps, "Replicates per cell")->capture_default_str();
    app->add_option("--n", n, "Vertices per network")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (default: BERGM_THREADS or 1)")->capture_default_str();
    app->add_option("--out", out, "Output directory")->capture_default_str();
    app->add_option("--burnin", burnin, "Burn-in per fit")->capture_default_str();
    app->add_option("--iters", iters, "Main iterations per fit")->capture_default_str();
    evidence.grid = 50;
    evidence.draws_per_point = 100;
    evidence.cov_sims = 2000;
    evidence.add(app);
    app->callback([this] { run(); });
  }

  void run() {
    StudyGrid grid;
    grid.setting = parse_setting(setting);
    grid.cells = cells.empty() ? StudyGrid::default_cells(grid.setting) : cells;
    grid.replicates = reps;
    grid.n = n;
    grid.seed = seed;
    grid.validate();
    if (threads < 1) throw DomainError("--threads must be >= 1");

    StudyConfig cfg = default_study_config();
    cfg.fixed_chain.burnin = cfg.mixed_chain.burnin = burnin;
    cfg.fixed_chain.main_iters = cfg.mixed_chain.main_iters = iters;
    cfg.fixed_chain.validate(ModelSpec({StatisticKind::Edges, StatisticKind::TwoStars}, false));
    cfg.path = evidence.path(seed, 1);
    cfg.laplace = evidence.laplace(seed);
    cfg.laplace.validate(n);
    cfg.threads = threads;

    const auto result = run_study(grid, cfg);
    ensure_dir(out);
    ensure_dir(join(out, "replicates"));
    for (const auto& r : result.replicates) {
      ordered_json j{{"setting", std::string(setting_name(grid.setting))},
                     {"cell", r.cell},
                     {"replicate", r.replicate},
                     {"density", r.density},
                     {"log_bf_21", r.log_bf ? ordered_json(*r.log_bf) : ordered_json(nullptr)}};
      if (r.components)
        j["components"] = ordered_json{{"log_likelihood_ratio_term", r.components->log_likelihood_ratio_term},
                                       {"log_laplace_term", r.components->log_laplace_term},
                                       {"log_kappa_ratio", r.components->log_kappa_ratio},
                                       {"log_prior_ratio", r.components->log_prior_ratio},
                                       {"log_posterior_density_ratio", r.components->log_posterior_density_ratio}};
      if (!r.error.empty()) j["error"] = r.error;
      write_text_file(join(join(out, "replicates"),
                           "cell_" + format_double(r.cell) + "_rep_" + std::to_string(r.replicate + 1) + ".json"),
                      dump_json(j));
    }
    write_text_file(join(out, "table.csv"), study_table_csv(result));
    write_text_file(join(out, "plot.csv"), study_plot_csv(result));
    write_meta(out, "study",
               ordered_json{{"setting", std::string(setting_name(grid.setting))},
                            {"cells", grid.cells},
                            {"reps", reps},
                            {"n", n},
                            {"seed", seed},
                            {"threads", threads},
                            {"fixed_chain", to_json(cfg.fixed_chain)},
                            {"mixed_chain", to_json(cfg.mixed_chain)},
                            {"path", to_json(cfg.path)},
                            {"laplace", to_json(cfg.laplace)}});
    std::cout << study_table_csv(result);
  }
};

struct SummarizeCommand {
  std::string draws;
  std::string out;
  int lags = kDefaultAcfLags;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("summarize", "Posterior summaries of a draws CSV");
    app->add_option("draws", draws, "draws.csv written by fit")->required();
    app->add_option("--out", out, "Output directory (default: print JSON to stdout)");
    app->add_option("--lags", lags, "Autocorrelation lags")->capture_default_str();
    app->callback([this] { run(); });
  }

  void run() {
    if (lags < 1) throw DomainError("--lags must be >= 1");
    const auto fit = load_draws_csv(draws);
    const auto summary = summarize(fit.columns, fit.draws, {}, lags);
    if (out.empty()) {
      std::cout << dump_json(to_json(summary));
      return;
    }
    ensure_dir(out);
    write_text_file(join(out, "summary.json"), dump_json(to_json(summary)));
    write_text_file(join(out, "acf.csv"), acf_to_csv(summary));
    if (fit.has_column("mu_phi")) write_text_file(join(out, "phi_means.csv"), phi_means_csv(summary));
    write_meta(out, "summarize", ordered_json{{"draws", draws}, {"lags", lags}});
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"bergm: exchange-algorithm posterior sampling and Bayes factors for exponential random graph models"};
  app.set_config("--config", "", "TOML/INI file whose keys mirror the flags (flags win)");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  FitCommand fit;
  SimulateCommand simulate;
  BfCommand bf;
  StudyCommand study;
  SummarizeCommand summarize_cmd;
  fit.add(app);
  simulate.add(app);
  bf.add(app);
  study.add(app);
  summarize_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace bergm
