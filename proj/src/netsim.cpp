#include "bergm/netsim.hpp"

#include <cmath>

#include "bergm/error.hpp"

namespace bergm {

SamplerKind parse_sampler(std::string_view name) {
  if (name == "tnt") return SamplerKind::Tnt;
  if (name == "gibbs") return SamplerKind::Gibbs;
  throw DomainError("unknown sampler '" + std::string(name) + "' (expected tnt or gibbs)");
}

std::string_view sampler_name(SamplerKind kind) noexcept {
  return kind == SamplerKind::Tnt ? "tnt" : "gibbs";
}

long SimConfig::resolved_aux_iters(int n) const {
  return aux_iters ? *aux_iters : static_cast<long>(n) * (n - 1) / 2;
}

void SimConfig::validate() const {
  if (aux_iters && *aux_iters < 1) throw DomainError("aux_iters must be >= 1");
  if (init == InitKind::Random && !(init_density >= 0 && init_density <= 1))
    throw DomainError("init_density must lie in [0, 1]");
}

namespace {

std::pair<Vertex, Vertex> random_dyad(int n, Rng& rng) {
  const auto i = static_cast<Vertex>(rng.below(n));
  auto j = static_cast<Vertex>(rng.below(n - 1));
  if (j >= i) ++j;
  return {i, j};
}

double logistic(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void gibbs_step(Graph& g, const LogitKernel& logit, Rng& rng) {
  if (g.n() < 2) return;
  const auto [i, j] = random_dyad(g.n(), rng);
  const bool want = rng.uniform() < logistic(logit(g, i, j));
  if (g.has_edge(i, j) != want) g.toggle(i, j);
}

void gibbs_step(Graph& g, const ParamState& p, const ModelSpec& m, Rng& rng) {
  check_consistent(p, m, g.n());
  gibbs_step(g, LogitKernel(p, m), rng);
}

bool tnt_step(Graph& g, const LogitKernel& logit, Rng& rng) {
  if (g.n() < 2) return false;
  const long dyads = g.dyad_count();
  const long edges = g.edge_count();

  bool remove;
  if (edges == 0) {
    remove = false;
  } else if (edges == dyads) {
    remove = true;
  } else {
    remove = rng.uniform() < 0.5;
  }

  Vertex i, j;
  if (remove) {
    std::tie(i, j) = g.edge_at(static_cast<long>(rng.below(edges)));
  } else {
    do {
      std::tie(i, j) = random_dyad(g.n(), rng);
    } while (g.has_edge(i, j));
  }

  // log q(reverse) - log q(forward). Pool-selection probability is 1/2 unless
  // the pool on that side is the only non-empty one.
  double log_proposal_ratio;
  if (remove) {
    const double fwd_pool = (edges == dyads) ? 1.0 : 0.5;
    const double rev_pool = (edges == 1) ? 1.0 : 0.5;  // reverse starts from edges-1 edges
    const double fwd = fwd_pool / static_cast<double>(edges);
    const double rev = rev_pool / static_cast<double>(dyads - edges + 1);
    log_proposal_ratio = std::log(rev) - std::log(fwd);
  } else {
    const double fwd_pool = (edges == 0) ? 1.0 : 0.5;
    const double rev_pool = (edges + 1 == dyads) ? 1.0 : 0.5;
    const double fwd = fwd_pool / static_cast<double>(dyads - edges);
    const double rev = rev_pool / static_cast<double>(edges + 1);
    log_proposal_ratio = std::log(rev) - std::log(fwd);
  }

  const double eta = logit(g, i, j);
  const double log_ratio = (remove ? -eta : eta) + log_proposal_ratio;
  if (log_ratio >= 0.0 || std::log(rng.uniform_pos()) < log_ratio) {
    g.toggle(i, j);
    return true;
  }
  return false;
}

bool tnt_step(Graph& g, const ParamState& p, const ModelSpec& m, Rng& rng) {
  check_consistent(p, m, g.n());
  return tnt_step(g, LogitKernel(p, m), rng);
}

long run_sampler(Graph& g, const LogitKernel& logit, long steps, SamplerKind sampler, Rng& rng) {
  long changed = 0;
  if (sampler == SamplerKind::Tnt) {
    for (long s = 0; s < steps; ++s) changed += tnt_step(g, logit, rng) ? 1 : 0;
  } else {
    for (long s = 0; s < steps; ++s) {
      const long before = g.edge_count();
      gibbs_step(g, logit, rng);
      changed += (g.edge_count() != before) ? 1 : 0;
    }
  }
  return changed;
}

Graph initial_graph(int n, const SimConfig& c, Rng& rng) {
  switch (c.init) {
    case InitKind::Observed:
      if (!c.observed) throw DomainError("observed-graph initialization needs a graph");
      if (c.observed->n() != n) throw DomainError("observed graph has the wrong vertex count");
      return *c.observed;
    case InitKind::Empty:
      return Graph(n);
    case InitKind::Random: {
      Graph g(n);
      for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
          if (rng.uniform() < c.init_density) g.toggle(i, j);
      return g;
    }
  }
  return Graph(n);
}

Graph simulate_network(const ParamState& p, const ModelSpec& m, int n, const SimConfig& c, Rng& rng) {
  c.validate();
  check_consistent(p, m, n);
  Graph g = initial_graph(n, c, rng);
  run_sampler(g, LogitKernel(p, m), c.resolved_aux_iters(n), c.sampler, rng);
  return g;
}

}  // namespace bergm
