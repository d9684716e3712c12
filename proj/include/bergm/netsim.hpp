#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "bergm/graph.hpp"
#include "bergm/model.hpp"
#include "bergm/rng.hpp"

namespace bergm {

enum class SamplerKind { Tnt, Gibbs };

SamplerKind parse_sampler(std::string_view name);
std::string_view sampler_name(SamplerKind kind) noexcept;

enum class InitKind { Observed, Empty, Random };

/// Auxiliary-network simulation settings.
struct SimConfig {
  /// Sampler steps per simulated network. Unset means n(n-1)/2.
  std::optional<long> aux_iters;
  SamplerKind sampler = SamplerKind::Tnt;
  InitKind init = InitKind::Observed;
  /// Edge probability for InitKind::Random.
  double init_density = 0.1;
  /// Start graph for InitKind::Observed.
  std::shared_ptr<const Graph> observed;

  long resolved_aux_iters(int n) const;
  void validate() const;
};

/// Resample one uniformly chosen dyad from its full conditional.
void gibbs_step(Graph& g, const LogitKernel& logit, Rng& rng);
void gibbs_step(Graph& g, const ParamState& p, const ModelSpec& m, Rng& rng);

/**
 * One tie-no-tie Metropolis-Hastings step.
 *
 * With probability 1/2 a uniformly chosen edge is proposed for removal,
 * otherwise a uniformly chosen non-edge for addition. When one of the two
 * pools is empty every proposal comes from the other. The acceptance
 * probability carries the exact forward/backward proposal ratio, so the
 * stationary law is the ERGM for every graph including the empty and
 * complete ones. Returns whether the toggle was accepted.
 */
bool tnt_step(Graph& g, const LogitKernel& logit, Rng& rng);
bool tnt_step(Graph& g, const ParamState& p, const ModelSpec& m, Rng& rng);

/// Run `steps` sampler steps on g in place. Returns the number of accepted toggles
/// (for Gibbs, the number of dyads whose value changed).
long run_sampler(Graph& g, const LogitKernel& logit, long steps, SamplerKind sampler, Rng& rng);

/// Initial graph per c.init.
Graph initial_graph(int n, const SimConfig& c, Rng& rng);

/// Draw a network from the model at p: aux_iters steps from the configured start.
Graph simulate_network(const ParamState& p, const ModelSpec& m, int n, const SimConfig& c, Rng& rng);

}  // namespace bergm
