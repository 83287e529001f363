#pragma once

#include <cstdint>
#include <vector>

#include "treecluster/tree_shape.hpp"

namespace treecluster {

/// Emitter-coherence bookkeeping for one tree generation run, in units of
/// the time-bin duration t_ph. t_min is the total time the emitter must
/// stay coherent; it excludes the slack between an E gate and the next
/// entangling operation, during which the emitter sits in a Pauli
/// eigenstate.
struct TimingModel {
  double t_ph = 1.0;
  std::vector<double> delta_t;  // delta_t[l], l = 1..d (index 0 unused)
  std::vector<double> t_levels; // t_l, l = 0..d
  double t_min = 0.0;
};

struct ErrorBudget {
  double eps = 0.0;
  std::vector<double> R;  // R_0..R_{d+1}
  double eps_loss = 0.0;
  double eps_coh = 0.0;
  double eps_eff = 0.0;
};

/// Success probabilities R_l of indirect Z measurements, by downward
/// recursion with R_d = R_{d+1} = 0 and b_d = 0.
std::vector<double> r_indirect(const TreeShape& shape, double eps);

/// Effective loss probability of the tree-encoded logical measurement.
double eps_loss(const TreeShape& shape, double eps);

TimingModel timing(const TreeShape& shape, double t_ph);

/// 1 - exp(-t_min / t_coh); pass t_coh = infinity for a perfect emitter.
double eps_coh(const TreeShape& shape, double t_ph, double t_coh);

ErrorBudget eps_eff(const TreeShape& shape, double eps, double t_ph,
                    double t_coh);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long long trials = 0;
};

/// Samples photon loss patterns and decodes the logical Z measurement:
/// success requires Z access (direct or indirect) to every level-1 photon,
/// at least one level-1 photon present, and Z access to every child of the
/// first present level-1 photon (the one consumed by the logical-basis
/// measurement, no fallback). This is the rule whose success probability
/// equals the closed form of eps_loss; set adaptive_fallback to let the
/// decoder retry other present level-1 photons (slightly better than the
/// closed form).
McEstimate mc_loss_oracle(const TreeShape& shape, double eps,
                          long long trials, std::uint64_t seed,
                          int threads = 0, bool adaptive_fallback = false);

struct LogicDecoderOptions {
  bool recursive = true;   // majority-vote lower levels too; when false the
                           // grandchild Z values are used raw, which is the
                           // decoder whose worst case reaches 6x
  bool tie_fails = true;   // even vote splits decode to failure
};

struct LogicErrorResult {
  double x_basis = 0.0;
  double y_basis = 0.0;
  double z_basis = 0.0;
  double worst = 0.0;
  double std_error_worst = 0.0;
  long long trials = 0;
};

/// Loss-free single-photon logic (flip) errors, corrected by majority
/// voting over the per-child indirect Z reconstructions. X and Y logical
/// measurements use the direct photon measurement. Flip probability is the
/// same in every basis.
LogicErrorResult mc_logic_error(const TreeShape& shape, double eps_flip,
                                long long trials, std::uint64_t seed,
                                const LogicDecoderOptions& opts = {},
                                int threads = 0);

}  // namespace treecluster
