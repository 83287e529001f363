#pragma once

#include <functional>
#include <vector>

#include "treecluster/loss_analysis.hpp"
#include "treecluster/tree_shape.hpp"

namespace treecluster {

/// Bounds for the exhaustive shape enumeration plus the two dimensionless
/// constants that tie the sweep axis t_coh*gamma_R to the timing model.
struct SearchConfig {
  int max_depth = 5;
  int max_branch = 16;
  long long max_photons = 10'000'000;
  double ratio = 0.0014;  // gamma_B / gamma_R
  double gb_tph = 6.2;    // gamma_B * t_ph
  double tph_gamma_r() const { return gb_tph / ratio; }
};

/// All branching vectors with depth <= max_depth, 1 <= b_i <= max_branch and
/// total photons <= max_photons, in (depth, lexicographic) order.
std::vector<TreeShape> enumerate_shapes(const SearchConfig& cfg);
void enumerate_shapes(const SearchConfig& cfg,
                      const std::function<void(const TreeShape&)>& visit);

struct BestResult {
  TreeShape shape;
  ErrorBudget budget;
  bool found = false;
};

/// Minimum eps_eff over shapes with total photons <= size_cap. Ties break
/// toward fewer photons, then the lexicographically smaller branch vector.
/// t_coh_over_tph may be infinity.
BestResult best_for_size(double eps, double t_coh_over_tph, long long size_cap,
                         const SearchConfig& cfg = {});

/// Minimum eps_eff over shapes with total photons in [size_lo, size_hi];
/// used for the per-size-bin curve where a finite coherence time makes the
/// error rise again for large trees.
BestResult best_in_window(double eps, double t_coh_over_tph, long long size_lo,
                          long long size_hi, const SearchConfig& cfg = {});

/// Best shape at a grid point of (single-photon loss, t_coh*gamma_R).
BestResult best_for_cohbw(double eps, double cohbw, const SearchConfig& cfg = {});

struct SweepCell {
  double eps = 0.0;
  double cohbw = 0.0;
  BestResult best;
};

struct SweepResult {
  std::vector<double> eps_grid;
  std::vector<double> cohbw_grid;
  std::vector<SweepCell> cells;  // row-major, eps outer
};

SweepResult sweep(const std::vector<double>& eps_grid,
                  const std::vector<double>& cohbw_grid,
                  const SearchConfig& cfg = {}, int threads = 0);

/// Smallest t_coh*gamma_R whose optimal eps_eff reaches the target at the
/// given loss, by bisection in log space. Returns infinity when even a
/// perfect emitter cannot reach it.
double min_cohbw_for_target(double eps, double target_eps_eff,
                            const SearchConfig& cfg = {});

/// Geometric grid helper a..b with n points (inclusive).
std::vector<double> log_grid(double a, double b, int n);
std::vector<double> linear_grid(double a, double b, int n);

}  // namespace treecluster
