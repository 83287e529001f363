#include "treecluster/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace treecluster {

namespace {

void enumerate_rec(const SearchConfig& cfg, int depth, std::vector<int>& prefix,
                   long long photons, long long level_count,
                   const std::function<void(const TreeShape&)>& visit) {
  const int filled = static_cast<int>(prefix.size());
  if (filled == depth) {
    visit(TreeShape{prefix});
    return;
  }
  for (int b = 1; b <= cfg.max_branch; ++b) {
    const long long next_level = level_count * b;
    // remaining levels add at least next_level photons each
    const long long min_total =
        photons + next_level * (depth - filled);
    if (min_total > cfg.max_photons) {
      if (b == 1) return;  // larger b only grows the count
      break;
    }
    prefix.push_back(b);
    enumerate_rec(cfg, depth, prefix, photons + next_level, next_level, visit);
    prefix.pop_back();
  }
}

bool better(const TreeShape& a, double ea, const TreeShape& b, double eb) {
  if (ea != eb) return ea < eb;
  const long long pa = a.total_photons(), pb = b.total_photons();
  if (pa != pb) return pa < pb;
  return a.branches < b.branches;
}

BestResult best_over(double eps, double t_coh_over_tph, long long size_lo,
                     long long size_hi, const SearchConfig& cfg) {
  BestResult best;
  double best_eff = std::numeric_limits<double>::infinity();
  // t_ph = 1; t_coh in the same unit
  const double t_coh = t_coh_over_tph;
  enumerate_shapes(cfg, [&](const TreeShape& s) {
    const long long photons = s.total_photons();
    if (photons < size_lo || photons > size_hi) return;
    const auto budget = eps_eff(s, eps, 1.0, t_coh);
    if (!best.found || better(s, budget.eps_eff, best.shape, best_eff)) {
      best.shape = s;
      best.budget = budget;
      best_eff = budget.eps_eff;
      best.found = true;
    }
  });
  return best;
}

}  // namespace

void enumerate_shapes(const SearchConfig& cfg,
                      const std::function<void(const TreeShape&)>& visit) {
  if (cfg.max_depth < 1 || cfg.max_branch < 1)
    throw std::invalid_argument("enumerate_shapes: bad bounds");
  std::vector<int> prefix;
  for (int d = 1; d <= cfg.max_depth; ++d)
    enumerate_rec(cfg, d, prefix, 1, 1, visit);
}

std::vector<TreeShape> enumerate_shapes(const SearchConfig& cfg) {
  std::vector<TreeShape> out;
  enumerate_shapes(cfg, [&](const TreeShape& s) { out.push_back(s); });
  return out;
}

BestResult best_for_size(double eps, double t_coh_over_tph, long long size_cap,
                         const SearchConfig& cfg) {
  if (size_cap < 2) throw std::invalid_argument("best_for_size: size_cap >= 2");
  return best_over(eps, t_coh_over_tph, 0, size_cap, cfg);
}

BestResult best_in_window(double eps, double t_coh_over_tph, long long size_lo,
                          long long size_hi, const SearchConfig& cfg) {
  return best_over(eps, t_coh_over_tph, size_lo, size_hi, cfg);
}

BestResult best_for_cohbw(double eps, double cohbw, const SearchConfig& cfg) {
  const double t_coh_over_tph = std::isinf(cohbw)
                                    ? std::numeric_limits<double>::infinity()
                                    : cohbw / cfg.tph_gamma_r();
  return best_over(eps, t_coh_over_tph, 0, cfg.max_photons, cfg);
}

SweepResult sweep(const std::vector<double>& eps_grid,
                  const std::vector<double>& cohbw_grid,
                  const SearchConfig& cfg, int threads) {
  if (eps_grid.empty() || cohbw_grid.empty())
    throw std::invalid_argument("sweep: empty grid");
  SweepResult out;
  out.eps_grid = eps_grid;
  out.cohbw_grid = cohbw_grid;
  out.cells.resize(eps_grid.size() * cohbw_grid.size());
  const std::size_t total = out.cells.size();
  int nthreads = threads > 0 ? threads
                             : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  nthreads = std::min<std::size_t>(nthreads, total);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double eps = eps_grid[i / cohbw_grid.size()];
      const double cohbw = cohbw_grid[i % cohbw_grid.size()];
      out.cells[i] = SweepCell{eps, cohbw, best_for_cohbw(eps, cohbw, cfg)};
    }
  };
  if (nthreads == 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t step = (total + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t lo = t * step;
      const std::size_t hi = std::min(total, lo + step);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

double min_cohbw_for_target(double eps, double target_eps_eff,
                            const SearchConfig& cfg) {
  const double inf = std::numeric_limits<double>::infinity();
  if (best_for_cohbw(eps, inf, cfg).budget.eps_eff > target_eps_eff) return inf;
  double lo_log = std::log10(1.0), hi_log = std::log10(1e16);
  auto ok = [&](double lg) {
    return best_for_cohbw(eps, std::pow(10.0, lg), cfg).budget.eps_eff <=
           target_eps_eff;
  };
  if (ok(lo_log)) return 1.0;
  if (!ok(hi_log)) return inf;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo_log + hi_log);
    (ok(mid) ? hi_log : lo_log) = mid;
  }
  return std::pow(10.0, hi_log);
}

std::vector<double> log_grid(double a, double b, int n) {
  if (n < 1 || a <= 0 || b <= 0) throw std::invalid_argument("log_grid");
  std::vector<double> out(n);
  if (n == 1) { out[0] = a; return out; }
  const double la = std::log10(a), lb = std::log10(b);
  for (int i = 0; i < n; ++i)
    out[i] = std::pow(10.0, la + (lb - la) * i / (n - 1));
  return out;
}

std::vector<double> linear_grid(double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("linear_grid");
  std::vector<double> out(n);
  if (n == 1) { out[0] = a; return out; }
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace treecluster
