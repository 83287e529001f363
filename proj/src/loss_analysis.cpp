#include "treecluster/loss_analysis.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>

namespace treecluster {

std::vector<double> r_indirect(const TreeShape& shape, double eps) {
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("r_indirect: eps");
  const int d = shape.depth();
  std::vector<int> b = shape.branches;
  b.push_back(0);  // b_d = 0
  std::vector<double> R(d + 2, 0.0);
  for (int l = d - 1; l >= 0; --l) {
    const double inner = (1.0 - eps) * std::pow(1.0 - eps + eps * R[l + 2], b[l + 1]);
    R[l] = 1.0 - std::pow(1.0 - inner, b[l]);
  }
  return R;
}

double eps_loss(const TreeShape& shape, double eps) {
  const auto R = r_indirect(shape, eps);
  const int b0 = shape.branches[0];
  const int b1 = shape.depth() >= 2 ? shape.branches[1] : 0;
  const double access = std::pow(1.0 - eps + eps * R[1], b0);
  const double all_indirect = std::pow(eps * R[1], b0);
  return 1.0 - (access - all_indirect) * std::pow(1.0 - eps + eps * R[2], b1);
}

TimingModel timing(const TreeShape& shape, double t_ph) {
  if (t_ph <= 0.0) throw std::invalid_argument("timing: t_ph must be > 0");
  const int d = shape.depth();
  const auto nl = shape.level_counts();
  TimingModel tm;
  tm.t_ph = t_ph;
  tm.delta_t.assign(d + 1, 0.0);
  tm.delta_t[d] = t_ph;
  if (d >= 2) tm.delta_t[d - 1] = (shape.branches[d - 1] + 1) * t_ph;
  for (int l = d - 2; l >= 1; --l)
    tm.delta_t[l] = shape.branches[l] * tm.delta_t[l + 1];
  tm.t_levels.assign(d + 1, 0.0);
  tm.t_levels[d] = t_ph * static_cast<double>(nl[d]);
  for (int l = 0; l <= d - 1; ++l) {
    const double dt_next = l + 1 <= d ? tm.delta_t[l + 1] : t_ph;
    tm.t_levels[l] =
        ((shape.branches[l] - 1) * dt_next + 2.0 * t_ph) * static_cast<double>(nl[l]);
  }
  for (double t : tm.t_levels) tm.t_min += t;
  return tm;
}

double eps_coh(const TreeShape& shape, double t_ph, double t_coh) {
  if (t_coh <= 0.0) throw std::invalid_argument("eps_coh: t_coh must be > 0");
  if (std::isinf(t_coh)) return 0.0;
  const double t_min = timing(shape, t_ph).t_min;
  return 1.0 - std::exp(-t_min / t_coh);
}

ErrorBudget eps_eff(const TreeShape& shape, double eps, double t_ph,
                    double t_coh) {
  ErrorBudget out;
  out.eps = eps;
  out.R = r_indirect(shape, eps);
  out.eps_loss = eps_loss(shape, eps);
  out.eps_coh = eps_coh(shape, t_ph, t_coh);
  out.eps_eff = 1.0 - (1.0 - out.eps_loss) * (1.0 - out.eps_coh);
  return out;
}

namespace {

// counter-based per-trial stream: reproducible at any thread count
struct SplitMix64 {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e9b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

SplitMix64 trial_stream(std::uint64_t seed, long long trial) {
  SplitMix64 g{seed ^ 0x2545f4914f6cdd1dULL};
  const std::uint64_t mixed = g.next() + static_cast<std::uint64_t>(trial);
  return SplitMix64{mixed};
}

// flat node layout: level offsets; child c of node (l,k) is (l+1, k*b_l + c)
struct TreeIndex {
  std::vector<int> b;
  std::vector<long long> nl;
  std::vector<long long> off;  // offset of level l
  int d;
  explicit TreeIndex(const TreeShape& shape)
      : b(shape.branches), nl(shape.level_counts()), d(shape.depth()) {
    off.assign(d + 2, 0);
    for (int l = 0; l <= d; ++l) off[l + 1] = off[l] + nl[l];
  }
  long long id(int l, long long k) const { return off[l] + k; }
  long long total() const { return off[d + 1]; }
};

long long run_threaded(long long trials, int threads,
                       const std::function<long long(long long, long long)>& chunk) {
  int nthreads = threads > 0 ? threads
                             : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  if (trials < 4 * nthreads) nthreads = 1;
  if (nthreads == 1) return chunk(0, trials);
  std::vector<long long> partial(nthreads, 0);
  std::vector<std::thread> pool;
  const long long step = (trials + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const long long lo = t * step;
    const long long hi = std::min(trials, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&, t, lo, hi] { partial[t] = chunk(lo, hi); });
  }
  for (auto& th : pool) th.join();
  long long total = 0;
  for (long long p : partial) total += p;
  return total;
}

}  // namespace

McEstimate mc_loss_oracle(const TreeShape& shape, double eps, long long trials,
                          std::uint64_t seed, int threads,
                          bool adaptive_fallback) {
  if (trials < 1) throw std::invalid_argument("mc_loss_oracle: trials");
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("mc_loss_oracle: eps");
  const TreeIndex ti(shape);
  const int d = ti.d;

  auto chunk = [&](long long lo, long long hi) -> long long {
    std::vector<char> present(ti.total());
    std::vector<char> memo(ti.total());       // z-access known?
    std::vector<char> value(ti.total());
    long long failures = 0;
    // recursive z-access with memoization per trial
    std::function<bool(int, long long)> zaccess = [&](int l, long long k) -> bool {
      const long long id = ti.id(l, k);
      if (memo[id]) return value[id];
      bool ok = false;
      if (present[id]) {
        ok = true;
      } else if (l < d) {
        const int bl = ti.b[l];
        for (int c = 0; c < bl && !ok; ++c) {
          const long long ck = k * bl + c;
          if (!present[ti.id(l + 1, ck)]) continue;
          bool sub = true;
          if (l + 1 < d) {
            const int bl1 = ti.b[l + 1];
            for (int g = 0; g < bl1; ++g) {
              if (!zaccess(l + 2, ck * bl1 + g)) { sub = false; break; }
            }
          }
          ok = sub;
        }
      }
      memo[id] = 1;
      value[id] = ok;
      return ok;
    };
    for (long long t = lo; t < hi; ++t) {
      auto g = trial_stream(seed, t);
      for (long long i = ti.nl[0]; i < ti.total(); ++i)
        present[i] = g.uniform() >= eps;
      std::fill(memo.begin(), memo.end(), 0);
      const int b0 = ti.b[0];
      bool all_access = true;
      long long direct = -1;
      for (int k = 0; k < b0; ++k) {
        const bool pres = present[ti.id(1, k)];
        if (pres && direct < 0) direct = k;
        if (!pres && !zaccess(1, k)) { all_access = false; break; }
      }
      bool success = all_access && direct >= 0;
      if (success && d >= 2) {
        auto children_ok = [&](long long k) {
          const int b1 = ti.b[1];
          for (int c = 0; c < b1; ++c)
            if (!zaccess(2, k * b1 + c)) return false;
          return true;
        };
        if (!adaptive_fallback) {
          success = children_ok(direct);
        } else {
          success = false;
          for (int k = 0; k < b0 && !success; ++k)
            success = present[ti.id(1, k)] && children_ok(k);
        }
      }
      failures += !success;
    }
    return failures;
  };

  const long long failures = run_threaded(trials, threads, chunk);
  McEstimate out;
  out.trials = trials;
  out.estimate = static_cast<double>(failures) / static_cast<double>(trials);
  out.std_error =
      std::sqrt(std::max(out.estimate * (1.0 - out.estimate), 1e-300) /
                static_cast<double>(trials));
  return out;
}

LogicErrorResult mc_logic_error(const TreeShape& shape, double eps_flip,
                                long long trials, std::uint64_t seed,
                                const LogicDecoderOptions& opts, int threads) {
  if (trials < 1) throw std::invalid_argument("mc_logic_error: trials");
  if (eps_flip < 0.0 || eps_flip >= 0.5)
    throw std::invalid_argument("mc_logic_error: eps_flip must be in [0, 0.5)");
  const TreeIndex ti(shape);
  const int d = ti.d;

  // Z-basis logical measurement: the root's Z is reconstructed indirectly
  // from each level-1 subtree (X of child times Z of grandchildren) and the
  // reconstructions vote. Lower-level Z values may themselves be majority
  // voted (direct Z plus per-grandchild reconstructions) when recursive.
  auto chunk_z = [&](long long lo, long long hi) -> long long {
    std::vector<char> flip(ti.total());
    long long failures = 0;
    std::function<int(int, long long)> det_z = [&](int l, long long k) -> int {
      const int direct = flip[ti.id(l, k)];
      if (l >= d || !opts.recursive) return direct;
      int wrong = direct, votes = 1;
      const int bl = ti.b[l];
      for (int c = 0; c < bl; ++c) {
        const long long ck = k * bl + c;
        int v = flip[ti.id(l + 1, ck)];
        if (l + 1 < d) {
          const int bl1 = ti.b[l + 1];
          for (int g = 0; g < bl1; ++g) v ^= det_z(l + 2, ck * bl1 + g);
        }
        wrong += v;
        ++votes;
      }
      if (2 * wrong > votes) return 1;
      if (2 * wrong == votes) return opts.tie_fails ? 1 : direct;
      return 0;
    };
    for (long long t = lo; t < hi; ++t) {
      auto g = trial_stream(seed, t);
      for (long long i = 0; i < ti.total(); ++i) flip[i] = g.uniform() < eps_flip;
      const int b0 = ti.b[0];
      int wrong = 0;
      for (int k = 0; k < b0; ++k) {
        int v = flip[ti.id(1, k)];
        if (d >= 2) {
          const int b1 = ti.b[1];
          for (int c = 0; c < b1; ++c) {
            const long long ck = static_cast<long long>(k) * b1 + c;
            v ^= opts.recursive ? det_z(2, ck) : flip[ti.id(2, ck)];
          }
        }
        wrong += v;
      }
      const bool fail = opts.tie_fails ? (2 * wrong >= b0) : (2 * wrong > b0);
      failures += fail;
    }
    return failures;
  };
  // X (and Y) logical measurements read the root photon directly.
  auto chunk_direct = [&](long long lo, long long hi, std::uint64_t salt) {
    long long failures = 0;
    for (long long t = lo; t < hi; ++t) {
      auto g = trial_stream(seed ^ salt, t);
      failures += g.uniform() < eps_flip;
    }
    return failures;
  };

  LogicErrorResult out;
  out.trials = trials;
  const long long zf = run_threaded(trials, threads, chunk_z);
  const long long xf = run_threaded(trials, threads, [&](long long lo, long long hi) {
    return chunk_direct(lo, hi, 0x9e03u);
  });
  const long long yf = run_threaded(trials, threads, [&](long long lo, long long hi) {
    return chunk_direct(lo, hi, 0x51efu);
  });
  out.z_basis = static_cast<double>(zf) / trials;
  out.x_basis = static_cast<double>(xf) / trials;
  out.y_basis = static_cast<double>(yf) / trials;
  out.worst = std::max({out.x_basis, out.y_basis, out.z_basis});
  out.std_error_worst =
      std::sqrt(std::max(out.worst * (1.0 - out.worst), 1e-300) / trials);
  return out;
}

}  // namespace treecluster
