#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "treecluster/optimizer.hpp"

using namespace treecluster;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("shape enumeration order and contents") {
  SearchConfig cfg;
  cfg.max_depth = 1;
  cfg.max_branch = 3;
  auto got = enumerate_shapes(cfg);
  REQUIRE(got.size() == 3);
  CHECK(got[0].branches == std::vector<int>{1});
  CHECK(got[1].branches == std::vector<int>{2});
  CHECK(got[2].branches == std::vector<int>{3});

  cfg.max_depth = 2;
  cfg.max_branch = 2;
  got = enumerate_shapes(cfg);
  REQUIRE(got.size() == 6);
  CHECK(got[0].branches == std::vector<int>{1});
  CHECK(got[1].branches == std::vector<int>{2});
  CHECK(got[2].branches == std::vector<int>{1, 1});
  CHECK(got[3].branches == std::vector<int>{1, 2});
  CHECK(got[4].branches == std::vector<int>{2, 1});
  CHECK(got[5].branches == std::vector<int>{2, 2});
}

TEST_CASE("enumeration count matches a brute-force recount") {
  SearchConfig cfg;
  cfg.max_depth = 3;
  cfg.max_branch = 10;
  cfg.max_photons = 2000;
  const auto got = enumerate_shapes(cfg);
  long long count = 0;
  for (int b0 = 1; b0 <= 10; ++b0) {
    if (1 + b0 <= 2000) ++count;
    for (int b1 = 1; b1 <= 10; ++b1) {
      if (1 + b0 + b0 * b1 <= 2000) ++count;
      for (int b2 = 1; b2 <= 10; ++b2) {
        if (1 + b0 + b0 * b1 + b0 * b1 * b2 <= 2000) ++count;
      }
    }
  }
  CHECK(static_cast<long long>(got.size()) == count);
  for (const auto& s : got) CHECK(s.total_photons() <= 2000);
}

TEST_CASE("enumeration covers the three reference shapes") {
  SearchConfig cfg;
  cfg.max_depth = 4;
  cfg.max_branch = 10;
  cfg.max_photons = 2000;
  const auto got = enumerate_shapes(cfg);
  auto contains = [&](std::vector<int> b) {
    for (const auto& s : got)
      if (s.branches == b) return true;
    return false;
  };
  CHECK(contains({2, 2, 2}));
  CHECK(contains({3, 5, 3}));
  CHECK(contains({6, 10, 9, 1}));
}

TEST_CASE("lossless limit favors the single-photon tree") {
  SearchConfig cfg;
  cfg.max_depth = 3;
  cfg.max_branch = 4;
  cfg.max_photons = 100;
  const auto best = best_for_size(0.0, 1e4, 100, cfg);
  REQUIRE(best.found);
  CHECK(best.shape.branches == std::vector<int>{1});
  CHECK(best.budget.eps_eff ==
        doctest::Approx(eps_coh(TreeShape{{1}}, 1.0, 1e4)).epsilon(1e-12));
}

TEST_CASE("optimum dominates every enumerated shape") {
  SearchConfig cfg;
  cfg.max_depth = 3;
  cfg.max_branch = 5;
  cfg.max_photons = 200;
  const double eps = 0.12, tc = 2e3;
  const auto best = best_for_size(eps, tc, 200, cfg);
  REQUIRE(best.found);
  for (const auto& s : enumerate_shapes(cfg)) {
    CHECK(best.budget.eps_eff <= eps_eff(s, eps, 1.0, tc).eps_eff + 1e-15);
  }
}

TEST_CASE("optimum is monotone in loss and coherence-bandwidth product") {
  SearchConfig cfg;
  cfg.max_depth = 3;
  cfg.max_branch = 5;
  cfg.max_photons = 300;
  double prev = 0.0;
  for (double eps : {0.02, 0.05, 0.1, 0.2}) {
    const double cur = best_for_cohbw(eps, 1e9, cfg).budget.eps_eff;
    CHECK(cur >= prev - 1e-15);
    prev = cur;
  }
  prev = 1.0;
  for (double cohbw : {1e6, 1e7, 1e9, 1e11}) {
    const double cur = best_for_cohbw(0.1, cohbw, cfg).budget.eps_eff;
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}

TEST_CASE("sweep is deterministic and matches per-cell evaluation") {
  SearchConfig cfg;
  cfg.max_depth = 3;
  cfg.max_branch = 4;
  cfg.max_photons = 150;
  const auto eg = linear_grid(0.05, 0.15, 3);
  const auto cg = log_grid(1e6, 1e10, 3);
  const auto a = sweep(eg, cg, cfg, 1);
  const auto b = sweep(eg, cg, cfg, 4);
  REQUIRE(a.cells.size() == 9);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].best.shape == b.cells[i].best.shape);
    CHECK(a.cells[i].best.budget.eps_eff == b.cells[i].best.budget.eps_eff);
    const auto direct = best_for_cohbw(a.cells[i].eps, a.cells[i].cohbw, cfg);
    CHECK(a.cells[i].best.budget.eps_eff == direct.budget.eps_eff);
  }
}

TEST_CASE("size-capped best error is non-increasing; per-bin rises again") {
  SearchConfig cfg;
  cfg.max_depth = 4;
  cfg.max_branch = 8;
  cfg.max_photons = 1500;
  // blue curve: cap semantics, perfect emitter
  double prev = 1.0;
  for (long long cap : {3, 7, 15, 40, 100, 400, 1500}) {
    const double cur = best_for_size(0.1, kInf, cap, cfg).budget.eps_eff;
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  // orange curve: per-size-bin best at finite coherence has an interior
  // minimum: the tail value exceeds the minimum
  std::vector<double> bins{3, 10, 30, 100, 300, 1000, 1500};
  std::vector<double> vals;
  long long lo = 2;
  for (double hi : bins) {
    const auto b = best_in_window(0.1, 1e4, lo, static_cast<long long>(hi), cfg);
    REQUIRE(b.found);
    vals.push_back(b.budget.eps_eff);
    lo = static_cast<long long>(hi) + 1;
  }
  const double vmin = *std::min_element(vals.begin(), vals.end());
  CHECK(vals.front() > vmin);
  CHECK(vals.back() > vmin);
}

TEST_CASE("tie-break prefers fewer photons then lexicographic order") {
  SearchConfig cfg;
  cfg.max_depth = 2;
  cfg.max_branch = 3;
  cfg.max_photons = 20;
  // at eps = 0 with infinite coherence every shape scores 0; the winner
  // must be {1} (fewest photons, lexicographically first)
  const auto best = best_for_size(0.0, kInf, 20, cfg);
  CHECK(best.budget.eps_eff == 0.0);
  CHECK(best.shape.branches == std::vector<int>{1});
}

TEST_CASE("minimal coherence-bandwidth product search") {
  SearchConfig cfg;
  cfg.max_depth = 3;
  cfg.max_branch = 6;
  cfg.max_photons = 500;
  const double c = min_cohbw_for_target(0.1, 0.05, cfg);
  CHECK(std::isfinite(c));
  CHECK(best_for_cohbw(0.1, c * 1.01, cfg).budget.eps_eff <= 0.05);
  CHECK(best_for_cohbw(0.1, c * 0.5, cfg).budget.eps_eff > 0.05);
  // unreachable target
  CHECK(std::isinf(min_cohbw_for_target(0.7, 1e-3, cfg)));
}

TEST_CASE("grid helpers") {
  const auto lg = log_grid(1.0, 100.0, 3);
  REQUIRE(lg.size() == 3);
  CHECK(lg[1] == doctest::Approx(10.0));
  const auto ln = linear_grid(0.0, 1.0, 5);
  CHECK(ln[3] == doctest::Approx(0.75));
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 2), std::invalid_argument);
}
