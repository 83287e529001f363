#pragma once

#include <string>
#include <vector>

namespace treecluster {

/// Branching parameters {b_0,...,b_{d-1}} of a tree; depth d = branches.size().
/// Level l holds n_l = prod_{i<l} b_i photons (n_0 = 1, the root).
struct TreeShape {
  std::vector<int> branches;

  TreeShape() = default;
  explicit TreeShape(std::vector<int> b);

  int depth() const { return static_cast<int>(branches.size()); }
  std::vector<long long> level_counts() const;  // n_0..n_d
  long long total_photons() const;

  static TreeShape parse(const std::string& csv);  // "2,2,2"
  std::string str() const;

  friend bool operator==(const TreeShape&, const TreeShape&) = default;
};

}  // namespace treecluster
