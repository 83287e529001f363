#include "treecluster/tree_shape.hpp"

#include <sstream>
#include <stdexcept>

namespace treecluster {

TreeShape::TreeShape(std::vector<int> b) : branches(std::move(b)) {
  if (branches.empty())
    throw std::invalid_argument("TreeShape: depth must be >= 1");
  for (int bi : branches) {
    if (bi < 1) throw std::invalid_argument("TreeShape: branching must be >= 1");
  }
}

std::vector<long long> TreeShape::level_counts() const {
  std::vector<long long> n{1};
  for (int b : branches) n.push_back(n.back() * b);
  return n;
}

long long TreeShape::total_photons() const {
  long long total = 0;
  for (long long nl : level_counts()) total += nl;
  return total;
}

TreeShape TreeShape::parse(const std::string& csv) {
  std::vector<int> b;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    b.push_back(std::stoi(tok));
  }
  return TreeShape(std::move(b));
}

std::string TreeShape::str() const {
  std::string out;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(branches[i]);
  }
  return out;
}

}  // namespace treecluster
