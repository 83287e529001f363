#include "treecluster/dense_state.hpp"

#include <complex>
#include <stdexcept>

namespace treecluster {

namespace {

using Cd = std::complex<double>;

// w = P v for a signed Pauli string row
Eigen::VectorXcd apply_row(const StabilizerState::Row& row,
                           const Eigen::VectorXcd& v, int n) {
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(v.size());
  // phase bookkeeping: P = (-1)^neg prod_q sigma_q with sigma in {I,X,Y,Z}
  long long xmask = 0, zmask = 0;
  int ycount = 0;
  for (int q = 0; q < n; ++q) {
    const bool x = row.x.get(q), z = row.z.get(q);
    if (x) xmask |= 1LL << q;
    if (z) zmask |= 1LL << q;
    ycount += x && z;
  }
  // sigma_q acting on basis: X flips bit; Z gives (-1)^bit; Y = i X Z ... use
  // Y|0> = i|1>, Y|1> = -i|0>: combined phase i^{ycount} * (-1)^{popcount(z & j)}
  // with Y's Z-part folded into zmask and X-part into xmask.
  static const Cd ipow[4] = {Cd(1, 0), Cd(0, 1), Cd(-1, 0), Cd(0, -1)};
  for (long long j = 0; j < v.size(); ++j) {
    const long long t = j ^ xmask;
    int ph = (ycount + 2 * __builtin_popcountll(j & zmask)) & 3;
    // Y's i X Z convention: phase i per Y computed on the pre-flip bit via Z
    if (row.neg) ph = (ph + 2) & 3;
    w[t] += ipow[ph] * v[j];
  }
  return w;
}

}  // namespace

Eigen::VectorXcd dense_vector(const StabilizerState& s) {
  const int n = s.num_qubits();
  if (n > 14) throw std::invalid_argument("dense_vector: register too large");
  const auto rows = s.stabilizer_rows();
  const long long dim = 1LL << n;
  for (long long k = 0; k < dim; ++k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[k] = 1.0;
    for (const auto& row : rows) {
      v = 0.5 * (v + apply_row(row, v, n));
      // early exit when the projector annihilates the seed
      if (v.squaredNorm() < 1e-18) break;
    }
    const double nrm = v.norm();
    if (nrm > 1e-6) return v / nrm;
  }
  throw std::logic_error("dense_vector: no basis seed survived projection");
}

Eigen::VectorXcd graph_state_vector(const GraphSpec& g) {
  const int n = g.n;
  if (n > 24) throw std::invalid_argument("graph_state_vector: too large");
  const long long dim = 1LL << n;
  Eigen::VectorXcd v(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (long long j = 0; j < dim; ++j) {
    int par = 0;
    for (const auto& [a, b] : g.edges)
      par ^= ((j >> a) & 1) & ((j >> b) & 1);
    v[j] = par ? -amp : amp;
  }
  return v;
}

double overlap_abs(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace treecluster
