#pragma once

// Test-only dense statevector simulator. Independent of the tableau code
// path: gates are 2x2/4x4 matrix actions, measurements are projectors.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "treecluster/stabilizer.hpp"

namespace treecluster::testing {

inline Eigen::Matrix2cd gate_matrix_1q(Gate g) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  const double s = 1.0 / std::sqrt(2.0);
  switch (g) {
    case Gate::H: m << s, s, s, -s; break;
    case Gate::S: m << 1, 0, 0, 1.0i; break;
    case Gate::X: m << 0, 1, 1, 0; break;
    case Gate::Y: m << 0, -1.0i, 1.0i, 0; break;
    case Gate::Z: m << 1, 0, 0, -1; break;
    case Gate::RotYPlus: m << s, -s, s, s; break;   // e^{-i pi/4 Y}
    case Gate::RotYMinus: m << s, s, -s, s; break;  // e^{+i pi/4 Y}
    case Gate::LcA: m << 1.0i * s, s, -s, -1.0i * s; break;
    case Gate::LcB: m << 0, s + s * 1.0i, -s + s * 1.0i, 0; break;
    default: throw std::invalid_argument("gate_matrix_1q: two-qubit gate");
  }
  return m;
}

class DenseSim {
 public:
  explicit DenseSim(int n) : n_(n), v_(Eigen::VectorXcd::Zero(1LL << n)) {
    v_[0] = 1.0;
  }
  static DenseSim plus(int n) {
    DenseSim s(n);
    for (int q = 0; q < n; ++q) s.apply(Gate::H, q);
    return s;
  }

  int num_qubits() const { return n_; }
  const Eigen::VectorXcd& vec() const { return v_; }

  void apply(Gate g, int a, int b = -1) {
    if (g == Gate::Cz) {
      for (long long i = 0; i < v_.size(); ++i)
        if (((i >> a) & 1) && ((i >> b) & 1)) v_[i] = -v_[i];
      return;
    }
    if (g == Gate::Cnot) {
      for (long long i = 0; i < v_.size(); ++i) {
        if (((i >> a) & 1) && !((i >> b) & 1)) {
          std::swap(v_[i], v_[i | (1LL << b)]);
        }
      }
      return;
    }
    const Eigen::Matrix2cd m = gate_matrix_1q(g);
    const long long mask = 1LL << a;
    for (long long i = 0; i < v_.size(); ++i) {
      if (i & mask) continue;
      const auto lo = v_[i];
      const auto hi = v_[i | mask];
      v_[i] = m(0, 0) * lo + m(0, 1) * hi;
      v_[i | mask] = m(1, 0) * lo + m(1, 1) * hi;
    }
  }

  Eigen::VectorXcd pauli_applied(Basis b, int q) const {
    using namespace std::complex_literals;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v_.size());
    const long long mask = 1LL << q;
    for (long long i = 0; i < v_.size(); ++i) {
      switch (b) {
        case Basis::Z: out[i] += ((i & mask) ? -1.0 : 1.0) * v_[i]; break;
        case Basis::X: out[i ^ mask] += v_[i]; break;
        case Basis::Y:
          out[i ^ mask] += ((i & mask) ? -1.0i : 1.0i) * v_[i];
          break;
      }
    }
    return out;
  }

  double prob_plus(Basis b, int q) const {
    const Eigen::VectorXcd proj = 0.5 * (v_ + pauli_applied(b, q));
    return proj.squaredNorm();
  }

  void collapse(Basis b, int q, int outcome) {
    const double sg = outcome > 0 ? 1.0 : -1.0;
    v_ = 0.5 * (v_ + sg * pauli_applied(b, q));
    const double nrm = v_.norm();
    if (nrm < 1e-12) throw std::logic_error("collapse onto zero branch");
    v_ /= nrm;
  }

 private:
  int n_;
  Eigen::VectorXcd v_;
};

inline bool vectors_equal_up_to_phase(const Eigen::VectorXcd& a,
                                      const Eigen::VectorXcd& b,
                                      double tol = 1e-8) {
  if (a.size() != b.size()) return false;
  Eigen::Index k;
  a.cwiseAbs().maxCoeff(&k);
  if (std::abs(b[k]) < tol) return false;
  const std::complex<double> ph = a[k] / b[k];
  if (std::abs(std::abs(ph) - 1.0) > tol) return false;
  return (a - ph * b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace treecluster::testing
