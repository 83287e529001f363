#include "treecluster/noisy_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "treecluster/dense_state.hpp"
#include "treecluster/loss_analysis.hpp"

namespace treecluster {

void NoiseParams::validate() const {
  for (double l : {lambda1, lambda2, lambda3}) {
    if (l < 0.0 || l > 2.0 / 3.0)
      throw std::invalid_argument("NoiseParams: lambda must be in [0, 2/3]");
  }
  if (!(t_coh > 0.0)) throw std::invalid_argument("NoiseParams: t_coh > 0");
  if (!(t_ph > 0.0)) throw std::invalid_argument("NoiseParams: t_ph > 0");
}

DensityMatrix::DensityMatrix(int n) : n_(n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("DensityMatrix: qubit count out of range");
  const long long dim = 1LL << n;
  m_ = Eigen::MatrixXcd::Zero(dim, dim);
  m_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  int n = 0;
  while ((1LL << n) < psi.size()) ++n;
  if ((1LL << n) != psi.size())
    throw std::invalid_argument("DensityMatrix::pure: dimension not a power of 2");
  DensityMatrix rho(n);
  rho.m_ = psi * psi.adjoint();
  return rho;
}

void DensityMatrix::apply_1q(const Eigen::Matrix2cd& u, int q) {
  const long long dim = m_.rows();
  const long long mask = 1LL << q;
  // rho <- U rho (row pairs), then rho <- rho U^dag (column pairs)
  for (long long r0 = 0; r0 < dim; ++r0) {
    if (r0 & mask) continue;
    const long long r1 = r0 | mask;
    const auto row0 = m_.row(r0).eval();
    m_.row(r0) = u(0, 0) * row0 + u(0, 1) * m_.row(r1);
    m_.row(r1) = u(1, 0) * row0 + u(1, 1) * m_.row(r1);
  }
  const Eigen::Matrix2cd ud = u.adjoint();
  for (long long c0 = 0; c0 < dim; ++c0) {
    if (c0 & mask) continue;
    const long long c1 = c0 | mask;
    const auto col0 = m_.col(c0).eval();
    m_.col(c0) = col0 * ud(0, 0) + m_.col(c1) * ud(1, 0);
    m_.col(c1) = col0 * ud(0, 1) + m_.col(c1) * ud(1, 1);
  }
}

void DensityMatrix::apply_cnot(int control, int target) {
  const long long dim = m_.rows();
  const long long mc = 1LL << control, mt = 1LL << target;
  for (long long i = 0; i < dim; ++i) {
    if ((i & mc) && !(i & mt)) m_.row(i).swap(m_.row(i | mt));
  }
  for (long long i = 0; i < dim; ++i) {
    if ((i & mc) && !(i & mt)) m_.col(i).swap(m_.col(i | mt));
  }
}

void DensityMatrix::apply_cz(int a, int b) {
  const long long dim = m_.rows();
  const long long ma = 1LL << a, mb = 1LL << b;
  for (long long i = 0; i < dim; ++i) {
    if ((i & ma) && (i & mb)) {
      m_.row(i) *= -1.0;
      m_.col(i) *= -1.0;
    }
  }
}

void DensityMatrix::pauli_channel(int q, double px, double py, double pz) {
  const double w = 1.0 - px - py - pz;
  const long long dim = m_.rows();
  const long long mask = 1LL << q;
  for (long long c0 = 0; c0 < dim; ++c0) {
    if (c0 & mask) continue;
    const long long c1 = c0 | mask;
    for (long long r0 = 0; r0 < dim; ++r0) {
      if (r0 & mask) continue;
      const long long r1 = r0 | mask;
      const auto a = m_(r0, c0);
      const auto b = m_(r0, c1);
      const auto c = m_(r1, c0);
      const auto d = m_(r1, c1);
      m_(r0, c0) = (w + pz) * a + (px + py) * d;
      m_(r1, c1) = (w + pz) * d + (px + py) * a;
      m_(r0, c1) = (w - pz) * b + (px - py) * c;
      m_(r1, c0) = (w - pz) * c + (px - py) * b;
    }
  }
}

void DensityMatrix::damp_phase(int q, double factor) {
  const long long dim = m_.rows();
  const long long mask = 1LL << q;
  for (long long c = 0; c < dim; ++c) {
    for (long long r = 0; r < dim; ++r) {
      if (((r ^ c) & mask) != 0) m_(r, c) *= factor;
    }
  }
}

DensityMatrix DensityMatrix::partial_trace_qubit(int q) const {
  DensityMatrix out(n_ - 1);
  const long long rdim = 1LL << (n_ - 1);
  const long long low = (1LL << q) - 1;
  auto expand = [&](long long i) {
    return (i & low) | ((i & ~low) << 1);
  };
  out.m_.setZero();
  for (long long r = 0; r < rdim; ++r) {
    const long long fr = expand(r);
    for (long long c = 0; c < rdim; ++c) {
      const long long fc = expand(c);
      out.m_(r, c) = m_(fr, fc) + m_(fr | (1LL << q), fc | (1LL << q));
    }
  }
  return out;
}

double DensityMatrix::trace_real() const { return m_.trace().real(); }

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

void depolarizing_pi(DensityMatrix& rho, int q, double lambda) {
  if (lambda < 0.0 || lambda > 2.0 / 3.0)
    throw std::invalid_argument("depolarizing_pi: lambda in [0, 2/3]");
  // perfect pi pulse followed by the residual symmetric Pauli error
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  rho.apply_1q(x, q);
  rho.pauli_channel(q, lambda / 2.0, lambda / 2.0, lambda / 2.0);
}

void dephase(DensityMatrix& rho, int q, double duration, double t_coh) {
  if (duration < 0.0) throw std::invalid_argument("dephase: duration >= 0");
  if (!(t_coh > 0.0)) throw std::invalid_argument("dephase: t_coh > 0");
  if (duration == 0.0 || std::isinf(t_coh)) return;
  rho.damp_phase(q, std::exp(-duration / t_coh));
}

namespace {

Eigen::Matrix2cd rot_y_minus() {
  Eigen::Matrix2cd u;
  const double s = 1.0 / std::sqrt(2.0);
  u << s, s, -s, s;
  return u;
}

Eigen::Matrix2cd lc_a_matrix() {
  using namespace std::complex_literals;
  Eigen::Matrix2cd u;
  const double s = 1.0 / std::sqrt(2.0);
  u << 1.0i * s, s, -s, -1.0i * s;
  return u;
}

Eigen::Matrix2cd lc_b_matrix() {
  using namespace std::complex_literals;
  Eigen::Matrix2cd u;
  const double s = 1.0 / std::sqrt(2.0);
  u << 0.0, s * (1.0 + 1.0i), s * (-1.0 + 1.0i), 0.0;
  return u;
}

double combined_error_prob(const PulseCounts& counts, const NoiseParams& p) {
  double keep = 1.0;
  keep *= std::pow(1.0 - 2.0 * p.lambda1, counts.omega1);
  keep *= std::pow(1.0 - 2.0 * p.lambda2, counts.omega2);
  keep *= std::pow(1.0 - 2.0 * p.lambda3, counts.omega3);
  return 1.0 - keep;
}

}  // namespace

DensityMatrix run_noisy(const GateSequence& seq, const TreeShape& shape,
                        const NoiseParams& params, const PulseMap& pulses) {
  params.validate();
  seq.validate();
  const int n = seq.num_photons + 1;
  if (n > DensityMatrix::kMaxQubits)
    throw std::invalid_argument("run_noisy: register exceeds the dense limit");
  if (shape.total_photons() != seq.num_photons)
    throw std::invalid_argument("run_noisy: shape does not match sequence");

  // photon index -> tree level (photons are numbered bottom level first)
  const auto nl = shape.level_counts();
  const int d = shape.depth();
  std::vector<int> level_of(seq.num_photons + 1, 0);
  {
    int p = 1;
    for (int l = d; l >= 0; --l)
      for (long long k = 0; k < nl[l]; ++k) level_of[p++] = l;
  }
  const TimingModel tm = timing(shape, params.t_ph);
  auto coherence_window = [&](int level) {
    if (level == d) return params.t_ph;
    const double dt_next = tm.delta_t[level + 1];
    return (shape.branches[level] - 1) * dt_next + 2.0 * params.t_ph;
  };

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(1LL << n);
  psi0[0] = psi0[1] = 1.0 / std::sqrt(2.0);  // emitter |+>, photons |0>
  DensityMatrix rho = DensityMatrix::pure(psi0);

  auto insert_pulse_errors = [&](const PulseCounts& counts) {
    const double p = combined_error_prob(counts, params);
    if (p > 0.0) rho.pauli_channel(0, p / 4.0, p / 4.0, p / 4.0);
  };

  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  for (const auto& op : seq.ops) {
    switch (op.kind) {
      case OpKind::E:
        dephase(rho, 0, coherence_window(level_of[op.photon]), params.t_coh);
        rho.apply_cnot(0, op.photon);
        rho.apply_cnot(op.photon, 0);
        rho.apply_1q(x, 0);
        insert_pulse_errors(pulses.e_gate);
        break;
      case OpKind::Cz:
        rho.apply_cz(0, op.photon);
        insert_pulse_errors(pulses.cz);
        break;
      case OpKind::RotY:
        rho.apply_1q(rot_y_minus(), 0);
        insert_pulse_errors(pulses.rot_y);
        break;
      case OpKind::LcA:
        rho.apply_1q(lc_a_matrix(), 0);
        break;
      case OpKind::LcB:
        rho.apply_1q(lc_b_matrix(), op.photon);
        break;
      case OpKind::MeasZ:
      case OpKind::MeasX:
        throw std::invalid_argument("run_noisy: measurements are not supported");
    }
  }
  return rho;
}

double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& target) {
  if (target.size() != rho.matrix().rows())
    throw std::invalid_argument("fidelity: dimension mismatch");
  return (target.adjoint() * rho.matrix() * target)(0, 0).real();
}

double fidelity(const DensityMatrix& rho, const StabilizerState& target) {
  if (target.num_qubits() != rho.num_qubits())
    throw std::invalid_argument("fidelity: dimension mismatch");
  return fidelity(rho, dense_vector(target));
}

double tree_fidelity(const TreeShape& shape, const NoiseParams& params,
                     const PulseMap& pulses) {
  const auto seq = tree_sequence(shape);
  const DensityMatrix rho = run_noisy(seq, shape, params, pulses);
  const DensityMatrix photons = rho.partial_trace_qubit(0);
  return fidelity(photons, graph_state_vector(ideal_tree_graph(shape)));
}

}  // namespace treecluster
