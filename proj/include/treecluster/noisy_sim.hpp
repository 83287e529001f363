#pragma once

#include <Eigen/Dense>
#include <limits>

#include "treecluster/protocol.hpp"
#include "treecluster/stabilizer.hpp"
#include "treecluster/tree_shape.hpp"

namespace treecluster {

struct NoiseParams {
  double lambda1 = 0.0;  // pi-pulse infidelity per pulse type
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double t_coh = std::numeric_limits<double>::infinity();
  double t_ph = 1.0;
  void validate() const;
};

struct PulseCounts {
  int omega1 = 0, omega2 = 0, omega3 = 0;
};

/// Pi-pulse decomposition of each abstract gate. Defaults follow the pulse
/// sequences of the protocol: an E gate uses four Omega1, two Omega2 and two
/// Omega3 pi pulses; a CZ uses two Omega2 pulse events (the 3pi rotation is
/// one event); the pi/2 spin rotation is not a pi pulse and defaults to
/// none.
struct PulseMap {
  PulseCounts e_gate{4, 2, 2};
  PulseCounts cz{0, 2, 0};
  PulseCounts rot_y{0, 0, 0};
};

/// Trace-one Hermitian matrix on up to 12 qubits (qubit q = bit q).
class DensityMatrix {
 public:
  static constexpr int kMaxQubits = 12;

  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  explicit DensityMatrix(int n);  // |0...0><0...0|

  int num_qubits() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  void apply_1q(const Eigen::Matrix2cd& u, int q);
  void apply_cnot(int control, int target);
  void apply_cz(int a, int b);
  /// rho -> (1-px-py-pz) rho + px X rho X + py Y rho Y + pz Z rho Z on q.
  void pauli_channel(int q, double px, double py, double pz);
  /// Multiplies the q-offdiagonal blocks by `factor` (phase damping).
  void damp_phase(int q, double factor);

  DensityMatrix partial_trace_qubit(int q) const;

  double trace_real() const;
  double hermiticity_error() const;

 private:
  int n_;
  Eigen::MatrixXcd m_;
};

/// Imperfect pi pulse: (1 - 3l/2) X rho X + (l/2)(rho + Y rho Y + Z rho Z).
void depolarizing_pi(DensityMatrix& rho, int q, double lambda);

/// Emitter phase damping with off-diagonal factor exp(-duration/t_coh).
void dephase(DensityMatrix& rho, int q, double duration, double t_coh);

/// Dense execution of a tree-generation sequence with depolarizing pulse
/// errors and emitter dephasing. Each abstract gate is applied ideally and
/// followed by the combined residual error channel of its pi pulses; the
/// emitter dephases, right before each E gate, for the interval it must
/// have stayed coherent (the per-level accounting whose total is t_min).
/// Returns the full emitter+photon state; trace out qubit 0 for photons.
DensityMatrix run_noisy(const GateSequence& seq, const TreeShape& shape,
                        const NoiseParams& params, const PulseMap& pulses = {});

/// <psi_target| rho |psi_target> with the target given as a stabilizer state.
double fidelity(const DensityMatrix& rho, const StabilizerState& target);
double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& target);

/// Photon-state fidelity of the noisy run against the ideal tree state.
double tree_fidelity(const TreeShape& shape, const NoiseParams& params,
                     const PulseMap& pulses = {});

}  // namespace treecluster
