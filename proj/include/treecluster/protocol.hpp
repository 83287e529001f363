#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "treecluster/stabilizer.hpp"
#include "treecluster/tree_shape.hpp"

namespace treecluster {

/// Abstract protocol operations. The emitter is always qubit 0 when a
/// sequence is executed; photon k (1-based) is qubit k.
enum class OpKind { E, Cz, RotY, LcA, LcB, MeasZ, MeasX };

struct ProtocolOp {
  OpKind kind;
  int photon = 0;  // ignored for emitter-only ops (RotY, LcA, MeasZ)
  friend bool operator==(const ProtocolOp&, const ProtocolOp&) = default;
};

struct GateSequence {
  std::vector<ProtocolOp> ops;
  int num_photons = 0;

  int count(OpKind k) const;
  /// Each photon gets exactly one E; any CZ/LcB/MeasX on a photon follows
  /// its E. Throws std::invalid_argument on violation.
  void validate() const;

  /// One JSON object per line, e.g. {"op":"E","photon":9}.
  std::string to_json_lines() const;
  static GateSequence from_json_lines(const std::string& text);
};

/// Emission gate: copies the emitter qubit state onto a fresh photon and
/// resets the emitter to |1>. Circuit: CNOT(emitter->photon),
/// CNOT(photon->emitter), X(emitter). The photon qubit must still be |0>.
void e_gate(StabilizerState& s, int emitter, int photon);

/// Generation sequence for the tree state of the given shape. Photons are
/// numbered in emission order: the deepest level first, the root photon
/// (index = total_photons) last. Per photon: its children's CZs, then E,
/// then the emitter y-rotation.
GateSequence tree_sequence(const TreeShape& shape);

/// The target tree as a graph on nodes 0..N-1 (node k-1 = photon k).
GraphSpec ideal_tree_graph(const TreeShape& shape);

/// Repeater-graph-state sequence with N core photons. Arms are photons
/// 1..N, cores N+1..2N. After the arm and core emissions the cores
/// re-scatter off the emitter (one CZ each); the local complementation
/// (LC_B on every core, LC_A on the emitter) and the emitter Z measurement
/// then leave the cores completely connected, one arm each.
GateSequence rgs_sequence(int num_cores);

struct RunResult {
  StabilizerState state;
  std::vector<int> outcomes;  // one per measurement op, in order
};

RunResult run_ideal(const GateSequence& seq, std::mt19937_64& rng);
/// Forced-branch execution: the k-th measurement takes forced[k] (+1/-1)
/// unless the outcome is deterministic.
RunResult run_forced(const GateSequence& seq, const std::vector<int>& forced);

/// run_ideal with a default-seeded generator (seed 0xTREE... documented in
/// the CLI); sequences without random measurements are unaffected.
RunResult run_ideal(const GateSequence& seq);

/// Executes tree_sequence(shape) and checks the result against
/// graph_to_state(ideal_tree_graph(shape)) with the emitter left in |+>.
bool verify_tree(const TreeShape& shape);

/// Rooted tree with node 0 = the emitter; children[v] lists v's children.
/// Compiled bottom-up like tree_sequence but without a final root E, so the
/// emitter itself ends as the root node.
struct RootedTree {
  std::vector<std::vector<int>> children;
  int num_nodes() const { return static_cast<int>(children.size()); }
};
GateSequence emitter_rooted_sequence(const RootedTree& tree,
                                     const std::vector<int>& photon_index);

/// Wiring of the augmented tree behind the tree-encoded repeater graph
/// state: emitter -> chain of `chain_len` photons -> encoding-tree root,
/// which carries its encoding tree and `arms_per_core` arm photons. The
/// chain photons are X-measured pairwise to bond the emitter directly to
/// the encoding roots.
struct RgsWiring {
  int chain_len = 2;
  int arms_per_core = 1;
};

struct EncodedRgsResult {
  StabilizerState state;            // full register after all measurements
  GraphWithSigns graph;             // on the unmeasured photons
  std::vector<int> kept;            // qubit index per graph node
  std::vector<int> logical_roots;   // graph-node index of each encoding root
  std::vector<int> outcomes;
};

EncodedRgsResult encoded_rgs_run(int num_cores, const TreeShape& core_shape,
                                 const RgsWiring& wiring = {},
                                 const std::vector<int>& forced = {});

}  // namespace treecluster
