#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "treecluster/bitvec.hpp"

namespace treecluster {

enum class Gate {
  H, S, X, Y, Z,
  RotYPlus,   // e^{-i pi/4 Y}
  RotYMinus,  // e^{+i pi/4 Y}, the (-pi/2) spin rotation about y
  LcA,        // e^{i pi/2 (Y+Z)/sqrt2}, emitter side of local complementation
  LcB,        // e^{i pi/2 (X+Y)/sqrt2}, photon side of local complementation
  Cnot, Cz,
};

bool is_two_qubit(Gate g);
const char* gate_name(Gate g);

struct CliffordOp {
  Gate kind;
  int a = 0;   // target (control for Cnot)
  int b = -1;  // second target for two-qubit kinds
};

enum class Basis { X, Y, Z };

/// Conjugation action of a single-qubit Clifford on the Pauli group,
/// tabulated as images of X and Z (each a Pauli with sign).
/// Derived once from the dense 2x2 matrices; see test_stabilizer.
struct PauliAction {
  bool xx, xz;  // image of X: (x bit, z bit)
  bool sx;      // sign flip of the X image
  bool zx, zz;  // image of Z
  bool sz;
  bool sy;      // sign flip of the Y image (fixed by the other two)
};
const PauliAction& pauli_action(Gate g);

/// n-qubit stabilizer state in tableau form (destabilizer rows 0..n-1,
/// stabilizer rows n..2n-1, one scratch row). Columns are bit-packed over
/// rows so gate updates are word-parallel.
class StabilizerState {
public:
  explicit StabilizerState(int n);          // |0...0>
  static StabilizerState plus_state(int n); // |+...+>

  int num_qubits() const { return n_; }

  void apply(const CliffordOp& op);
  void apply(Gate g, int a, int b = -1) { apply(CliffordOp{g, a, b}); }

  /// Measure a Pauli on one qubit. Returns +1/-1; the state collapses.
  /// Random outcomes are drawn from the supplied generator.
  int measure(Basis basis, int qubit, std::mt19937_64& rng);

  /// As measure(), but a non-deterministic outcome is forced to the given
  /// value (+1/-1). Deterministic outcomes ignore `forced`.
  int measure_forced(Basis basis, int qubit, int forced);

  /// Outcome if the measurement is determined by the state, else nullopt.
  std::optional<int> deterministic_outcome(Basis basis, int qubit) const;

  /// Signed Pauli string; x/z over qubits, neg = leading minus sign.
  struct Row {
    BitVec x, z;
    bool neg = false;
  };
  std::vector<Row> stabilizer_rows() const;

  /// Internal consistency: stabilizer rows commute pairwise and have full
  /// rank; destabilizer i anticommutes exactly with stabilizer i.
  bool check_tableau() const;

private:
  int n_;
  std::vector<BitVec> xcol_, zcol_;  // per qubit, 2n+1 row bits
  BitVec sign_;                      // row sign bits
  std::size_t rows_() const { return 2 * static_cast<std::size_t>(n_) + 1; }
  void rowsum_(std::size_t h, std::size_t i);
  void row_clear_(std::size_t r);
  void row_copy_(std::size_t dst, std::size_t src);
  int measure_z_(int qubit, int forced, std::mt19937_64* rng);
  void basis_change_in_(Basis b, int q);
  void basis_change_out_(Basis b, int q);
};

/// Canonical generating set of the stabilizer group: reduced row echelon
/// form over (x columns, then z columns) with sign tracking. Two states are
/// equal iff their canonical forms coincide, signs included.
struct CanonicalForm {
  std::vector<StabilizerState::Row> rows;
  friend bool operator==(const CanonicalForm&, const CanonicalForm&);
};
CanonicalForm canonical_form(const StabilizerState& s);
bool states_equal(const StabilizerState& a, const StabilizerState& b);

/// Simple undirected graph; denotes the graph state prod_{(i,j)} CZ_ij |+>^n.
struct GraphSpec {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // each (a,b) with a<b, sorted

  void add_edge(int a, int b);
  bool has_edge(int a, int b) const;
  std::vector<int> neighbors(int v) const;
  void normalize();  // sort pairs and edge list, drop duplicates

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

GraphSpec local_complement(const GraphSpec& g, int v);
StabilizerState graph_to_state(const GraphSpec& g);

/// JSON object {"n": n, "edges": [[i,j],...]} with ascending edge pairs.
std::string to_json(const GraphSpec& g);
GraphSpec graph_from_json(const std::string& text);

/// If qubit q is in a single-qubit Pauli eigenstate (its group contains
/// +/-P_q), return that basis and sign.
std::optional<std::pair<Basis, int>> product_pauli(const StabilizerState& s, int q);

/// Restriction of the state to `keep`, provided every other qubit factors
/// out as a product Pauli eigenstate and the remainder is a graph state up
/// to signs. signs[i] is the sign of the generator X_i prod Z_N(i).
struct GraphWithSigns {
  GraphSpec graph;
  std::vector<int> signs;
};
std::optional<GraphWithSigns> extract_graph(const StabilizerState& s,
                                            const std::vector<int>& keep);

}  // namespace treecluster
