#include "treecluster/stabilizer.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include <json.hpp>

namespace treecluster {

bool is_two_qubit(Gate g) { return g == Gate::Cnot || g == Gate::Cz; }

const char* gate_name(Gate g) {
  switch (g) {
    case Gate::H: return "H";
    case Gate::S: return "S";
    case Gate::X: return "X";
    case Gate::Y: return "Y";
    case Gate::Z: return "Z";
    case Gate::RotYPlus: return "RotY+";
    case Gate::RotYMinus: return "RotY-";
    case Gate::LcA: return "LC_A";
    case Gate::LcB: return "LC_B";
    case Gate::Cnot: return "CNOT";
    case Gate::Cz: return "CZ";
  }
  return "?";
}

// Images of X and Z (and the induced sign of Y) under conjugation, frozen
// from the dense 2x2 matrices (see the derivation test in test_stabilizer).
const PauliAction& pauli_action(Gate g) {
  static const PauliAction tab[] = {
      // xx xz sx   zx zz sz   sy
      {false, true, false, true, false, false, true},   // H:  X->Z  Z->X  Y->-Y
      {true, true, false, false, true, false, true},    // S:  X->Y  Z->Z  Y->-X
      {true, false, false, false, true, true, true},    // X:  X->X  Z->-Z Y->-Y
      {true, false, true, false, true, true, false},    // Y:  X->-X Z->-Z Y->Y
      {true, false, true, false, true, false, true},    // Z:  X->-X Z->Z  Y->-Y
      {false, true, true, true, false, false, false},   // RotY+: X->-Z Z->X Y->Y
      {false, true, false, true, false, true, false},   // RotY-: X->Z Z->-X Y->Y
      {true, false, true, true, true, false, false},    // LC_A: X->-X Z->Y Y->Z
      {true, true, false, false, true, true, false},    // LC_B: X->Y Z->-Z Y->X
  };
  return tab[static_cast<int>(g)];
}

StabilizerState::StabilizerState(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("StabilizerState: n must be >= 1");
  xcol_.assign(n, BitVec(rows_()));
  zcol_.assign(n, BitVec(rows_()));
  sign_ = BitVec(rows_());
  for (int q = 0; q < n; ++q) {
    xcol_[q].set(q, true);        // destabilizer q = X_q
    zcol_[q].set(n + q, true);    // stabilizer q = Z_q
  }
}

StabilizerState StabilizerState::plus_state(int n) {
  StabilizerState s(n);
  for (int q = 0; q < n; ++q) s.apply(Gate::H, q);
  return s;
}

void StabilizerState::apply(const CliffordOp& op) {
  const int a = op.a;
  if (a < 0 || a >= n_) throw std::out_of_range("apply: qubit out of range");
  if (is_two_qubit(op.kind)) {
    const int b = op.b;
    if (b < 0 || b >= n_ || b == a)
      throw std::invalid_argument("apply: bad second target");
    if (op.kind == Gate::Cz) {
      apply(Gate::H, b);
      apply(Gate::Cnot, a, b);
      apply(Gate::H, b);
      return;
    }
    // CNOT a->b
    xor_cnot_phase(sign_, xcol_[a], zcol_[b], xcol_[b], zcol_[a]);
    xcol_[b] ^= xcol_[a];
    zcol_[a] ^= zcol_[b];
    return;
  }
  if (op.b != -1) throw std::invalid_argument("apply: arity mismatch");
  const PauliAction& m = pauli_action(op.kind);
  BitVec& x = xcol_[a];
  BitVec& z = zcol_[a];
  if (m.sx) xor_andnot(sign_, x, z);
  if (m.sz) xor_andnot(sign_, z, x);
  if (m.sy) xor_and(sign_, x, z);
  BitVec nx(rows_()), nz(rows_());
  if (m.xx) nx ^= x;
  if (m.zx) nx ^= z;
  if (m.xz) nz ^= x;
  if (m.zz) nz ^= z;
  x = nx;
  z = nz;
}

namespace {
// Exponent of i picked up when multiplying single-qubit Paulis (x1,z1)*(x2,z2).
inline int g_phase(int x1, int z1, int x2, int z2) {
  if (!x1 && !z1) return 0;
  if (x1 && z1) return z2 - x2;
  if (x1 && !z1) return z2 * (2 * x2 - 1);
  return x2 * (1 - 2 * z2);
}
}  // namespace

void StabilizerState::rowsum_(std::size_t h, std::size_t i) {
  int phase = 2 * sign_.get(h) + 2 * sign_.get(i);
  for (int q = 0; q < n_; ++q) {
    phase += g_phase(xcol_[q].get(i), zcol_[q].get(i),
                     xcol_[q].get(h), zcol_[q].get(h));
  }
  phase &= 3;
  assert(phase == 0 || phase == 2);
  sign_.set(h, phase == 2);
  for (int q = 0; q < n_; ++q) {
    xcol_[q].set(h, xcol_[q].get(h) ^ xcol_[q].get(i));
    zcol_[q].set(h, zcol_[q].get(h) ^ zcol_[q].get(i));
  }
}

void StabilizerState::row_clear_(std::size_t r) {
  for (int q = 0; q < n_; ++q) {
    xcol_[q].set(r, false);
    zcol_[q].set(r, false);
  }
  sign_.set(r, false);
}

void StabilizerState::row_copy_(std::size_t dst, std::size_t src) {
  for (int q = 0; q < n_; ++q) {
    xcol_[q].set(dst, xcol_[q].get(src));
    zcol_[q].set(dst, zcol_[q].get(src));
  }
  sign_.set(dst, sign_.get(src));
}

void StabilizerState::basis_change_in_(Basis b, int q) {
  switch (b) {
    case Basis::Z: break;
    case Basis::X: apply(Gate::H, q); break;
    case Basis::Y:  // V = H * Sdg
      apply(Gate::S, q); apply(Gate::S, q); apply(Gate::S, q);
      apply(Gate::H, q);
      break;
  }
}

void StabilizerState::basis_change_out_(Basis b, int q) {
  switch (b) {
    case Basis::Z: break;
    case Basis::X: apply(Gate::H, q); break;
    case Basis::Y:
      apply(Gate::H, q);
      apply(Gate::S, q);
      break;
  }
}

int StabilizerState::measure_z_(int qubit, int forced, std::mt19937_64* rng) {
  const std::size_t n = static_cast<std::size_t>(n_);
  std::size_t p = rows_();
  for (std::size_t r = n; r < 2 * n; ++r) {
    if (xcol_[qubit].get(r)) { p = r; break; }
  }
  if (p < rows_()) {
    // outcome is random
    bool bit;
    if (rng) {
      bit = ((*rng)() >> 32) & 1;
    } else {
      bit = forced < 0;
    }
    for (std::size_t i = 0; i < 2 * n; ++i) {
      if (i != p && xcol_[qubit].get(i)) rowsum_(i, p);
    }
    row_copy_(p - n, p);
    row_clear_(p);
    zcol_[qubit].set(p, true);
    sign_.set(p, bit);
    return bit ? -1 : +1;
  }
  // deterministic
  const std::size_t scratch = 2 * n;
  row_clear_(scratch);
  for (std::size_t i = 0; i < n; ++i) {
    if (xcol_[qubit].get(i)) rowsum_(scratch, i + n);
  }
  return sign_.get(scratch) ? -1 : +1;
}

int StabilizerState::measure(Basis basis, int qubit, std::mt19937_64& rng) {
  if (qubit < 0 || qubit >= n_) throw std::out_of_range("measure: qubit");
  basis_change_in_(basis, qubit);
  int out = measure_z_(qubit, 0, &rng);
  basis_change_out_(basis, qubit);
  return out;
}

int StabilizerState::measure_forced(Basis basis, int qubit, int forced) {
  if (qubit < 0 || qubit >= n_) throw std::out_of_range("measure: qubit");
  if (forced != +1 && forced != -1)
    throw std::invalid_argument("measure_forced: outcome must be +1 or -1");
  basis_change_in_(basis, qubit);
  int out = measure_z_(qubit, forced, nullptr);
  basis_change_out_(basis, qubit);
  return out;
}

std::optional<int> StabilizerState::deterministic_outcome(Basis basis,
                                                          int qubit) const {
  StabilizerState tmp = *this;
  tmp.basis_change_in_(basis, qubit);
  const std::size_t n = static_cast<std::size_t>(tmp.n_);
  for (std::size_t r = n; r < 2 * n; ++r) {
    if (tmp.xcol_[qubit].get(r)) return std::nullopt;
  }
  return tmp.measure_z_(qubit, 0, nullptr);
}

std::vector<StabilizerState::Row> StabilizerState::stabilizer_rows() const {
  std::vector<Row> rows(n_);
  for (int i = 0; i < n_; ++i) {
    rows[i].x = BitVec(n_);
    rows[i].z = BitVec(n_);
    for (int q = 0; q < n_; ++q) {
      rows[i].x.set(q, xcol_[q].get(n_ + i));
      rows[i].z.set(q, zcol_[q].get(n_ + i));
    }
    rows[i].neg = sign_.get(n_ + i);
  }
  return rows;
}

namespace {

// a := a * b for commuting signed Pauli strings
void row_mult(StabilizerState::Row& a, const StabilizerState::Row& b) {
  int phase = 2 * a.neg + 2 * b.neg;
  for (std::size_t q = 0; q < a.x.size(); ++q) {
    phase += g_phase(b.x.get(q), b.z.get(q), a.x.get(q), a.z.get(q));
  }
  phase &= 3;
  assert(phase == 0 || phase == 2);
  a.neg = phase == 2;
  a.x ^= b.x;
  a.z ^= b.z;
}

bool row_bit(const StabilizerState::Row& r, std::size_t col, std::size_t n) {
  return col < n ? r.x.get(col) : r.z.get(col - n);
}

// In-place RREF over columns (x_0..x_{n-1}, z_0..z_{n-1}); returns rank.
std::size_t rref(std::vector<StabilizerState::Row>& rows, std::size_t n) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < 2 * n && rank < rows.size(); ++col) {
    std::size_t piv = rows.size();
    for (std::size_t r = rank; r < rows.size(); ++r) {
      if (row_bit(rows[r], col, n)) { piv = r; break; }
    }
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && row_bit(rows[r], col, n)) row_mult(rows[r], rows[rank]);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (!(a.rows[i].x == b.rows[i].x) || !(a.rows[i].z == b.rows[i].z) ||
        a.rows[i].neg != b.rows[i].neg)
      return false;
  }
  return true;
}

CanonicalForm canonical_form(const StabilizerState& s) {
  CanonicalForm cf{s.stabilizer_rows()};
  const std::size_t rank = rref(cf.rows, s.num_qubits());
  assert(rank == cf.rows.size());
  (void)rank;
  return cf;
}

bool states_equal(const StabilizerState& a, const StabilizerState& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("states_equal: qubit counts differ");
  return canonical_form(a) == canonical_form(b);
}

bool StabilizerState::check_tableau() const {
  auto sym = [&](std::size_t r1, std::size_t r2) {
    int acc = 0;
    for (int q = 0; q < n_; ++q) {
      acc ^= (xcol_[q].get(r1) & zcol_[q].get(r2)) ^
             (zcol_[q].get(r1) & xcol_[q].get(r2));
    }
    return acc;
  };
  const std::size_t n = static_cast<std::size_t>(n_);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    for (std::size_t j = i + 1; j < 2 * n; ++j) {
      const bool anti = sym(i, j);
      const bool expect = (j == i + n);  // destab i with stab i
      if (anti != expect) return false;
    }
  }
  auto rows = stabilizer_rows();
  return rref(rows, n) == n;
}

// ---------------------------------------------------------------------------
// GraphSpec

void GraphSpec::add_edge(int a, int b) {
  if (a == b) throw std::invalid_argument("GraphSpec: self-loop");
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw std::out_of_range("GraphSpec: node out of range");
  if (a > b) std::swap(a, b);
  edges.emplace_back(a, b);
  normalize();
}

void GraphSpec::normalize() {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first == e.second) throw std::invalid_argument("GraphSpec: self-loop");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool GraphSpec::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
}

std::vector<int> GraphSpec::neighbors(int v) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges) {
    if (a == v) out.push_back(b);
    else if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

GraphSpec local_complement(const GraphSpec& g, int v) {
  if (v < 0 || v >= g.n) throw std::out_of_range("local_complement: node");
  GraphSpec out = g;
  const auto nb = g.neighbors(v);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      const auto e = std::make_pair(nb[i], nb[j]);
      auto it = std::lower_bound(out.edges.begin(), out.edges.end(), e);
      if (it != out.edges.end() && *it == e) out.edges.erase(it);
      else out.edges.insert(it, e);
    }
  }
  return out;
}

StabilizerState graph_to_state(const GraphSpec& g) {
  StabilizerState s = StabilizerState::plus_state(g.n);
  for (const auto& [a, b] : g.edges) s.apply(Gate::Cz, a, b);
  return s;
}

std::string to_json(const GraphSpec& g) {
  nlohmann::json j;
  j["n"] = g.n;
  auto arr = nlohmann::json::array();
  for (const auto& [a, b] : g.edges) arr.push_back({a, b});
  j["edges"] = arr;
  return j.dump();
}

GraphSpec graph_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  GraphSpec g;
  g.n = j.at("n").get<int>();
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("graph_from_json: bad edge");
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  g.normalize();
  return g;
}

// ---------------------------------------------------------------------------
// Product-qubit factoring and graph extraction

std::optional<std::pair<Basis, int>> product_pauli(const StabilizerState& s,
                                                   int q) {
  const auto rows = s.stabilizer_rows();
  for (Basis b : {Basis::Z, Basis::X, Basis::Y}) {
    const bool bx = b != Basis::Z;
    const bool bz = b != Basis::X;
    bool commutes = true;
    for (const auto& r : rows) {
      if ((r.x.get(q) & bz) ^ (r.z.get(q) & bx)) { commutes = false; break; }
    }
    if (!commutes) continue;
    auto out = s.deterministic_outcome(b, q);
    assert(out.has_value());
    return std::make_pair(b, *out);
  }
  return std::nullopt;
}

std::optional<GraphWithSigns> extract_graph(const StabilizerState& s,
                                            const std::vector<int>& keep) {
  const int n = s.num_qubits();
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) throw std::out_of_range("extract_graph: qubit");
    kept[q] = true;
  }
  auto rows = s.stabilizer_rows();
  for (int q = 0; q < n; ++q) {
    if (kept[q]) continue;
    auto pp = product_pauli(s, q);
    if (!pp) return std::nullopt;
    const auto [b, sgn] = *pp;
    const bool bx = b != Basis::Z;
    const bool bz = b != Basis::X;
    for (auto& r : rows) {
      const bool rx = r.x.get(q), rz = r.z.get(q);
      if (!rx && !rz) continue;
      if (rx != bx || rz != bz) return std::nullopt;  // anticommuting remnant
      if (bx) r.x.flip(q);
      if (bz) r.z.flip(q);
      if (sgn < 0) r.neg = !r.neg;
    }
  }
  // reindex to the kept qubits
  const std::size_t m = keep.size();
  std::vector<StabilizerState::Row> red;
  red.reserve(rows.size());
  for (auto& r : rows) {
    StabilizerState::Row nr;
    nr.x = BitVec(m);
    nr.z = BitVec(m);
    nr.neg = r.neg;
    bool nonzero = false;
    for (std::size_t i = 0; i < m; ++i) {
      nr.x.set(i, r.x.get(keep[i]));
      nr.z.set(i, r.z.get(keep[i]));
      nonzero |= nr.x.get(i) | nr.z.get(i);
    }
    for (int q = 0; q < n; ++q) {
      if (!kept[q] && (r.x.get(q) || r.z.get(q))) return std::nullopt;
    }
    if (nonzero) red.push_back(std::move(nr));
    else if (nr.neg) return std::nullopt;  // -I in the group: inconsistent
  }
  const std::size_t rank = rref(red, m);
  red.resize(rank);
  if (rank != m) return std::nullopt;
  // graph form: x-block must be the identity, z-block symmetric, zero diagonal
  GraphWithSigns out;
  out.graph.n = static_cast<int>(m);
  out.signs.assign(m, +1);
  std::vector<const StabilizerState::Row*> byv(m, nullptr);
  for (const auto& r : red) {
    int v = -1;
    for (std::size_t q = 0; q < m; ++q) {
      if (r.x.get(q)) {
        if (v != -1) return std::nullopt;
        v = static_cast<int>(q);
      }
    }
    if (v == -1 || byv[v]) return std::nullopt;
    if (r.z.get(v)) return std::nullopt;
    byv[v] = &r;
  }
  for (std::size_t v = 0; v < m; ++v) {
    for (std::size_t w = v + 1; w < m; ++w) {
      const bool vw = byv[v]->z.get(w);
      const bool wv = byv[w]->z.get(v);
      if (vw != wv) return std::nullopt;
      if (vw) out.graph.edges.emplace_back(static_cast<int>(v), static_cast<int>(w));
    }
    out.signs[v] = byv[v]->neg ? -1 : +1;
  }
  out.graph.normalize();
  return out;
}

}  // namespace treecluster
