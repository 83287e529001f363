#include "treecluster/protocol.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace treecluster {

int GateSequence::count(OpKind k) const {
  int c = 0;
  for (const auto& op : ops) c += op.kind == k;
  return c;
}

void GateSequence::validate() const {
  std::vector<int> emitted(num_photons + 1, 0);
  for (const auto& op : ops) {
    switch (op.kind) {
      case OpKind::E:
        if (op.photon < 1 || op.photon > num_photons)
          throw std::invalid_argument("sequence: photon index out of range");
        if (emitted[op.photon]++)
          throw std::invalid_argument("sequence: photon already used");
        break;
      case OpKind::Cz:
      case OpKind::LcB:
      case OpKind::MeasX:
        if (op.photon < 1 || op.photon > num_photons)
          throw std::invalid_argument("sequence: photon index out of range");
        if (!emitted[op.photon])
          throw std::invalid_argument("sequence: photon op before its E");
        break;
      default:
        break;
    }
  }
  for (int p = 1; p <= num_photons; ++p) {
    if (!emitted[p])
      throw std::invalid_argument("sequence: photon never emitted");
  }
}

namespace {
const char* op_name(OpKind k) {
  switch (k) {
    case OpKind::E: return "E";
    case OpKind::Cz: return "CZ";
    case OpKind::RotY: return "RotY";
    case OpKind::LcA: return "LC_A";
    case OpKind::LcB: return "LC_B";
    case OpKind::MeasZ: return "MeasZ";
    case OpKind::MeasX: return "MeasX";
  }
  return "?";
}

bool op_has_photon(OpKind k) {
  return k == OpKind::E || k == OpKind::Cz || k == OpKind::LcB ||
         k == OpKind::MeasX;
}

OpKind op_from_name(const std::string& s) {
  for (OpKind k : {OpKind::E, OpKind::Cz, OpKind::RotY, OpKind::LcA,
                   OpKind::LcB, OpKind::MeasZ, OpKind::MeasX}) {
    if (s == op_name(k)) return k;
  }
  throw std::invalid_argument("unknown op name: " + s);
}
}  // namespace

std::string GateSequence::to_json_lines() const {
  std::string out;
  for (const auto& op : ops) {
    nlohmann::json j;
    j["op"] = op_name(op.kind);
    if (op_has_photon(op.kind)) j["photon"] = op.photon;
    out += j.dump();
    out += '\n';
  }
  return out;
}

GateSequence GateSequence::from_json_lines(const std::string& text) {
  GateSequence seq;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    ProtocolOp op;
    op.kind = op_from_name(j.at("op").get<std::string>());
    if (op_has_photon(op.kind)) op.photon = j.at("photon").get<int>();
    seq.ops.push_back(op);
    seq.num_photons = std::max(seq.num_photons, op.photon);
  }
  return seq;
}

void e_gate(StabilizerState& s, int emitter, int photon) {
  s.apply(Gate::Cnot, emitter, photon);
  s.apply(Gate::Cnot, photon, emitter);
  s.apply(Gate::X, emitter);
}

GateSequence tree_sequence(const TreeShape& shape) {
  TreeShape checked(shape.branches);  // validates
  const auto nl = checked.level_counts();
  const int d = checked.depth();
  GateSequence seq;
  seq.num_photons = static_cast<int>(checked.total_photons());
  int next = 1;
  for (long long k = 0; k < nl[d]; ++k) {
    seq.ops.push_back({OpKind::E, next++});
    seq.ops.push_back({OpKind::RotY});
  }
  int child_start = 1;
  for (int l = d - 1; l >= 0; --l) {
    const int b = checked.branches[l];
    for (long long k = 0; k < nl[l]; ++k) {
      for (int c = 0; c < b; ++c)
        seq.ops.push_back({OpKind::Cz, static_cast<int>(child_start + k * b + c)});
      seq.ops.push_back({OpKind::E, next++});
      seq.ops.push_back({OpKind::RotY});
    }
    child_start += static_cast<int>(nl[l + 1]);
  }
  return seq;
}

GraphSpec ideal_tree_graph(const TreeShape& shape) {
  TreeShape checked(shape.branches);
  const auto nl = checked.level_counts();
  const int d = checked.depth();
  GraphSpec g;
  g.n = static_cast<int>(checked.total_photons());
  int child_start = 1;
  int parent = static_cast<int>(nl[d]) + 1;
  for (int l = d - 1; l >= 0; --l) {
    const int b = checked.branches[l];
    for (long long k = 0; k < nl[l]; ++k) {
      for (int c = 0; c < b; ++c)
        g.edges.emplace_back(parent - 1, static_cast<int>(child_start + k * b + c) - 1);
      ++parent;
    }
    child_start += static_cast<int>(nl[l + 1]);
  }
  g.normalize();
  return g;
}

namespace {

struct CompiledTree {
  GateSequence seq;
  std::vector<int> node_to_photon;  // 0 for the emitter root
};

CompiledTree compile_rooted(const RootedTree& tree) {
  const int n = tree.num_nodes();
  // level order: level 0 = {root 0}; level l = children of level l-1 in order
  std::vector<std::vector<int>> levels{{0}};
  while (true) {
    std::vector<int> next;
    for (int v : levels.back())
      next.insert(next.end(), tree.children[v].begin(), tree.children[v].end());
    if (next.empty()) break;
    levels.push_back(std::move(next));
  }
  CompiledTree out;
  out.node_to_photon.assign(n, 0);
  out.seq.num_photons = n - 1;
  int next_photon = 1;
  for (std::size_t l = levels.size() - 1; l >= 1; --l) {
    for (int v : levels[l]) {
      for (int c : tree.children[v])
        out.seq.ops.push_back({OpKind::Cz, out.node_to_photon[c]});
      out.node_to_photon[v] = next_photon;
      out.seq.ops.push_back({OpKind::E, next_photon++});
      out.seq.ops.push_back({OpKind::RotY});
    }
  }
  for (int c : tree.children[0])
    out.seq.ops.push_back({OpKind::Cz, out.node_to_photon[c]});
  return out;
}

}  // namespace

GateSequence emitter_rooted_sequence(const RootedTree& tree,
                                     const std::vector<int>& photon_index) {
  auto compiled = compile_rooted(tree);
  if (!photon_index.empty() && photon_index != compiled.node_to_photon)
    throw std::invalid_argument("emitter_rooted_sequence: photon numbering mismatch");
  return compiled.seq;
}

GateSequence rgs_sequence(int num_cores) {
  if (num_cores < 2) throw std::invalid_argument("rgs_sequence: N must be >= 2");
  const int N = num_cores;
  GateSequence seq;
  seq.num_photons = 2 * N;
  // arm photons 1..N
  for (int j = 1; j <= N; ++j) {
    seq.ops.push_back({OpKind::E, j});
    seq.ops.push_back({OpKind::RotY});
  }
  // core photons N+1..2N, each re-scattering its arm
  for (int k = 1; k <= N; ++k) {
    seq.ops.push_back({OpKind::Cz, k});
    seq.ops.push_back({OpKind::E, N + k});
    seq.ops.push_back({OpKind::LcB, N + k});
    seq.ops.push_back({OpKind::RotY});
  }
  // cores return from the mirror and bond to the emitter root
  for (int k = 1; k <= N; ++k) seq.ops.push_back({OpKind::Cz, N + k});
  // local complementation on the emitter, then detach it
  seq.ops.push_back({OpKind::LcA});
  seq.ops.push_back({OpKind::MeasZ});
  return seq;
}

namespace {

RunResult execute(const GateSequence& seq, std::mt19937_64* rng,
                  const std::vector<int>* forced) {
  seq.validate();
  const int n = seq.num_photons + 1;
  StabilizerState s(n);
  s.apply(Gate::H, 0);  // emitter |+>, photons |0>
  std::vector<int> outcomes;
  std::size_t mi = 0;
  for (const auto& op : seq.ops) {
    switch (op.kind) {
      case OpKind::E: e_gate(s, 0, op.photon); break;
      case OpKind::Cz: s.apply(Gate::Cz, 0, op.photon); break;
      case OpKind::RotY: s.apply(Gate::RotYMinus, 0); break;
      case OpKind::LcA: s.apply(Gate::LcA, 0); break;
      case OpKind::LcB: s.apply(Gate::LcB, op.photon); break;
      case OpKind::MeasZ:
      case OpKind::MeasX: {
        const Basis b = op.kind == OpKind::MeasZ ? Basis::Z : Basis::X;
        const int q = op.kind == OpKind::MeasZ ? 0 : op.photon;
        int out;
        if (forced) {
          const int want = mi < forced->size() ? (*forced)[mi] : +1;
          out = s.measure_forced(b, q, want);
        } else {
          out = s.measure(b, q, *rng);
        }
        ++mi;
        outcomes.push_back(out);
        break;
      }
    }
  }
  return RunResult{std::move(s), std::move(outcomes)};
}

}  // namespace

RunResult run_ideal(const GateSequence& seq, std::mt19937_64& rng) {
  return execute(seq, &rng, nullptr);
}

RunResult run_forced(const GateSequence& seq, const std::vector<int>& forced) {
  return execute(seq, nullptr, &forced);
}

RunResult run_ideal(const GateSequence& seq) {
  std::mt19937_64 rng(0x7ee5eedULL);
  return execute(seq, &rng, nullptr);
}

bool verify_tree(const TreeShape& shape) {
  const auto seq = tree_sequence(shape);
  const auto res = run_ideal(seq);
  const auto pp = product_pauli(res.state, 0);
  if (!pp || pp->first != Basis::X || pp->second != +1) return false;
  const auto tree = ideal_tree_graph(shape);
  GraphSpec full;
  full.n = tree.n + 1;
  for (const auto& [a, b] : tree.edges) full.edges.emplace_back(a + 1, b + 1);
  full.normalize();
  return states_equal(res.state, graph_to_state(full));
}

EncodedRgsResult encoded_rgs_run(int num_cores, const TreeShape& core_shape,
                                 const RgsWiring& wiring,
                                 const std::vector<int>& forced) {
  if (num_cores < 2)
    throw std::invalid_argument("encoded_rgs_run: N must be >= 2");
  if (wiring.chain_len < 0 || wiring.chain_len % 2 != 0)
    throw std::invalid_argument("encoded_rgs_run: chain_len must be even");
  if (wiring.arms_per_core < 0)
    throw std::invalid_argument("encoded_rgs_run: arms_per_core");
  TreeShape core(core_shape.branches);

  RootedTree tree;
  tree.children.emplace_back();  // emitter root
  auto new_node = [&](int parent) {
    const int v = tree.num_nodes();
    tree.children.emplace_back();
    tree.children[parent].push_back(v);
    return v;
  };
  std::vector<int> chain_nodes;
  std::vector<int> root_nodes;
  const auto nl = core.level_counts();
  for (int k = 0; k < num_cores; ++k) {
    int attach = 0;
    for (int j = 0; j < wiring.chain_len; ++j) {
      attach = new_node(attach);
      chain_nodes.push_back(attach);
    }
    const int r = new_node(attach);
    root_nodes.push_back(r);
    // encoding tree below r, level by level
    std::vector<int> level{r};
    for (int l = 0; l < core.depth(); ++l) {
      std::vector<int> next;
      for (int v : level)
        for (long long c = 0; c < core.branches[l]; ++c) next.push_back(new_node(v));
      level = std::move(next);
    }
    (void)nl;
    for (int a = 0; a < wiring.arms_per_core; ++a) new_node(r);
  }

  auto compiled = compile_rooted(tree);
  GateSequence seq = std::move(compiled.seq);
  const auto& ph = compiled.node_to_photon;
  for (int u : chain_nodes) seq.ops.push_back({OpKind::MeasX, ph[u]});
  for (int r : root_nodes) seq.ops.push_back({OpKind::LcB, ph[r]});
  seq.ops.push_back({OpKind::LcA});
  seq.ops.push_back({OpKind::MeasZ});

  RunResult run = forced.empty() ? run_ideal(seq) : run_forced(seq, forced);

  std::vector<bool> measured(seq.num_photons + 1, false);
  measured[0] = true;
  for (int u : chain_nodes) measured[ph[u]] = true;
  std::vector<int> kept;
  for (int q = 1; q <= seq.num_photons; ++q)
    if (!measured[q]) kept.push_back(q);

  auto gs = extract_graph(run.state, kept);
  if (!gs)
    throw std::runtime_error("encoded_rgs_run: post-measurement state is not a graph state");

  EncodedRgsResult out{std::move(run.state), std::move(*gs), kept, {}, std::move(run.outcomes)};
  for (int r : root_nodes) {
    const auto it = std::lower_bound(kept.begin(), kept.end(), ph[r]);
    out.logical_roots.push_back(static_cast<int>(it - kept.begin()));
  }
  return out;
}

}  // namespace treecluster
