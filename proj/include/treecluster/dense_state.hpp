#pragma once

#include <Eigen/Dense>

#include "treecluster/stabilizer.hpp"

namespace treecluster {

/// Statevector of a stabilizer state (qubit q = bit q of the index).
/// Built by projecting a basis state onto the stabilizer group; intended
/// for small registers (n <= 14).
Eigen::VectorXcd dense_vector(const StabilizerState& s);

/// Statevector of a graph state: amplitude 2^{-n/2} (-1)^{#edges inside x}.
Eigen::VectorXcd graph_state_vector(const GraphSpec& g);

/// |<a|b>| with both vectors normalized.
double overlap_abs(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace treecluster
