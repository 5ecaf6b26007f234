#pragma once

#include <Eigen/Dense>
#include <string>

#include "schurshift/graph.hpp"

namespace schurshift {

enum class ShiftMethod { designed, adjacency, laplacian, least_squares };

/// Labels used by the CLI and CSV outputs: designed | adjacency | laplacian | ls.
std::string method_label(ShiftMethod method);
ShiftMethod method_from_label(const std::string& label);

/// Entrywise least-squares fit of P on the admissible support: admissible
/// entries copy P, all others (non-edges and the diagonal) are zero.
Eigen::MatrixXd ls_shift(const DirectedGraph& g, const Eigen::MatrixXd& p);

/// The adjacency or Laplacian matrix; throws on any other method label.
Eigen::MatrixXd baseline_shift(const DirectedGraph& g, ShiftMethod method);

}  // namespace schurshift
