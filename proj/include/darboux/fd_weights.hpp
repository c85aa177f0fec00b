#pragma once

#include <span>
#include <vector>

namespace darboux {

// Finite-difference weights on arbitrarily spaced nodes (Fornberg's
// recursion). Returns w[k][i] such that f^(k)(z) ~ sum_i w[k][i] f(x[i])
// for every k = 0..max_order. Order 0 is interpolation, so the same code
// serves off-node evaluation and one-sided boundary stencils.
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int max_order);

}  // namespace darboux
