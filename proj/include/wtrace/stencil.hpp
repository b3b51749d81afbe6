#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wtrace {

/// Finite-difference / interpolation weights (Fornberg's recursion): returns
/// w with sum_j w[j] f(x[j]) approximating f^{(order)}(z) for the polynomial
/// interpolant through the nodes x.
std::vector<double> fd_weights(double z, std::span<const double> x, int order);

/// First index of a window of `width` consecutive nodes (out of `count`)
/// centred on `i`, shifted inward at the ends.
std::size_t stencil_start(std::size_t i, std::size_t count, std::size_t width);

/// Index of the node interval containing y in an ascending node list
/// (clamped to [0, count - 2]).
std::size_t locate(std::span<const double> nodes, double y);

}  // namespace wtrace
