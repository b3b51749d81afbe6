#pragma once

#include <functional>
#include <vector>

#include "wtrace/core.hpp"

namespace wtrace {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule (n >= 1).
const GaussRule& gauss_legendre(int n);

/// Cached n-point Gauss-Hermite rule for the weight exp(-z^2).
const GaussRule& gauss_hermite(int n);

enum class CellRule { Midpoint, Gauss2 };

struct QuadSpec {
    CellRule rule = CellRule::Gauss2;
    /// Lower cutoff for diagonal / endpoint singular integrals.
    double tau_min = 1e-10;
    /// Ratio between consecutive log-graded cell edges, in (1, 2].
    double log_factor = 1.5;
    /// Gauss points per log-graded cell.
    int log_points = 6;

    void validate() const;
    /// The same spec with the log grid refined `level` times (factor -> sqrt).
    QuadSpec refined(int level) const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Nodes and weights of a fixed quadrature rule on some interval.
struct NodeRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    double apply(const std::function<double(double)>& f) const;
};

/// Composite Gauss rule on [a, b] with cells growing geometrically from a
/// (cell edges a * r^k, last cell clipped at b), Gauss points placed
/// uniformly in log(tau). Requires 0 < a < b.
NodeRule loggraded_rule(double a, double b, double factor, int points);

/// Log-graded from a until cells reach `max_width`, equal cells of at most
/// that width afterwards. Requires 0 < a < b.
NodeRule loggraded_capped_rule(double a, double b, double factor, int points, double max_width);

/// Composite Gauss rule with `cells` equal cells on [a, b].
NodeRule uniform_rule(double a, double b, int cells, int points);

/// Integral of f(x) rho(x)^weight_power dx over the grid's truncated axis,
/// with exact product integration of the weight against the per-cell
/// interpolant of f (midpoint: constant, gauss2: linear).
QuadResult integrate_weighted(const std::function<double(double)>& f, const GradedGrid& grid,
                              double weight_power, const QuadSpec& spec = {});

/// Integral of f over [a, b] on log-graded nodes clustered at a.
QuadResult integrate_loggraded(const std::function<double(double)>& f, double a, double b,
                               const QuadSpec& spec = {});

}  // namespace wtrace
