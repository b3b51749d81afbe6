#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wtrace {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input rejected before any numerics ran (bad parameters, malformed config).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public Error {
public:
    using Error::Error;
};

#define WTRACE_DECLARE_ERROR(Name, Base)                                      \
    class Name : public Base {                                                \
    public:                                                                   \
        using Base::Base;                                                     \
    }

WTRACE_DECLARE_ERROR(OutOfRangeTheta, ValidationError);
WTRACE_DECLARE_ERROR(NonIntegrableWeight, ValidationError);
WTRACE_DECLARE_ERROR(BadInterval, ValidationError);
WTRACE_DECLARE_ERROR(MissingDerivatives, ValidationError);
WTRACE_DECLARE_ERROR(MissingRepresentation, ValidationError);
WTRACE_DECLARE_ERROR(NonzeroBoundaryValue, ValidationError);
WTRACE_DECLARE_ERROR(DimensionMismatch, ValidationError);
WTRACE_DECLARE_ERROR(UnsupportedOrder, ValidationError);
WTRACE_DECLARE_ERROR(NoBoundaryAccess, ValidationError);
WTRACE_DECLARE_ERROR(CoefficientBoundViolated, ValidationError);
WTRACE_DECLARE_ERROR(DegenerateDenominator, NumericalError);
WTRACE_DECLARE_ERROR(SingularSystem, NumericalError);

#undef WTRACE_DECLARE_ERROR

// ---------------------------------------------------------------------------
// Weight parameters
// ---------------------------------------------------------------------------

/// Exponent p, weight power theta and dimension n of a weighted space,
/// together with the boundary smoothness s = (p - theta + n - 1) / p.
///
/// Only admissible triples can be constructed: 1 < p, n in {1, 2} and
/// n - 1 < theta < n - 1 + p, which is exactly the window in which 0 < s < 1.
class WeightParams {
public:
    static WeightParams make(double p, double theta, int n);

    double p() const { return p_; }
    double theta() const { return theta_; }
    int n() const { return n_; }
    double s() const { return s_; }

    /// Power of rho in the measure rho^{theta - n} dx.
    double measure_power() const { return theta_ - n_; }

    /// The same (p, n) with theta shifted by `delta`; bypasses the window
    /// check because shifted weights (theta + p, theta - p) are legitimate
    /// measures even when they are not trace-admissible.
    WeightParams shifted(double delta) const;

    /// s * p, the exponent that decides whether W and W_0 coincide.
    double sp() const { return s_ * p_; }

private:
    WeightParams(double p, double theta, int n, double s)
        : p_(p), theta_(theta), n_(n), s_(s) {}

    double p_;
    double theta_;
    int n_;
    double s_;
};

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

enum class DomainKind { HalfSpace, UnitInterval };

/// Spatial domain plus the truncation box used for half-space computations.
struct Domain {
    DomainKind kind = DomainKind::HalfSpace;
    int n = 1;
    double x1_max = 4.0;
    double xp_max = 4.0;
    double t_min = -4.0;
    double t_max = 4.0;

    static Domain half_space(int n);
    static Domain unit_interval();

    /// Distance to the boundary. `x` holds (x1) or (x1, x') depending on n.
    double rho(std::span<const double> x) const;
};

// ---------------------------------------------------------------------------
// Axes and grids
// ---------------------------------------------------------------------------

/// Closed uniform axis [a, b] with N+1 nodes and trapezoid weights.
class UniformAxis {
public:
    UniformAxis() = default;
    UniformAxis(double a, double b, int cells);

    double a() const { return a_; }
    double b() const { return b_; }
    int cells() const { return cells_; }
    double step() const { return (b_ - a_) / cells_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    double node(std::size_t i) const { return nodes_[i]; }

    /// Every other node; requires an even cell count.
    UniformAxis coarsened() const;

private:
    double a_ = 0.0;
    double b_ = 1.0;
    int cells_ = 1;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

enum class AxisKind { HalfLine, Interval };

/// Boundary-graded axis in the normal direction.
///
/// HalfLine: cell edges e_j = x_max (j/M)^q, j = 0..M; the quadrature nodes
/// are e_1..e_M (the boundary edge e_0 = 0 is never a quadrature node).
/// Interval (0,1): edges graded toward both ends, e_j = (j/M)^q / 2 mirrored
/// about 1/2, so 2M cells with an edge at 1/2; quadrature nodes are the
/// interior edges.
///
/// With `include_boundary_node` the evaluation node list additionally holds
/// the boundary point(s); those carry zero quadrature weight.
class GradedGrid {
public:
    static GradedGrid half_line(double x_max, int cells, double q = 3.0,
                                bool include_boundary_node = false);
    static GradedGrid interval(int cells_per_half, double q = 1.0,
                               bool include_boundary_nodes = true);

    AxisKind kind() const { return kind_; }
    double q() const { return q_; }
    double x_max() const { return kind_ == AxisKind::HalfLine ? x_max_ : 1.0; }
    bool include_boundary_node() const { return include_boundary_; }

    /// Evaluation nodes (ascending), boundary nodes included when requested.
    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    double node(std::size_t i) const { return nodes_[i]; }

    /// Cell edges (ascending, including the boundary point(s)).
    const std::vector<double>& edges() const { return edges_; }

    /// Plain (unweighted) quadrature weights on nodes(); they sum to the
    /// length of the truncated axis.
    const std::vector<double>& weights() const { return weights_; }

    /// Product-integration weights W_j with sum_j W_j f(x_j) approximating
    /// the integral of f(x) rho(x)^power dx; f is interpolated piecewise
    /// linearly between quadrature nodes and held constant on the boundary
    /// cell(s). Boundary evaluation nodes get weight 0.
    std::vector<double> weighted_weights(double power) const;

    double rho(double x) const;

    /// True when node i is an added boundary node.
    bool is_boundary_node(std::size_t i) const;

    /// Indices of the first interior nodes next to the x1 = 0 boundary.
    std::vector<std::size_t> nearest_interior(std::size_t count) const;

    /// Short descriptor used in report hashes.
    std::string describe() const;

    /// Grid built on every other edge (even cell count required, per half
    /// on the interval), with the fine-node index of each coarse node.
    std::pair<GradedGrid, std::vector<std::size_t>> coarsened() const;

    /// True when coarsened() is available.
    bool can_coarsen() const;

private:
    AxisKind kind_ = AxisKind::HalfLine;
    double x_max_ = 4.0;
    double q_ = 3.0;
    bool include_boundary_ = false;
    std::vector<double> edges_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// A point of space-time; `xp` is ignored when n = 1.
struct Point {
    double t = 0.0;
    double x1 = 0.0;
    double xp = 0.0;
};

/// Tensor grid time x normal x tangential. A missing time axis means the
/// function is static and the time integral is dropped from norms.
class SpaceTimeGrid {
public:
    SpaceTimeGrid(std::optional<UniformAxis> time, GradedGrid normal,
                  std::optional<UniformAxis> tangential, int n);

    int n() const { return n_; }
    bool is_static() const { return !time_.has_value(); }
    const std::optional<UniformAxis>& time() const { return time_; }
    const GradedGrid& normal() const { return normal_; }
    const std::optional<UniformAxis>& tangential() const { return tangential_; }

    std::size_t nt() const { return time_ ? time_->size() : 1; }
    std::size_t nx() const { return normal_.size(); }
    std::size_t np() const { return tangential_ ? tangential_->size() : 1; }
    std::size_t size() const { return nt() * nx() * np(); }

    std::size_t index(std::size_t it, std::size_t ix, std::size_t ip) const {
        return (it * nx() + ix) * np() + ip;
    }
    Point point(std::size_t it, std::size_t ix, std::size_t ip) const;

    /// Weights for the integral of f * rho^power over the grid; the time and
    /// tangential directions use trapezoid weights.
    std::vector<double> weights(double power) const;

    std::string describe() const;

    /// Grid on every other node of each axis, with the fine index of every
    /// coarse point; nullopt when some axis has an odd cell count.
    std::optional<std::pair<SpaceTimeGrid, std::vector<std::size_t>>> coarsened() const;

private:
    std::optional<UniformAxis> time_;
    GradedGrid normal_;
    std::optional<UniformAxis> tangential_;
    int n_;
};

/// Stable FNV-1a hash of a descriptor string, rendered as hex.
std::string descriptor_hash(const std::string& descriptor);

}  // namespace wtrace
