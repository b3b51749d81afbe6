#pragma once

#include <array>
#include <memory>
#include <string>

#include "wtrace/boundary_norms.hpp"
#include "wtrace/core.hpp"
#include "wtrace/grid_function.hpp"
#include "wtrace/norms.hpp"
#include "wtrace/quad.hpp"

namespace wtrace {

/// p(t, x1, x') = 1_{t>0} (4 pi t)^{-n/2} (x1 / t) exp(-|x|^2 / 4t).
/// For n = 1 the tangential argument is ignored.
double kernel_value(double t, double x1, double xp, int n);

/// D_{x1}^{a1} D_{x'}^{a2} p, a1 + a2 <= 3 (a2 = 0 when n = 1).
double kernel_derivative(double t, double x1, double xp, int n, int a1, int a2);

/// int_0^inf int p(t, x1, x') dx' dt by log-graded quadrature in t (cells
/// scaled to x1^2) and Gauss-Hermite in x'. Requires x1 > 0.
double kernel_mass(double x1, int n, const QuadSpec& quad = {});
double kernel_mass(double x1, const WeightParams& w, const QuadSpec& quad = {});

/// int int D^alpha p dx' dt with alpha = (a1, a2), |alpha| <= 3; |alpha| = 0
/// gives the mass.
double kernel_derivative_moment(int a1, int a2, double x1, int n, const QuadSpec& quad = {});

struct ExtendOptions {
    /// Multiply by the cutoff zeta(x1) (1 on x1 <= 1, 0 on x1 >= 2).
    bool with_cutoff = false;
    /// Growth factor of the log-graded cells in the convolution time variable.
    double log_factor = 1.3;
    /// Gauss points per cell.
    int points = 8;
    /// Cap on the convolution cell width; 0 picks it from the data's time scale.
    double max_cell = 0.0;
    int hermite_points = 40;
    /// Normal derivatives at x1 below this value are taken at this value.
    double near_boundary = 1e-9;
};

/// The convolution v = p * g (times the cutoff when requested) as an analytic
/// field. Spatial derivatives up to order 3 and u_t = zeta Delta v with one
/// further spatial derivative are available. At x1 = 0 the value is g.
class ExtensionField : public FieldModel {
public:
    /// v[a1][a2] = D_{x1}^{a1} D_{x'}^{a2} v.
    using Jet = std::array<std::array<double, 4>, 4>;

    ExtensionField(BoundaryData g, ExtendOptions opt);

    int n() const override { return data_.n(); }
    int max_space_order() const override { return 3; }
    int max_time_order() const override { return 1; }
    bool supports(const Deriv& d) const override;
    double eval(const Point& x, const Deriv& d) const override;
    void eval_many(const Point& x, std::span<const Deriv> ds, std::span<double> out) const override;

    /// Derivatives of the convolution without cutoff, total order <= `order`.
    Jet convolution_jet(double t, double x1, double xp, int order) const;

    const BoundaryData& data() const { return data_; }
    const ExtendOptions& options() const { return opt_; }
    double cell_cap() const { return cap_; }

private:
    void tangential_convolution(double s, double sigma, double xp, int order, std::array<double, 4>& h) const;

    BoundaryData data_;
    ExtendOptions opt_;
    double cap_ = 0.0;
    double x_scale_ = 0.0;
    std::pair<double, double> support_;
};

/// An extension sampled on a grid together with a representation of its time
/// derivative: g1 = zeta D1 v + int_{max(x1,1)}^2 zeta' D1 v dr, g2 = D2 u,
/// so that u_t = D1 g1 + D2 g2, plus the direct sample u_t = zeta Delta v.
struct Extension {
    std::shared_ptr<const ExtensionField> model;
    GridFunction u;
    TimeDerivativeRep rep;
};

GridFunction extend(const BoundaryData& g, std::shared_ptr<const SpaceTimeGrid> grid, const ExtendOptions& opt = {});

/// extend() plus the time-derivative representation.
Extension extend_with_representation(const BoundaryData& g, std::shared_ptr<const SpaceTimeGrid> grid,
                                     const ExtendOptions& opt = {});

struct ResidualOptions {
    /// Only nodes with x1_min <= x1 <= x1_max enter the maximum.
    double x1_min = 0.0;
    double x1_max = 1e300;
    /// Nodes excluded at each end of every axis.
    std::size_t margin = 2;
};

/// max |u_t - Delta u| over interior nodes, with three-point differences
/// (central in t, non-uniform in x1, central in x'). Uses the samples only.
double heat_residual(const GridFunction& u, const ResidualOptions& opt = {});

struct TraceOptions {
    /// Use the analytic model at the boundary when the function has one.
    bool use_model = true;
    /// Extrapolate quadratically from the three nearest nodes otherwise.
    bool extrapolate = true;
};

/// Boundary values: the boundary node when the grid has one, else the model,
/// else quadratic extrapolation. Interval grids give an IntervalPair.
BoundaryData trace_restrict(const GridFunction& u, const TraceOptions& opt = {});

/// tilde_norm(extension, gamma) / slobodeckij_norm(g). A zero denominator
/// gives a degenerate entry. Extras carry the numerator components.
RatioEntry extension_norm_ratio(const Extension& ext, const BoundaryData& g, const WeightParams& w, int gamma,
                                const SeminormOptions& sopt = {}, std::string label = "extension");

/// Single-function convenience: extends g with the cutoff on `grid`.
RatioReport extension_norm_ratio(const BoundaryData& g, std::shared_ptr<const SpaceTimeGrid> grid,
                                 const WeightParams& w, int gamma, const ExtendOptions& opt = {},
                                 const SeminormOptions& sopt = {});

/// CSV with columns t, x1, xp, value.
void write_grid_csv(const std::string& path, const GridFunction& u);

}  // namespace wtrace
