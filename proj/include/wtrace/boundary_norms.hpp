#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wtrace/core.hpp"
#include "wtrace/norms.hpp"
#include "wtrace/profiles.hpp"
#include "wtrace/quad.hpp"

namespace wtrace {

enum class BoundaryKind {
    Line,          ///< n = 1 half line: g(t)
    Plane,         ///< n = 2 half plane: g(t, x')
    IntervalPair,  ///< unit interval: (g_left(t), g_right(t))
};

/// One product term A * T(t) * Y(x') of separable boundary data.
struct BoundaryTerm {
    double amplitude = 1.0;
    Profile1D time = Profile1D::constant(1.0);
    Profile1D tangential = Profile1D::constant(1.0);
};

/// Boundary data on a (t) or (t, x') grid, one or two components.
///
/// Samples are stored as values[it * np + ip]. Off-grid values come from the
/// analytic closure when there is one and otherwise from local cubic
/// interpolation; outside the sampled window the data are zero.
class BoundaryData {
public:
    /// (t, x', dt, dx') -> derivative of the data.
    using Fn = std::function<double(double, double, int, int)>;

    static BoundaryData line(UniformAxis time, std::vector<double> values, Fn fn = {});
    static BoundaryData plane(UniformAxis time, UniformAxis tangential, std::vector<double> values, Fn fn = {});
    static BoundaryData pair(UniformAxis time, std::vector<double> left, std::vector<double> right,
                             Fn left_fn = {}, Fn right_fn = {});

    /// Data sampled from a closure (one closure per component).
    static BoundaryData from_functions(BoundaryKind kind, UniformAxis time, std::optional<UniformAxis> tangential,
                                       std::vector<Fn> fns);

    /// Line or plane data given by separable terms; keeps the terms.
    static BoundaryData from_terms(BoundaryKind kind, UniformAxis time, std::optional<UniformAxis> tangential,
                                   std::vector<BoundaryTerm> terms);

    BoundaryKind kind() const { return kind_; }
    int n() const { return kind_ == BoundaryKind::Plane ? 2 : 1; }
    std::size_t components() const { return values_.size(); }
    const UniformAxis& time() const { return time_; }
    const std::optional<UniformAxis>& tangential() const { return tangential_; }
    std::size_t np() const { return tangential_ ? tangential_->size() : 1; }
    const std::vector<double>& values(std::size_t component = 0) const { return values_.at(component); }
    bool has_closure(std::size_t component = 0) const { return static_cast<bool>(fns_.at(component)); }
    const std::vector<BoundaryTerm>* terms() const { return terms_ ? terms_.get() : nullptr; }

    double eval(std::size_t component, double t, double xp = 0.0, int dt = 0, int dxp = 0) const;

    /// Smallest interval containing the time support (from the terms, or
    /// from the nonzero samples widened by the interpolation stencil).
    std::pair<double, double> time_support() const;

    /// The same data without closures or terms.
    BoundaryData sampled_only() const;

    /// alpha * this + beta * other on the same grid.
    BoundaryData combine(double alpha, const BoundaryData& other, double beta) const;

    std::string describe() const;

private:
    BoundaryKind kind_ = BoundaryKind::Line;
    UniformAxis time_;
    std::optional<UniformAxis> tangential_;
    std::vector<std::vector<double>> values_;
    std::vector<Fn> fns_;
    std::shared_ptr<const std::vector<BoundaryTerm>> terms_;
};

enum class TimeMode {
    Auto,       ///< WholeLine for line/plane data, Window for interval pairs
    WholeLine,  ///< data extended by zero to all t
    Window,     ///< double integral over the sampled window only
};

struct SeminormOptions {
    QuadSpec quad;
    TimeMode time_mode = TimeMode::Auto;
    /// Gauss points per inner cell; inner cells are the data grid cells
    /// divided `inner_refine` times.
    int cell_points = 4;
    int inner_refine = 1;
};

struct SeminormValue {
    double value = 0.0;
    /// Quadrature estimate (fine vs coarse log grid).
    double error_estimate = 0.0;
    /// Bound on the mass dropped below the diagonal cutoff, for Lipschitz data.
    double truncation_bound = 0.0;
};

/// (2 int_{tau_min} tau^{-1-sp/2} ||g(. + tau, .) - g||_p^p dtau)^{1/p},
/// summed over components (interval pairs add the endpoint seminorms).
SeminormValue time_seminorm(const BoundaryData& g, const WeightParams& w, const SeminormOptions& opt = {});

/// Spatial seminorm over x', x' in R with kernel |x' - y'|^{-(1 + sp)};
/// plane data only.
SeminormValue space_seminorm(const BoundaryData& g, const WeightParams& w, const SeminormOptions& opt = {});

/// L_p norm of the data over the window, summed over components.
double boundary_lp_norm(const BoundaryData& g, const WeightParams& w, const SeminormOptions& opt = {});

/// ||g||_{L_p} + time seminorm (+ space seminorm for plane data); interval
/// pairs add the per-endpoint norms. Notes record zero compatibility.
NormReport slobodeckij_norm(const BoundaryData& g, const WeightParams& w, const SeminormOptions& opt = {});

/// True when the data vanish (to `tol` relative to max |g|) where a
/// zero-compatible extension requires: at the window start, and for
/// WholeLine mode also at the window end.
bool zero_compatible(const BoundaryData& g, TimeMode mode, double tol = 1e-8);

/// CSV with columns t, xp, value (interval pairs put 0 / 1 in xp) plus a
/// JSON sidecar `<path>.meta.json` holding the window and grid steps.
void write_boundary_csv(const std::string& path, const BoundaryData& g);
BoundaryData read_boundary_csv(const std::string& path);

}  // namespace wtrace
