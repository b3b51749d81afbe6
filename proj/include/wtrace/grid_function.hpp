#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "wtrace/core.hpp"
#include "wtrace/profiles.hpp"

namespace wtrace {

/// Derivative orders in time, x1 and the tangential variable.
struct Deriv {
    int t = 0;
    int x1 = 0;
    int xp = 0;

    int space() const { return x1 + xp; }
    auto operator<=>(const Deriv&) const = default;
};

/// Analytic description of a field on space-time, with derivatives.
class FieldModel {
public:
    virtual ~FieldModel() = default;

    virtual int n() const = 0;
    /// Highest total spatial order and highest time order available.
    virtual int max_space_order() const = 0;
    virtual int max_time_order() const = 0;

    virtual double eval(const Point& x, const Deriv& d) const = 0;

    /// Several derivatives at one point; models with shared work override it.
    virtual void eval_many(const Point& x, std::span<const Deriv> ds, std::span<double> out) const;

    virtual bool supports(const Deriv& d) const {
        return d.space() <= max_space_order() && d.t <= max_time_order() && (n() == 2 || d.xp == 0);
    }
};

/// Field given by a callable (x, d) -> value.
class LambdaField : public FieldModel {
public:
    using Fn = std::function<double(const Point&, const Deriv&)>;
    LambdaField(int n, Fn fn, int max_space_order, int max_time_order)
        : n_(n), fn_(std::move(fn)), space_(max_space_order), time_(max_time_order) {}

    int n() const override { return n_; }
    int max_space_order() const override { return space_; }
    int max_time_order() const override { return time_; }
    double eval(const Point& x, const Deriv& d) const override { return fn_(x, d); }

private:
    int n_;
    Fn fn_;
    int space_;
    int time_;
};

/// Static one-dimensional field u(x1) written once over jets, so every
/// derivative up to kMaxProfileOrder is exact.
class JetField : public FieldModel {
public:
    using Fn = std::function<ProfileJet(const ProfileJet&)>;
    explicit JetField(Fn fn) : fn_(std::move(fn)) {}

    int n() const override { return 1; }
    int max_space_order() const override { return kMaxProfileOrder; }
    int max_time_order() const override { return kMaxProfileOrder; }
    double eval(const Point& x, const Deriv& d) const override;

private:
    Fn fn_;
};

/// One product term A * T(t) * X(x1) * Y(x').
struct SeparableTerm {
    double amplitude = 1.0;
    Profile1D time = Profile1D::constant(1.0);
    Profile1D normal = Profile1D::constant(1.0);
    Profile1D tangential = Profile1D::constant(1.0);
};

/// Finite sum of separable terms.
class SeparableField : public FieldModel {
public:
    SeparableField(int n, std::vector<SeparableTerm> terms);

    int n() const override { return n_; }
    int max_space_order() const override { return kMaxProfileOrder; }
    int max_time_order() const override { return kMaxProfileOrder; }
    double eval(const Point& x, const Deriv& d) const override;

    const std::vector<SeparableTerm>& terms() const { return terms_; }

    /// Model of g1 = -int_{x1}^inf u_t dr (so that D1 g1 = u_t); needs
    /// normal profiles with a finite tail integral.
    std::shared_ptr<const FieldModel> flux_representation() const;

    /// Model of u_t.
    std::shared_ptr<const FieldModel> time_derivative() const;

    /// Model of (t, x) -> u(lambda^2 t, lambda x).
    std::shared_ptr<const SeparableField> rescaled(double lambda) const;

private:
    int n_;
    std::vector<SeparableTerm> terms_;
};

/// Values sampled on a SpaceTimeGrid, optionally backed by an analytic model.
///
/// Derivatives come from the model when it provides them and otherwise from
/// finite differences on the grid: five-point stencils in the interior,
/// (order + 2)-point one-sided stencils within two nodes of an axis end.
/// Derivative arrays are cached; copies share the cache.
class GridFunction {
public:
    GridFunction(std::shared_ptr<const SpaceTimeGrid> grid, std::vector<double> values);

    static GridFunction sample(std::shared_ptr<const SpaceTimeGrid> grid,
                               std::shared_ptr<const FieldModel> model);
    static GridFunction zeros(std::shared_ptr<const SpaceTimeGrid> grid);

    const SpaceTimeGrid& grid() const { return *grid_; }
    const std::shared_ptr<const SpaceTimeGrid>& grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t it, std::size_t ix, std::size_t ip) const {
        return values_[grid_->index(it, ix, ip)];
    }
    const std::shared_ptr<const FieldModel>& model() const { return model_; }
    bool has_model() const { return model_ != nullptr; }

    /// The same samples without the analytic model.
    GridFunction sampled_only() const;

    /// Finite differences are allowed by default; when disabled a derivative
    /// the model cannot supply raises MissingDerivatives.
    GridFunction with_finite_differences(bool allowed) const;
    bool finite_differences_allowed() const { return allow_fd_; }

    /// True when derivative d can be produced (model or finite differences).
    bool can_differentiate(const Deriv& d) const;

    /// Derivative d at every grid point.
    const std::vector<double>& derivative(const Deriv& d) const;

    /// Computes several derivative arrays in one sweep over the grid.
    void prefetch(std::span<const Deriv> ds) const;

    /// Value or derivative at an arbitrary point: the model when present,
    /// otherwise local cubic interpolation of the samples.
    double evaluate(const Point& x, const Deriv& d = {}) const;

    GridFunction scaled(double a) const;
    GridFunction plus(const GridFunction& other) const;

private:
    struct Cache {
        std::mutex mu;
        std::map<Deriv, std::vector<double>> arrays;
    };

    std::vector<double> finite_difference(const Deriv& d) const;

    std::shared_ptr<const SpaceTimeGrid> grid_;
    std::vector<double> values_;
    std::shared_ptr<const FieldModel> model_;
    bool allow_fd_ = true;
    std::shared_ptr<Cache> cache_;
};

/// A representation u_t = sum_i D_i g_i, plus an optional direct sample of
/// u_t. The direct slot is what second-order norms consume; the components
/// are what first-order norms consume.
struct TimeDerivativeRep {
    std::vector<GridFunction> g;
    std::optional<GridFunction> ut;

    bool has_components() const { return !g.empty(); }

    /// Representation built from analytic models on a grid.
    static TimeDerivativeRep from_models(std::shared_ptr<const SpaceTimeGrid> grid,
                                         std::vector<std::shared_ptr<const FieldModel>> g,
                                         std::shared_ptr<const FieldModel> ut = nullptr);

    /// For n = 1: g1(t, x) = int_{x_ref}^{x} u_t(t, r) dr by cumulative
    /// trapezoid on the grid; valid for any sampled u_t.
    static TimeDerivativeRep from_antiderivative(const GridFunction& ut, double x_ref);
};

/// Test function for distributional checks: smooth, compactly supported in
/// the open domain, with exact derivatives.
using TestFunction = std::shared_ptr<const FieldModel>;

/// Max over the test functions of |int u phi_t - sum_i int g_i D_i phi|,
/// relative to the larger of the two sides; zero means the pairing holds.
double pairing_defect(const GridFunction& u, const TimeDerivativeRep& rep,
                      std::span<const TestFunction> tests);

}  // namespace wtrace
