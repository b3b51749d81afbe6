#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "wtrace/boundary_norms.hpp"
#include "wtrace/core.hpp"
#include "wtrace/grid_function.hpp"
#include "wtrace/norms.hpp"
#include "wtrace/profiles.hpp"

namespace wtrace {

enum class MollifierMode {
    /// phi supported in {-1 < t < 1, -0.7 < x1 < -0.1, |x'| < 0.6}.
    Density,
    /// phi = eta(x1) zeta(t, x') with supp eta in (-1, -1/2) and
    /// supp zeta in (0, 1) x (-1, 1).
    Representation,
};

/// Separable mollifier phi(t, x) = c eta(x1) zeta_t(t) zeta_x(x'), with the
/// standard bump exp(-1/(1-z^2)) in every factor and c fixing the mass to 1.
/// u^(eps)(t, x) = int phi(tau, z) u(t - eps^2 tau, x - eps z) dtau dz, so the
/// support in x1 < 0 means u is only read at x1 >= the evaluation point.
struct Mollifier {
    MollifierMode mode = MollifierMode::Representation;
    int n = 1;
    Profile1D eta;
    Profile1D zeta_t;
    Profile1D zeta_x;
    double normalization = 1.0;
    /// Composite Gauss rule per variable: cells x points over each support.
    int cells = 4;
    int points = 8;

    static Mollifier make(MollifierMode mode, int n, int cells = 4, int points = 8);

    /// The same profiles with `factor` times as many cells.
    Mollifier refined(int factor = 2) const;

    double phi(double t, double x1, double xp = 0.0) const;

    /// Quadrature of phi over its support (1 up to rounding).
    double mass() const;

    /// int (-z1) phi: u = x1 mollifies to eps times this at x1 = 0.
    double normal_moment() const;

    struct Nodes {
        std::vector<double> tau, tau_w, z1, z1_w, zp, zp_w;
    };
    /// Tensor quadrature nodes over the support (zp = {0} for n = 1).
    const Nodes& nodes() const;

private:
    std::shared_ptr<const Nodes> nodes_;
};

/// Counts of evaluations made by the mollification routines.
struct EvalCounter {
    std::atomic<std::size_t> evaluations{0};
    std::atomic<std::size_t> below_boundary{0};
};

/// D^d u^(eps) at x, computed as the mollification of D^d u.
double mollify_value(const GridFunction& u, const Point& x, double eps, const Mollifier& m, const Deriv& d = {},
                     EvalCounter* counter = nullptr);

/// u^(eps) on the grid of u. When u has an analytic model the result carries
/// a model whose derivatives are the mollified derivatives of u.
GridFunction mollify(const GridFunction& u, double eps, const Mollifier& m,
                     std::shared_ptr<EvalCounter> counter = nullptr);

struct VTerms {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
    double sum() const { return v1 + v2 + v3; }
};

/// The three lambda-integrands at (t, 0, x'), in reference coordinates
/// l = t - lambda tau, z1 = sqrt(lambda) w1, z' = x' - sqrt(lambda) w':
///   V1 = lambda^{-1/2} / 2 int D1 u w1 phi(tau, -w1, w')
///   V2 = lambda^{-1/2} / 2 int grad' u . (-w') phi(tau, -w1, w')
///   V3 = lambda^{-1/2} int (-tau) g . (grad phi)(tau, -w1, w')
/// V2 = 0 for n = 1.
VTerms vj_terms(const GridFunction& u, const TimeDerivativeRep& rep, double t, double xp, double lambda,
                const Mollifier& m);

struct RepresentationOptions {
    /// The lambda integral runs over mu = sqrt(lambda) in [sqrt(lambda_min), eps]
    /// with `lambda_cells` x `lambda_points` Gauss nodes; (0, lambda_min) is
    /// added as 2 sqrt(lambda_min) (sqrt(lambda) V)(lambda_min).
    int lambda_cells = 4;
    int lambda_points = 8;
    double lambda_min = 0.0;

    RepresentationOptions refined(int factor = 2) const;
};

struct SampleResidual {
    double t = 0.0;
    double xp = 0.0;
    double boundary_value = 0.0;
    double mollified = 0.0;
    double integral = 0.0;
    double residual = 0.0;
};

struct RepresentationResult {
    std::vector<SampleResidual> samples;
    double max_residual = 0.0;
};

/// |u(t,0,x') - u^(eps)(t,0,x') + sum_j int_0^{eps^2} V_j dlambda| at each sample.
RepresentationResult representation_residual(const GridFunction& u, const TimeDerivativeRep& rep, double eps,
                                             const std::vector<std::pair<double, double>>& samples,
                                             const Mollifier& m, const RepresentationOptions& opt = {});

struct TraceCase {
    std::string label;
    GridFunction u;
    TimeDerivativeRep rep;
};

/// Per function: slobodeckij_norm(trace_restrict(u)) / tilde_norm(u, rep, w, 1).
/// Zero denominators are flagged, not fatal.
RatioReport trace_inequality_ratio(const std::vector<TraceCase>& battery, const WeightParams& w,
                                   const SeminormOptions& sopt = {});

}  // namespace wtrace
