#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wtrace/boundary_norms.hpp"
#include "wtrace/core.hpp"
#include "wtrace/grid_function.hpp"
#include "wtrace/norms.hpp"

namespace wtrace {

enum class BvpForm {
    /// -u_t + u_xx + b u_x + c u = f
    NonDivergence,
    /// -u_t + D(Du + b u) + bt Du + c u = D f1 + f0
    Divergence,
};

enum class TimeScheme { ImplicitEuler, CrankNicolson };

/// (t, x) -> value; an empty function means zero.
using Coefficient = std::function<double(double, double)>;

/// (t, time-derivative order) -> boundary value; an empty function means zero.
using BoundaryFunction = std::function<double(double, int)>;

/// Problem on (0, T) x (0, 1) with u(0, .) = 0 and u = g_left, g_right at
/// x = 0, 1.
struct BvpProblem {
    BvpForm form = BvpForm::NonDivergence;
    Coefficient b;
    Coefficient b_tilde;
    Coefficient c;
    /// Right side f (non-divergence) or the extra term f0 (divergence).
    Coefficient f;
    /// Flux data f1 (divergence form only).
    Coefficient f1;
    BoundaryFunction g_left;
    BoundaryFunction g_right;
    double T = 1.0;
    WeightParams w = WeightParams::make(2.0, 0.5, 1);
    /// Bound on the weighted coefficient sizes.
    double Lambda = 10.0;
    /// Bound on rho |b| (non-divergence) or rho |bt| (divergence) near the boundary.
    double beta = 0.1;
    /// Width of the boundary layer where beta is enforced.
    double boundary_layer = 0.05;
    TimeScheme scheme = TimeScheme::ImplicitEuler;
};

struct BvpSolution {
    GridFunction u;
    /// Backward difference quotients (u^k - u^{k-1}) / dt, zero at t = 0.
    GridFunction ut;
    /// Lifting and zero-boundary part when produced by lift_and_solve.
    std::optional<GridFunction> v;
    std::optional<GridFunction> w;
};

/// Mesh for the solvers: uniform time axis on [0, T] with `steps` cells and
/// the graded interval grid with boundary nodes.
std::shared_ptr<const SpaceTimeGrid> bvp_mesh(double T, int steps, int cells_per_half, double q = 1.0);

/// Samples rho |b| + rho |c| (non-divergence) or |b| + rho |bt| + rho |c|
/// (divergence) at interior nodes and cell centres; throws
/// CoefficientBoundViolated when Lambda or the boundary-layer beta is exceeded.
void check_coefficients(const BvpProblem& prob, const SpaceTimeGrid& mesh);

/// Implicit (or Crank-Nicolson) three-point finite differences.
BvpSolution solve_nondivergence(const BvpProblem& prob, std::shared_ptr<const SpaceTimeGrid> mesh);

/// Flux form: faces carry (u_{i+1} - u_i)/h + b (u_i + u_{i+1})/2 - f1 at the
/// cell centre, nodes carry bt Du + c u - f0.
BvpSolution solve_divergence(const BvpProblem& prob, std::shared_ptr<const SpaceTimeGrid> mesh);

/// Dispatches on prob.form.
BvpSolution solve(const BvpProblem& prob, std::shared_ptr<const SpaceTimeGrid> mesh);

/// u = v + w with v = zeta(x/l) E[g_left](t, x) + zeta((1-x)/l) E[g_right](t, 1-x),
/// l = 1/4, E the half-line extension, and w the zero-boundary solution of the
/// problem with the right side absorbing v.
BvpSolution lift_and_solve(const BvpProblem& prob, std::shared_ptr<const SpaceTimeGrid> mesh);

/// The boundary pair as data on [0, T] with `cells` time cells.
BoundaryData boundary_pair(const BvpProblem& prob, int cells);

/// Non-divergence: ||u||_{tilde H^2} / (||f||_{L_{p,theta+p}} + ||g||_W).
/// Divergence: ||u||_{tilde H^1} / (||f1||_{L_{p,theta}} + ||g||_W), with the
/// H^{-1} part of u_t taken from its antiderivative about x = 1/2.
RatioEntry estimate_report(const BvpSolution& sol, const BvpProblem& prob, const SeminormOptions& sopt = {},
                           std::string label = "bvp");

/// Max |u - exact| over the mesh.
double max_error(const GridFunction& u, const std::function<double(double, double)>& exact);

}  // namespace wtrace
