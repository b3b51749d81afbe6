#include "wtrace/bvp1d.hpp"

#include <algorithm>
#include <cmath>

#include "wtrace/heat_ext.hpp"
#include "wtrace/stencil.hpp"

namespace wtrace {

namespace {

constexpr double kLiftScale = 0.25;

double call(const Coefficient& f, double t, double x) { return f ? f(t, x) : 0.0; }
double call(const BoundaryFunction& g, double t, int order = 0) { return g ? g(t, order) : 0.0; }

struct Mesh1D {
    std::vector<double> t;
    std::vector<double> x;
    double dt = 0.0;
};

Mesh1D unpack(const SpaceTimeGrid& mesh) {
    if (mesh.n() != 1) throw DimensionMismatch("bvp solver is one-dimensional");
    if (mesh.is_static()) throw ValidationError("bvp solver needs a time axis");
    const auto& normal = mesh.normal();
    if (normal.kind() != AxisKind::Interval || !normal.include_boundary_node()) {
        throw ValidationError("bvp solver needs an interval grid with boundary nodes");
    }
    const auto& time = *mesh.time();
    if (std::abs(time.a()) > 1e-14) throw ValidationError("time axis must start at t = 0");
    if (normal.size() < 3) throw ValidationError("bvp solver needs at least one interior node");
    return {time.nodes(), normal.nodes(), time.step()};
}

/// Tridiagonal rows (lo, diag, up) of the spatial operator at time t.
struct Rows {
    std::vector<double> lo, diag, up;
    explicit Rows(std::size_t n) : lo(n, 0.0), diag(n, 0.0), up(n, 0.0) {}
};

Rows operator_rows(const BvpProblem& prob, const std::vector<double>& x, double t) {
    const std::size_t n = x.size();
    Rows r(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double nodes[3] = {x[i - 1], x[i], x[i + 1]};
        const auto d1 = fd_weights(x[i], nodes, 1);
        const double bt = prob.form == BvpForm::NonDivergence ? call(prob.b, t, x[i]) : call(prob.b_tilde, t, x[i]);
        const double c = call(prob.c, t, x[i]);
        if (prob.form == BvpForm::NonDivergence) {
            const auto d2 = fd_weights(x[i], nodes, 2);
            r.lo[i] = d2[0] + bt * d1[0];
            r.diag[i] = d2[1] + bt * d1[1] + c;
            r.up[i] = d2[2] + bt * d1[2];
        } else {
            const double hl = x[i] - x[i - 1];
            const double hr = x[i + 1] - x[i];
            const double H = 0.5 * (hl + hr);
            const double bl = call(prob.b, t, 0.5 * (x[i - 1] + x[i]));
            const double br = call(prob.b, t, 0.5 * (x[i] + x[i + 1]));
            // F_{i+1/2} = (u_{i+1} - u_i)/h + b (u_i + u_{i+1})/2
            r.lo[i] = (1.0 / hl - 0.5 * bl) / H + bt * d1[0];
            r.diag[i] = (-1.0 / hr + 0.5 * br - 1.0 / hl - 0.5 * bl) / H + bt * d1[1] + c;
            r.up[i] = (1.0 / hr + 0.5 * br) / H + bt * d1[2];
        }
    }
    return r;
}

std::vector<double> thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                           std::vector<double> d) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double m = a[i] / b[i - 1];
            b[i] -= m * c[i - 1];
            d[i] -= m * d[i - 1];
        }
        const double scale = std::abs(b[i]) + std::abs(a[i]) + std::abs(c[i]);
        if (!(std::abs(b[i]) > 1e-14 * scale) || !std::isfinite(b[i])) {
            throw SingularSystem("tridiagonal solve hit a zero pivot at row " + std::to_string(i));
        }
    }
    std::vector<double> u(n);
    u[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) u[i] = (d[i] - c[i] * u[i + 1]) / b[i];
    return u;
}

/// Forcing r with u_t = L u - r, plus boundary values, on every time level.
struct Discrete {
    std::vector<std::vector<double>> r;
    std::vector<double> left, right;
    /// Optional per-level amount subtracted from each step's increment.
    std::vector<std::vector<double>> shift;
};

Discrete data_forcing(const BvpProblem& prob, const Mesh1D& m) {
    Discrete d;
    const std::size_t nx = m.x.size();
    d.r.assign(m.t.size(), std::vector<double>(nx, 0.0));
    d.left.resize(m.t.size());
    d.right.resize(m.t.size());
    for (std::size_t k = 0; k < m.t.size(); ++k) {
        const double t = m.t[k];
        d.left[k] = call(prob.g_left, t);
        d.right[k] = call(prob.g_right, t);
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            double r = call(prob.f, t, m.x[i]);
            if (prob.form == BvpForm::Divergence && prob.f1) {
                const double H = 0.5 * (m.x[i + 1] - m.x[i - 1]);
                r += (prob.f1(t, 0.5 * (m.x[i] + m.x[i + 1])) - prob.f1(t, 0.5 * (m.x[i - 1] + m.x[i]))) / H;
            }
            d.r[k][i] = r;
        }
    }
    return d;
}

void check_zero_start(const BvpProblem& prob) {
    const double gl = call(prob.g_left, 0.0);
    const double gr = call(prob.g_right, 0.0);
    if (std::abs(gl) > 1e-12 || std::abs(gr) > 1e-12) {
        throw NonzeroBoundaryValue("boundary data must vanish at t = 0 (zero initial condition)");
    }
}

std::vector<double> march(const BvpProblem& prob, const Mesh1D& m, const Discrete& d) {
    const std::size_t nt = m.t.size();
    const std::size_t nx = m.x.size();
    const double th = prob.scheme == TimeScheme::CrankNicolson ? 0.5 : 1.0;
    const double dt = m.dt;
    std::vector<double> out(nt * nx, 0.0);
    std::vector<double> u(nx, 0.0);
    Rows prev = operator_rows(prob, m.x, m.t[0]);
    for (std::size_t k = 0; k + 1 < nt; ++k) {
        Rows next = operator_rows(prob, m.x, m.t[k + 1]);
        std::vector<double> a(nx, 0.0), b(nx, 1.0), c(nx, 0.0), rhs(nx, 0.0);
        rhs[0] = d.left[k + 1];
        rhs[nx - 1] = d.right[k + 1];
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            a[i] = -dt * th * next.lo[i];
            b[i] = 1.0 - dt * th * next.diag[i];
            c[i] = -dt * th * next.up[i];
            double explicit_part = 0.0;
            if (th < 1.0) {
                explicit_part = prev.lo[i] * u[i - 1] + prev.diag[i] * u[i] + prev.up[i] * u[i + 1] - d.r[k][i];
            }
            rhs[i] = u[i] + dt * (1.0 - th) * explicit_part - dt * th * d.r[k + 1][i];
            if (!d.shift.empty()) rhs[i] -= d.shift[k + 1][i];
        }
        u = thomas(std::move(a), std::move(b), std::move(c), std::move(rhs));
        std::copy(u.begin(), u.end(), out.begin() + static_cast<std::ptrdiff_t>((k + 1) * nx));
        prev = std::move(next);
    }
    return out;
}

GridFunction backward_difference(const GridFunction& u, double dt) {
    const auto& g = u.grid();
    std::vector<double> v(g.size(), 0.0);
    for (std::size_t k = 1; k < g.nt(); ++k) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            v[g.index(k, i, 0)] = (u.value(k, i, 0) - u.value(k - 1, i, 0)) / dt;
        }
    }
    return GridFunction(u.grid_ptr(), std::move(v));
}

BvpSolution finish(std::shared_ptr<const SpaceTimeGrid> mesh, std::vector<double> values, double dt) {
    GridFunction u(std::move(mesh), std::move(values));
    GridFunction ut = backward_difference(u, dt);
    return {u, ut, std::nullopt, std::nullopt};
}

/// Half-line extension of one endpoint's data, no cutoff.
std::shared_ptr<const ExtensionField> endpoint_extension(const BoundaryFunction& g, double T, int cells) {
    if (!g) return nullptr;
    BoundaryData::Fn fn = [g](double t, double, int dt, int dxp) {
        if (dxp != 0 || t < 0.0) return 0.0;
        return g(t, dt);
    };
    auto data = BoundaryData::from_functions(BoundaryKind::Line, UniformAxis(0.0, T, cells), std::nullopt, {fn});
    return std::make_shared<ExtensionField>(std::move(data), ExtendOptions{});
}

/// v(t, x) = zeta(x/l) E_left(t, x) + zeta((1-x)/l) E_right(t, 1-x).
class Lifting {
public:
    Lifting(const BvpProblem& prob, int cells)
        : left_(endpoint_extension(prob.g_left, prob.T, cells)),
          right_(endpoint_extension(prob.g_right, prob.T, cells)) {}

    bool trivial() const { return !left_ && !right_; }

    double at(double t, double x) const { return part(left_.get(), t, x) + part(right_.get(), t, 1.0 - x); }

private:
    static double part(const ExtensionField* e, double t, double y) {
        if (!e || t <= 0.0) return 0.0;
        const double z = cutoff(y / kLiftScale);
        if (z == 0.0) return 0.0;
        return z * e->convolution_jet(t, std::max(y, 0.0), 0.0, 0)[0][0];
    }

    std::shared_ptr<const ExtensionField> left_;
    std::shared_ptr<const ExtensionField> right_;
};

}  // namespace

std::shared_ptr<const SpaceTimeGrid> bvp_mesh(double T, int steps, int cells_per_half, double q) {
    if (!(T > 0.0)) throw BadInterval("horizon T must be positive");
    if (steps < 1 || cells_per_half < 1) throw ValidationError("mesh sizes must be positive");
    return std::make_shared<SpaceTimeGrid>(UniformAxis(0.0, T, steps), GradedGrid::interval(cells_per_half, q, true),
                                           std::nullopt, 1);
}

void check_coefficients(const BvpProblem& prob, const SpaceTimeGrid& mesh) {
    const auto m = unpack(mesh);
    std::vector<double> xs;
    for (std::size_t i = 0; i + 1 < m.x.size(); ++i) {
        if (i > 0) xs.push_back(m.x[i]);
        xs.push_back(0.5 * (m.x[i] + m.x[i + 1]));
    }
    for (double t : m.t) {
        for (double x : xs) {
            const double rho = std::min(x, 1.0 - x);
            double size = 0.0;
            double singular = 0.0;
            if (prob.form == BvpForm::NonDivergence) {
                singular = rho * std::abs(call(prob.b, t, x));
                size = singular + rho * std::abs(call(prob.c, t, x));
            } else {
                singular = rho * std::abs(call(prob.b_tilde, t, x));
                size = std::abs(call(prob.b, t, x)) + singular + rho * std::abs(call(prob.c, t, x));
            }
            if (!std::isfinite(size) || size > prob.Lambda) {
                throw CoefficientBoundViolated("weighted coefficient size " + std::to_string(size) + " exceeds Lambda = " +
                                               std::to_string(prob.Lambda) + " at t = " + std::to_string(t) +
                                               ", x = " + std::to_string(x));
            }
            if (rho < prob.boundary_layer && singular > prob.beta) {
                throw CoefficientBoundViolated("rho times the first-order coefficient is " + std::to_string(singular) +
                                               " > beta = " + std::to_string(prob.beta) + " at x = " +
                                               std::to_string(x));
            }
        }
    }
}

BvpSolution solve_nondivergence(const BvpProblem& prob, std::shared_ptr<const SpaceTimeGrid> mesh) {
    if (prob.form != BvpForm::NonDivergence) throw ValidationError("problem is not in non-divergence form");
    return solve(prob, std::move(mesh));
}

BvpSolution solve_divergence(const BvpProblem& prob, std::shared_ptr<const SpaceTimeGrid> mesh) {
    if (prob.form != BvpForm::Divergence) throw ValidationError("problem is not in divergence form");
    return solve(prob, std::move(mesh));
}

BvpSolution solve(const BvpProblem& prob, std::shared_ptr<const SpaceTimeGrid> mesh) {
    if (!mesh) throw ValidationError("missing mesh");
    const auto m = unpack(*mesh);
    check_zero_start(prob);
    check_coefficients(prob, *mesh);
    auto values = march(prob, m, data_forcing(prob, m));
    return finish(std::move(mesh), std::move(values), m.dt);
}

BvpSolution lift_and_solve(const BvpProblem& prob, std::shared_ptr<const SpaceTimeGrid> mesh) {
    if (!mesh) throw ValidationError("missing mesh");
    const auto m = unpack(*mesh);
    check_zero_start(prob);
    check_coefficients(prob, *mesh);
    const std::size_t nt = m.t.size();
    const std::size_t nx = m.x.size();
    const Lifting lift(prob, 128);

    std::vector<double> v(nt * nx, 0.0);
    if (!lift.trivial()) {
        for (std::size_t k = 1; k < nt; ++k) {
            for (std::size_t i = 0; i < nx; ++i) v[k * nx + i] = lift.at(m.t[k], m.x[i]);
        }
    }

    // The right side absorbs v through the scheme's own operator:
    // r_w = r - L v (so D(f1 - Dv - b v) - bt Dv - c v in divergence form) and
    // the step difference of v stands in for v_t.
    Discrete d = data_forcing(prob, m);
    std::fill(d.left.begin(), d.left.end(), 0.0);
    std::fill(d.right.begin(), d.right.end(), 0.0);
    d.shift.assign(nt, std::vector<double>(nx, 0.0));
    for (std::size_t k = 0; k < nt; ++k) {
        const Rows rows = operator_rows(prob, m.x, m.t[k]);
        const double* vk = v.data() + k * nx;
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            d.r[k][i] -= rows.lo[i] * vk[i - 1] + rows.diag[i] * vk[i] + rows.up[i] * vk[i + 1];
            if (k > 0) d.shift[k][i] = vk[i] - vk[i - nx];
        }
    }

    auto wvals = march(prob, m, d);
    std::vector<double> uvals(nt * nx);
    for (std::size_t i = 0; i < uvals.size(); ++i) uvals[i] = v[i] + wvals[i];
    auto sol = finish(mesh, std::move(uvals), m.dt);
    sol.v = GridFunction(mesh, std::move(v));
    sol.w = GridFunction(mesh, std::move(wvals));
    return sol;
}

BoundaryData boundary_pair(const BvpProblem& prob, int cells) {
    if (cells < 1) throw ValidationError("boundary grid needs a positive cell count");
    const UniformAxis axis(0.0, prob.T, cells);
    auto wrap = [](const BoundaryFunction& g) -> BoundaryData::Fn {
        return [g](double t, double, int dt, int dxp) { return (dxp != 0 || !g) ? 0.0 : g(t, dt); };
    };
    return BoundaryData::from_functions(BoundaryKind::IntervalPair, axis, std::nullopt,
                                        {wrap(prob.g_left), wrap(prob.g_right)});
}

RatioEntry estimate_report(const BvpSolution& sol, const BvpProblem& prob, const SeminormOptions& sopt,
                           std::string label) {
    const auto& mesh = sol.u.grid_ptr();
    const auto m = unpack(*mesh);
    const auto& w = prob.w;
    if (w.n() != 1) throw DimensionMismatch("bvp estimates use n = 1 weights");
    const auto g = boundary_pair(prob, static_cast<int>(m.t.size() - 1));
    const auto gnorm = slobodeckij_norm(g, w, sopt);

    auto sample = [&](const Coefficient& f) {
        std::vector<double> vals(mesh->size(), 0.0);
        if (f) {
            for (std::size_t k = 0; k < m.t.size(); ++k) {
                for (std::size_t i = 0; i < m.x.size(); ++i) {
                    if (!mesh->normal().is_boundary_node(i)) vals[mesh->index(k, i, 0)] = f(m.t[k], m.x[i]);
                }
            }
        }
        return GridFunction(mesh, std::move(vals));
    };

    NormReport num;
    double data = 0.0;
    if (prob.form == BvpForm::NonDivergence) {
        TimeDerivativeRep rep;
        rep.ut = sol.ut;
        num = tilde_norm(sol.u, rep, w, 2);
        data = lp_theta_norm(sample(prob.f), w.shifted(w.p()));
    } else {
        num = tilde_norm(sol.u, TimeDerivativeRep::from_antiderivative(sol.ut, 0.5), w, 1);
        data = lp_theta_norm(sample(prob.f1), w) + lp_theta_norm(sample(prob.f), w.shifted(w.p()));
    }
    auto e = make_ratio(std::move(label), num.total, data + gnorm.total);
    for (const auto& c : num.components) e.extras.emplace_back("num_" + c.name, c.value);
    e.extras.emplace_back("den_f", data);
    e.extras.emplace_back("den_g", gnorm.total);
    return e;
}

double max_error(const GridFunction& u, const std::function<double(double, double)>& exact) {
    const auto& g = u.grid();
    double err = 0.0;
    for (std::size_t k = 0; k < g.nt(); ++k) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const auto p = g.point(k, i, 0);
            err = std::max(err, std::abs(u.value(k, i, 0) - exact(p.t, p.x1)));
        }
    }
    return err;
}

}  // namespace wtrace
